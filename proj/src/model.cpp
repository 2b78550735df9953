#include "qbsim/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qbsim {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

const char* to_string(MarkovianityLabel label) {
  switch (label) {
    case MarkovianityLabel::markovian_like: return "markovian-like";
    case MarkovianityLabel::intermediate: return "intermediate";
    case MarkovianityLabel::non_markovian_like: return "non-markovian-like";
  }
  return "?";
}

const char* to_string(DampingLabel label) {
  switch (label) {
    case DampingLabel::underdamped: return "underdamped";
    case DampingLabel::intermediate: return "intermediate";
    case DampingLabel::overdamped: return "overdamped";
    case DampingLabel::uncoupled: return "uncoupled";
  }
  return "?";
}

SystemParams validate_params(const SystemParams& p) {
  require_finite(p.omega0, "omega0");
  require_finite(p.kappa, "kappa");
  require_finite(p.gamma, "gamma");
  require_finite(p.lambda, "lambda");
  require_finite(p.delta, "delta");
  if (p.omega0 <= 0.0) throw std::invalid_argument("omega0 must be positive");
  if (p.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  if (p.gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  if (p.kappa < 0.0) throw std::invalid_argument("kappa must be nonnegative");
  return p;
}

InitialAmplitudes validate_init(const InitialAmplitudes& init) {
  if (!std::isfinite(init.mu0.real()) || !std::isfinite(init.mu0.imag())) {
    throw std::invalid_argument("mu0 must be finite");
  }
  if (!std::isfinite(init.nu0.real()) || !std::isfinite(init.nu0.imag())) {
    throw std::invalid_argument("nu0 must be finite");
  }
  const double norm = std::norm(init.mu0) + std::norm(init.nu0);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("initial amplitudes must satisfy |mu0|^2 + |nu0|^2 = 1");
  }
  return init;
}

double memory_ratio(const SystemParams& p) { return p.gamma / p.lambda; }

RegimeReport classify_regime(const SystemParams& p) {
  validate_params(p);
  RegimeReport r;
  r.memory_ratio = p.gamma / p.lambda;
  // decade thresholds, boundaries inclusive so e.g. gamma = 10 kappa counts
  // as overdamped; the labels are advisory and never gate computation
  if (r.memory_ratio <= 0.1) {
    r.markovianity_label = MarkovianityLabel::markovian_like;
  } else if (r.memory_ratio >= 10.0) {
    r.markovianity_label = MarkovianityLabel::non_markovian_like;
  } else {
    r.markovianity_label = MarkovianityLabel::intermediate;
  }
  if (p.kappa == 0.0) {
    r.damping_ratio = std::numeric_limits<double>::infinity();
    r.damping_label = DampingLabel::uncoupled;
  } else {
    r.damping_ratio = p.gamma / p.kappa;
    if (r.damping_ratio <= 0.1) {
      r.damping_label = DampingLabel::underdamped;
    } else if (r.damping_ratio >= 10.0) {
      r.damping_label = DampingLabel::overdamped;
    } else {
      r.damping_label = DampingLabel::intermediate;
    }
  }
  return r;
}

cplx memory_kernel(const SystemParams& p, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
  return 0.5 * p.gamma * p.lambda * std::exp(cplx(-p.lambda * tau, p.delta * tau));
}

cplx kernel_laplace(const SystemParams& p, cplx s) {
  const cplx denom = s + cplx(p.lambda, -p.delta);
  if (denom == cplx(0.0, 0.0)) {
    throw std::invalid_argument("s coincides with the kernel pole -lambda + i delta");
  }
  return 0.5 * p.gamma * p.lambda / denom;
}

double spectral_density(const SystemParams& p, double omega) {
  const double d = p.omega0 - omega - p.delta;
  return p.gamma * p.lambda * p.lambda / (2.0 * M_PI * (d * d + p.lambda * p.lambda));
}

}  // namespace qbsim
