#include "qbsim/volterra.hpp"

#include <cmath>
#include <string>

namespace qbsim {

namespace {

AugmentedState axpy(const AugmentedState& a, double c, const AugmentedState& b) {
  return {a.mu + c * b.mu, a.nu + c * b.nu, a.xA + c * b.xA, a.xB + c * b.xB};
}

AugmentedState rk4_step(const AugmentedState& y, double h, const SystemParams& p) {
  const AugmentedState k1 = derivative(y, p);
  const AugmentedState k2 = derivative(axpy(y, 0.5 * h, k1), p);
  const AugmentedState k3 = derivative(axpy(y, 0.5 * h, k2), p);
  const AugmentedState k4 = derivative(axpy(y, h, k3), p);
  AugmentedState out = y;
  const double w = h / 6.0;
  out.mu += w * (k1.mu + 2.0 * k2.mu + 2.0 * k3.mu + k4.mu);
  out.nu += w * (k1.nu + 2.0 * k2.nu + 2.0 * k3.nu + k4.nu);
  out.xA += w * (k1.xA + 2.0 * k2.xA + 2.0 * k3.xA + k4.xA);
  out.xB += w * (k1.xB + 2.0 * k2.xB + 2.0 * k3.xB + k4.xB);
  return out;
}

void check_step(const SystemParams& p, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("step must be positive");
  }
  const double rate = std::max({p.kappa, p.gamma, p.lambda, std::abs(p.delta)});
  // the tiny slack keeps configurations sitting exactly on the bound valid
  if (!(step * rate < 0.1 * (1.0 + 1e-9))) {
    throw std::invalid_argument("step too large for stability: step must be below 0.1/" +
                                std::to_string(rate) + " = " + std::to_string(0.1 / rate));
  }
}

}  // namespace

AugmentedState derivative(const AugmentedState& s, const SystemParams& p) {
  const cplx ik(0.0, p.kappa);
  const cplx decay(-p.lambda, p.delta);
  const double g2 = 0.5 * p.gamma * p.lambda;
  return {-ik * s.nu - s.xA, -ik * s.mu - s.xB,
          decay * s.xA + g2 * s.mu, decay * s.xB + g2 * s.nu};
}

OracleTrajectory integrate(const SystemParams& p_in, const InitialAmplitudes& init_in,
                           double t_end, double step) {
  const SystemParams p = validate_params(p_in);
  const InitialAmplitudes init = validate_init(init_in);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("t_end must be nonnegative");
  }
  check_step(p, step);

  const long n = t_end > 0.0 ? std::max(1L, std::lround(std::ceil(t_end / step - 1e-12))) : 0L;
  const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;

  OracleTrajectory traj;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  AugmentedState y{init.mu0, init.nu0, cplx(0.0, 0.0), cplx(0.0, 0.0)};
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  traj.max_norm_excess = std::norm(y.mu) + std::norm(y.nu) - 1.0;
  for (long i = 1; i <= n; ++i) {
    y = rk4_step(y, h, p);
    traj.times.push_back(h * static_cast<double>(i));
    traj.states.push_back(y);
    traj.max_norm_excess =
        std::max(traj.max_norm_excess, std::norm(y.mu) + std::norm(y.nu) - 1.0);
  }
  return traj;
}

std::vector<AmplitudePair> oracle_at(const SystemParams& p_in, const InitialAmplitudes& init_in,
                                     const std::vector<double>& times, double step) {
  const SystemParams p = validate_params(p_in);
  const InitialAmplitudes init = validate_init(init_in);
  check_step(p, step);
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw std::invalid_argument("times must be finite and nonnegative");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }

  std::vector<AmplitudePair> out;
  out.reserve(times.size());
  AugmentedState y{init.mu0, init.nu0, cplx(0.0, 0.0), cplx(0.0, 0.0)};
  double t = 0.0;
  for (double target : times) {
    const double dt = target - t;
    if (dt > 0.0) {
      const long k = std::max(1L, std::lround(std::ceil(dt / step - 1e-12)));
      const double h = dt / static_cast<double>(k);
      for (long i = 0; i < k; ++i) y = rk4_step(y, h, p);
      t = target;
    }
    out.push_back({y.mu, y.nu, target});
  }
  return out;
}

}  // namespace qbsim
