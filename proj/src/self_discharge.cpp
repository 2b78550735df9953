#include "qbsim/self_discharge.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qbsim {

namespace {

// cosh(z) + c * t/2 * sinh(z)/z, stable for small z; used with z = t xi / 2
// where the closed form reads cosh(z) + (c/xi) sinh(z)
cplx cosh_plus_scaled_sinh(cplx z, cplx c, double t) {
  if (std::abs(z) < 1e-8) {
    // sinh(z)/z = 1 + z^2/6 + O(z^4); the z^4 terms are below 1e-32 here
    const cplx z2 = z * z;
    return 1.0 + 0.5 * z2 + 0.5 * c * t * (1.0 + z2 / 6.0);
  }
  return std::cosh(z) + 0.5 * c * t * (std::sinh(z) / z);
}

}  // namespace

SelfDischargeParams make_self_discharge(double gamma, double lambda, double delta) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument("gamma must be nonnegative");
  }
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("lambda must be positive");
  }
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
  SelfDischargeParams p;
  p.gamma = gamma;
  p.lambda = lambda;
  p.delta = delta;
  const cplx d0(lambda, -delta);
  p.xi = std::sqrt(d0 * d0 - 2.0 * gamma * lambda);  // principal branch
  return p;
}

SelfDischargeParams self_discharge_from_ratio(double memory_ratio, double gamma,
                                              double delta) {
  if (!std::isfinite(memory_ratio) || memory_ratio <= 0.0) {
    throw std::invalid_argument("memory ratio must be positive");
  }
  return make_self_discharge(gamma, gamma / memory_ratio, delta);
}

cplx amplitude_sd_complex(const SelfDischargeParams& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const cplx d0(p.lambda, -p.delta);
  const cplx z = 0.5 * t * p.xi;
  if (std::abs(z.real()) > 30.0) {
    // cosh/sinh would overflow before the decaying prefactor could tame them;
    // split into the two pole exponentials, whose exponents t*(-d0 +- xi)/2
    // have nonpositive real parts for any dissipative parameter set
    const cplx c = d0 / p.xi;
    return 0.5 * (1.0 + c) * std::exp(z - 0.5 * t * d0) +
           0.5 * (1.0 - c) * std::exp(-z - 0.5 * t * d0);
  }
  return std::exp(-0.5 * t * d0) * cosh_plus_scaled_sinh(z, d0, t);
}

double amplitude_sd(const SelfDischargeParams& p, double t) {
  const double a = std::abs(amplitude_sd_complex(p, t));
  return a > 1.0 ? 1.0 : a;  // shave roundoff excess; lets a non-finite value through
}

double amplitude_sd_resonant(double memory_ratio, double gamma, double t) {
  if (!std::isfinite(memory_ratio) || memory_ratio <= 0.0) {
    throw std::invalid_argument("memory ratio must be positive");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const double R = memory_ratio;
  const cplx w = std::sqrt(cplx(1.0 - 2.0 * R, 0.0));  // imaginary beyond R = 1/2
  const double a = t * gamma / (2.0 * R);
  const cplx z = a * w;
  cplx value;
  if (std::abs(1.0 - 2.0 * R) < 1e-10) {
    value = std::exp(-a) * ((1.0 + a) + z * z * (0.5 + a / 6.0));  // confluent branch
  } else if (std::abs(z.real()) > 30.0) {
    // same overflow-safe split as the general form
    value = 0.5 * (1.0 + 1.0 / w) * std::exp(z - a) +
            0.5 * (1.0 - 1.0 / w) * std::exp(-z - a);
  } else {
    value = std::exp(-a) * (std::cosh(z) + std::sinh(z) / w);
  }
  const double abs_value = std::abs(value);
  return abs_value > 1.0 ? 1.0 : abs_value;
}

double energy_sd(const SelfDischargeParams& p, double t, double omega0) {
  const double a = amplitude_sd(p, t);
  return omega0 * a * a;
}

double ergotropy_sd(const SelfDischargeParams& p, double t, double omega0) {
  const double pop = energy_sd(p, t, 1.0);
  if (pop <= 0.5) return 0.0;
  return omega0 * (2.0 * pop - 1.0);
}

DischargeTime discharge_time(const SelfDischargeParams& p, double epsilon, double horizon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1)");
  }
  if (horizon <= 0.0) {
    if (p.gamma == 0.0) {
      throw std::invalid_argument("horizon required when gamma is zero");
    }
    horizon = 100.0 / p.gamma;
  }

  // W_max = ergotropy at t = 0 (fully charged battery); work in these units
  auto above = [&](double t) { return ergotropy_sd(p, t, 1.0) >= epsilon; };

  const int n = 20000;
  const double dt = horizon / n;
  int last = 0;
  for (int i = 0; i <= n; ++i) {
    if (above(dt * i)) last = i;
  }
  if (last == n) return {horizon, true};

  // refine the crossing inside (t_last, t_last + dt)
  double lo = dt * last;        // still above
  double hi = dt * (last + 1);  // below
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (above(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace qbsim
