#pragma once

#include "qbsim/model.hpp"

namespace qbsim {

// Isolated battery-reservoir system (kappa -> 0 limit). xi is the complex
// rate splitting the two decay branches, xi^2 = (lambda - i delta)^2 - 2 gamma lambda.
struct SelfDischargeParams {
  double gamma = 0.0;
  double lambda = 1.0;
  double delta = 0.0;
  cplx xi{0.0, 0.0};
};

SelfDischargeParams make_self_discharge(double gamma, double lambda, double delta);

// Same, parameterized by the memory ratio gamma/lambda instead of lambda.
SelfDischargeParams self_discharge_from_ratio(double memory_ratio, double gamma,
                                              double delta);

// Battery amplitude of the initially excited battery,
//   nu_sd(t) = e^{-(lambda - i delta) t / 2} [cosh(t xi / 2)
//              + ((lambda - i delta)/xi) sinh(t xi / 2)],
// with the confluent limit e^{-(lambda - i delta) t/2} (1 + (lambda - i delta) t/2)
// as xi -> 0.
cplx amplitude_sd_complex(const SelfDischargeParams& p, double t);
double amplitude_sd(const SelfDischargeParams& p, double t);

// The delta = 0 form written in terms of the memory ratio R alone:
//   e^{-t gamma/(2R)} |cosh(x) + sinh(x)/sqrt(1-2R)|, x = t gamma sqrt(1-2R)/(2R).
double amplitude_sd_resonant(double memory_ratio, double gamma, double t);

double energy_sd(const SelfDischargeParams& p, double t, double omega0 = 1.0);
double ergotropy_sd(const SelfDischargeParams& p, double t, double omega0 = 1.0);

struct DischargeTime {
  double time = 0.0;
  bool above_at_horizon = false;  // ergotropy never fell below the threshold
};

// Last time within the horizon at which the self-discharge ergotropy is still
// at least epsilon * W_max (last, not first: non-Markovian revivals re-cross
// the threshold). Dense sampling plus bisection to 1e-6 relative precision.
// horizon <= 0 selects the default 100/gamma.
DischargeTime discharge_time(const SelfDischargeParams& p, double epsilon,
                             double horizon = 0.0);

}  // namespace qbsim
