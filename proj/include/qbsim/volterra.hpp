#pragma once

#include <vector>

#include "qbsim/laplace.hpp"
#include "qbsim/model.hpp"

namespace qbsim {

// State of the memory integro-differential equations with the convolution
// integrals carried as auxiliary variables (exact for the exponential kernel):
//   mu' = -i kappa nu - xA          xA' = (-lambda + i delta) xA + (gamma lambda / 2) mu
//   nu' = -i kappa mu - xB          xB' = (-lambda + i delta) xB + (gamma lambda / 2) nu
struct AugmentedState {
  cplx mu{0.0, 0.0};
  cplx nu{0.0, 0.0};
  cplx xA{0.0, 0.0};
  cplx xB{0.0, 0.0};
};

AugmentedState derivative(const AugmentedState& s, const SystemParams& p);

struct OracleTrajectory {
  std::vector<double> times;
  std::vector<AugmentedState> states;
  double max_norm_excess = 0.0;  // max over the grid of |mu|^2 + |nu|^2 - 1
};

// Fixed-step classical fourth-order integration on a uniform grid covering
// [0, t_end]. The step is shrunk slightly if needed so the grid lands exactly
// on t_end. Requires step * max(kappa, gamma, lambda, |delta|) < 0.1.
OracleTrajectory integrate(const SystemParams& p, const InitialAmplitudes& init,
                           double t_end, double step);

// Amplitudes at the requested times, integrating through each interval with
// substeps no larger than the given step. Used for grid-aligned comparisons
// against the analytic solver.
std::vector<AmplitudePair> oracle_at(const SystemParams& p, const InitialAmplitudes& init,
                                     const std::vector<double>& times, double step);

}  // namespace qbsim
