#pragma once

#include <vector>

#include "qbsim/model.hpp"

namespace qbsim {

// One pole group of the rational Laplace images. The time-domain contribution
// of a group is e^{p t} * (coef[0] + coef[1] t + ... + coef[m-1] t^{m-1}),
// separately for mu and nu (both share the pole set).
struct PoleTerm {
  cplx pole;
  int multiplicity = 1;
  std::vector<cplx> coef_mu;  // size == multiplicity
  std::vector<cplx> coef_nu;
};

struct PoleResidueForm {
  std::vector<PoleTerm> terms;
};

struct AmplitudePair {
  cplx mu;
  cplx nu;
  double time = 0.0;
};

// Builds the exact pole/residue representation of the charger and battery
// amplitudes. The common denominator factors into two quadratics
//   Q+-(s) = s (s + lambda - i delta) + gamma lambda / 2 +- i kappa (s + lambda - i delta)
// whose roots are taken in closed form; kappa = 0 collapses to a single
// quadratic (the representation then has total multiplicity 2 instead of 4).
// Nearly coincident roots are merged into higher-multiplicity groups with
// confluent coefficients.
PoleResidueForm build_transfer(const SystemParams& p, const InitialAmplitudes& init);

AmplitudePair evaluate_amplitudes(const PoleResidueForm& f, double t);

// Batch evaluation on a strictly increasing, nonnegative grid.
std::vector<AmplitudePair> amplitude_trajectory(const SystemParams& p,
                                                const InitialAmplitudes& init,
                                                const std::vector<double>& grid);

}  // namespace qbsim
