#pragma once

#include <complex>
#include <stdexcept>

namespace qbsim {

using cplx = std::complex<double>;

// thrown when a numerical routine fails (ill-conditioned residues etc.),
// as opposed to plain invalid input which uses std::invalid_argument
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical constants of one simulation, hbar = 1.
//   omega0  qubit transition frequency (charger and battery are identical)
//   kappa   charger-battery exchange coupling
//   gamma   effective system-bath coupling
//   lambda  Lorentzian spectral width of each bath
//   delta   detuning between omega0 and the bath center frequency
struct SystemParams {
  double omega0 = 1.0;
  double kappa = 1.0;
  double gamma = 0.0;
  double lambda = 1.0;
  double delta = 0.0;
};

// Excited-state amplitudes at t = 0 in the single-excitation sector.
struct InitialAmplitudes {
  cplx mu0{1.0, 0.0};  // charger
  cplx nu0{0.0, 0.0};  // battery
};

enum class MarkovianityLabel { markovian_like, intermediate, non_markovian_like };
enum class DampingLabel { underdamped, intermediate, overdamped, uncoupled };

struct RegimeReport {
  double memory_ratio = 0.0;   // gamma / lambda
  double damping_ratio = 0.0;  // gamma / kappa, +inf when kappa == 0
  MarkovianityLabel markovianity_label = MarkovianityLabel::intermediate;
  DampingLabel damping_label = DampingLabel::intermediate;
};

const char* to_string(MarkovianityLabel label);
const char* to_string(DampingLabel label);

// Returns p unchanged if all domain constraints hold, otherwise throws
// std::invalid_argument naming the offending field.
SystemParams validate_params(const SystemParams& p);

// Checks |mu0|^2 + |nu0|^2 == 1 to 1e-12.
InitialAmplitudes validate_init(const InitialAmplitudes& init);

double memory_ratio(const SystemParams& p);

RegimeReport classify_regime(const SystemParams& p);

// Bath correlation function k(tau) = (gamma lambda / 2) e^{(-lambda + i delta) tau}.
cplx memory_kernel(const SystemParams& p, double tau);

// Laplace image of the kernel, (gamma lambda / 2) / (s + lambda - i delta).
cplx kernel_laplace(const SystemParams& p, cplx s);

// Lorentzian spectral density centered at omega0 - delta with half width lambda.
double spectral_density(const SystemParams& p, double omega);

}  // namespace qbsim
