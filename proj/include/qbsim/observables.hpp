#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qbsim/laplace.hpp"
#include "qbsim/model.hpp"

namespace qbsim {

// Amplitude time series on a uniform grid, the unit the derived observables
// are computed from.
struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> mu;
  std::vector<cplx> nu;
};

struct ObservableRecord {
  double time = 0.0;
  double energy_A = 0.0;     // units of omega0 via |mu|^2
  double energy_B = 0.0;
  double ergotropy_B = 0.0;  // units of W_max = omega0
  std::optional<double> ratio;  // extractable work / transferred energy
  std::optional<double> power;  // d(ergotropy)/dt
};

// Sorted eigensystem used by the passive-state construction: Hamiltonian
// eigenvalues ascending, state eigenvalues descending.
struct SpectralDecomposition {
  Eigen::VectorXd hamiltonian_eigenvalues;
  Eigen::VectorXd state_eigenvalues;
  Eigen::MatrixXcd hamiltonian_eigenvectors;  // columns, ascending order
  Eigen::MatrixXcd state_eigenvectors;        // columns, descending order
};

double battery_energy(cplx nu, double omega0);

// Two-level ergotropy: zero up to half population, omega0 (2|nu|^2 - 1) above.
double battery_ergotropy(cplx nu, double omega0);

SpectralDecomposition spectral_decompose(const Eigen::MatrixXcd& rho,
                                         const Eigen::MatrixXcd& H);

// State with the same spectrum as rho and no unitarily extractable work:
// populations anti-ordered against the energy levels.
Eigen::MatrixXcd passive_state(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H);

// Maximum work extractable by cyclic unitaries, tr(rho H) - tr(sigma_rho H).
double general_ergotropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H);

// W / deltaE; empty when the denominator is smaller than 1e-12.
std::optional<double> work_energy_ratio(double W, double deltaE);

// d(ergotropy)/dt by second-order finite differences on the trajectory grid.
// One-sided stencils at the ends and around threshold crossings of
// |nu|^2 = 1/2, where the ergotropy has a kink.
std::vector<double> instantaneous_power(const Trajectory& traj, double omega0);

double average_power(double W_t, double W_t0, double t, double t0);

// Lossless two-qubit exchange: probability sin^2(kappa t) of finding the
// excitation on the battery.
double closed_system_probability(double kappa, double t);
double charging_time(double kappa);                   // pi / (2 kappa)
double max_average_power(double kappa, double omega0);  // 2 kappa omega0 / pi

// Full per-point observable assembly for a trajectory; the ratio baseline is
// the initial battery energy.
std::vector<ObservableRecord> trajectory_records(const Trajectory& traj, double omega0);

}  // namespace qbsim
