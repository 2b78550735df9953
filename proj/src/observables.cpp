#include "qbsim/observables.hpp"

#include <algorithm>
#include <cmath>

namespace qbsim {

namespace {

void check_modulus(cplx nu) {
  if (!(std::abs(nu) <= 1.0 + 1e-9)) {
    throw std::invalid_argument("nu modulus exceeds 1");
  }
}

void check_density_inputs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H) {
  if (rho.rows() != rho.cols() || H.rows() != H.cols()) {
    throw std::invalid_argument("rho and H must be square");
  }
  if (rho.rows() != H.rows() || rho.rows() < 1) {
    throw std::invalid_argument("rho and H dimensions must match");
  }
  const double scale_rho = std::max(1.0, rho.cwiseAbs().maxCoeff());
  const double scale_h = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale_rho) {
    throw std::invalid_argument("rho must be Hermitian");
  }
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale_h) {
    throw std::invalid_argument("H must be Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
    throw std::invalid_argument("rho must have unit trace");
  }
}

}  // namespace

double battery_energy(cplx nu, double omega0) {
  check_modulus(nu);
  return omega0 * std::norm(nu);
}

double battery_ergotropy(cplx nu, double omega0) {
  check_modulus(nu);
  const double pop = std::norm(nu);
  // Heaviside step with theta(0) = 1/2; the prefactor vanishes at the
  // threshold so the value is continuous there either way
  if (pop <= 0.5) return 0.0;
  return omega0 * (2.0 * pop - 1.0);
}

SpectralDecomposition spectral_decompose(const Eigen::MatrixXcd& rho,
                                         const Eigen::MatrixXcd& H) {
  check_density_inputs(rho, H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_h(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_rho(rho);
  if (es_h.info() != Eigen::Success || es_rho.info() != Eigen::Success) {
    throw solver_error("eigendecomposition failed");
  }
  if (es_rho.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("rho must be positive semidefinite");
  }

  SpectralDecomposition out;
  out.hamiltonian_eigenvalues = es_h.eigenvalues();  // ascending
  out.hamiltonian_eigenvectors = es_h.eigenvectors();
  const Eigen::Index d = rho.rows();
  out.state_eigenvalues.resize(d);
  out.state_eigenvectors.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {  // flip to descending
    out.state_eigenvalues(j) = es_rho.eigenvalues()(d - 1 - j);
    out.state_eigenvectors.col(j) = es_rho.eigenvectors().col(d - 1 - j);
  }
  return out;
}

Eigen::MatrixXcd passive_state(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H) {
  const SpectralDecomposition sd = spectral_decompose(rho, H);
  const Eigen::Index d = rho.rows();
  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto v = sd.hamiltonian_eigenvectors.col(j);
    sigma += sd.state_eigenvalues(j) * (v * v.adjoint());
  }
  return sigma;
}

double general_ergotropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H) {
  const SpectralDecomposition sd = spectral_decompose(rho, H);
  double passive_energy = 0.0;
  for (Eigen::Index j = 0; j < rho.rows(); ++j) {
    passive_energy += sd.state_eigenvalues(j) * sd.hamiltonian_eigenvalues(j);
  }
  const double W = (rho * H).trace().real() - passive_energy;
  return std::max(0.0, W);  // clip eigensolver rounding residue
}

std::optional<double> work_energy_ratio(double W, double deltaE) {
  if (std::abs(deltaE) <= 1e-12) return std::nullopt;
  return W / deltaE;
}

std::vector<double> instantaneous_power(const Trajectory& traj, double omega0) {
  const size_t n = traj.times.size();
  if (n < 3) throw std::invalid_argument("power needs at least 3 grid points");
  if (traj.mu.size() != n || traj.nu.size() != n) {
    throw std::invalid_argument("trajectory arrays must have equal length");
  }
  const double h = traj.times[1] - traj.times[0];
  if (!(h > 0.0)) throw std::invalid_argument("grid must be increasing");
  for (size_t i = 1; i + 1 < n; ++i) {
    if (std::abs(traj.times[i + 1] - traj.times[i] - h) > 1e-9 * h) {
      throw std::invalid_argument("power needs a uniform time grid");
    }
  }

  std::vector<double> W(n), sgn(n);
  for (size_t i = 0; i < n; ++i) {
    W[i] = battery_ergotropy(traj.nu[i], omega0);
    sgn[i] = std::norm(traj.nu[i]) - 0.5;
  }
  // the ergotropy is non-differentiable where |nu|^2 crosses 1/2; intervals
  // containing a crossing must not appear inside a stencil
  auto cross = [&](size_t i) { return sgn[i] * sgn[i + 1] < 0.0; };
  auto forward = [&](size_t i) {
    if (i + 2 < n && !cross(i) && !cross(i + 1)) {
      return (-3.0 * W[i] + 4.0 * W[i + 1] - W[i + 2]) / (2.0 * h);
    }
    return (W[i + 1] - W[i]) / h;
  };
  auto backward = [&](size_t i) {
    if (i >= 2 && !cross(i - 1) && !cross(i - 2)) {
      return (3.0 * W[i] - 4.0 * W[i - 1] + W[i - 2]) / (2.0 * h);
    }
    return (W[i] - W[i - 1]) / h;
  };

  std::vector<double> P(n);
  for (size_t i = 0; i < n; ++i) {
    if (i == 0) {
      P[i] = forward(i);
    } else if (i == n - 1) {
      P[i] = backward(i);
    } else {
      const bool crossL = cross(i - 1);
      const bool crossR = cross(i);
      if (crossR && !crossL) {
        P[i] = backward(i);
      } else if (crossL && !crossR) {
        P[i] = forward(i);
      } else {
        P[i] = (W[i + 1] - W[i - 1]) / (2.0 * h);
      }
    }
  }
  return P;
}

double average_power(double W_t, double W_t0, double t, double t0) {
  if (!(t > t0)) throw std::invalid_argument("t must exceed t0");
  return (W_t - W_t0) / (t - t0);
}

double closed_system_probability(double kappa, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const double s = std::sin(kappa * t);
  return s * s;
}

double charging_time(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return M_PI / (2.0 * kappa);
}

double max_average_power(double kappa, double omega0) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return 2.0 * kappa * omega0 / M_PI;
}

std::vector<ObservableRecord> trajectory_records(const Trajectory& traj, double omega0) {
  const size_t n = traj.times.size();
  if (traj.mu.size() != n || traj.nu.size() != n) {
    throw std::invalid_argument("trajectory arrays must have equal length");
  }
  std::vector<double> P;
  if (n >= 3) P = instantaneous_power(traj, omega0);

  std::vector<ObservableRecord> out;
  out.reserve(n);
  const double e0 = n > 0 ? battery_energy(traj.nu[0], omega0) : 0.0;
  for (size_t i = 0; i < n; ++i) {
    ObservableRecord rec;
    rec.time = traj.times[i];
    rec.energy_A = battery_energy(traj.mu[i], omega0);
    rec.energy_B = battery_energy(traj.nu[i], omega0);
    rec.ergotropy_B = battery_ergotropy(traj.nu[i], omega0);
    rec.ratio = work_energy_ratio(rec.ergotropy_B, rec.energy_B - e0);
    if (!P.empty()) rec.power = P[i];
    out.push_back(rec);
  }
  return out;
}

}  // namespace qbsim
