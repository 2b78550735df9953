#include "qbsim/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbsim {

namespace {

// Roots of s^2 + b s + c. The larger-magnitude root is formed without
// cancellation (sign of the square root chosen against b), the other one
// comes from the product of roots; widely separated roots stay accurate.
std::pair<cplx, cplx> quadratic_roots(cplx b, cplx c) {
  cplx sq = std::sqrt(b * b - 4.0 * c);
  if ((std::conj(b) * sq).real() < 0.0) sq = -sq;
  const cplx q = -0.5 * (b + sq);
  if (q == cplx(0.0, 0.0)) return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
  return {q, c / q};
}

// Dense polynomials with descending coefficients.

// poly(a + x) as ascending coefficients in x, by repeated synthetic division
std::vector<cplx> taylor_at(std::vector<cplx> poly, cplx a) {
  const size_t n = poly.size();
  std::vector<cplx> c(n);
  for (size_t k = 0; k < n; ++k) {
    for (size_t j = 1; j < n - k; ++j) poly[j] += a * poly[j - 1];
    c[k] = poly[n - 1 - k];
  }
  return c;
}

// poly * (s - r)
std::vector<cplx> mul_linear(const std::vector<cplx>& poly, cplx r) {
  std::vector<cplx> res(poly.size() + 1, cplx(0.0, 0.0));
  for (size_t j = 0; j < poly.size(); ++j) {
    res[j] += poly[j];
    res[j + 1] -= r * poly[j];
  }
  return res;
}

struct PoleGroup {
  cplx pole;
  int mult = 0;
};

// Cluster nearly coincident roots. Root separations below ~1e-8 of the
// parameter scale are rounding noise (the discriminants are formed by
// subtraction), so the confluent branch is the accurate one there.
std::vector<PoleGroup> merge_poles(const std::vector<cplx>& poles, double scale) {
  std::vector<PoleGroup> groups;
  for (const cplx& p : poles) {
    bool merged = false;
    for (auto& g : groups) {
      const double tol = 1e-8 * std::max({std::abs(p), std::abs(g.pole), scale});
      if (std::abs(p - g.pole) <= tol) {
        g.pole = (g.pole * static_cast<double>(g.mult) + p) / static_cast<double>(g.mult + 1);
        g.mult += 1;
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back({p, 1});
  }
  return groups;
}

// Partial-fraction coefficients of N(s) / prod_g (s - p_g)^{m_g} for one group,
// returned as the time-domain polynomial coefficients of e^{p t} (c0 + c1 t + ...).
// With Q_j the product over the other groups, the Taylor series of N/Q_j at the
// pole gives the coefficients of 1/(s-p)^r directly; dividing by (r-1)! maps
// them onto powers of t.
std::vector<cplx> group_coefficients(const std::vector<cplx>& numerator,
                                     const std::vector<PoleGroup>& groups, size_t j) {
  const int m = groups[j].mult;
  const cplx p = groups[j].pole;

  std::vector<cplx> qj{cplx(1.0, 0.0)};
  for (size_t g = 0; g < groups.size(); ++g) {
    if (g == j) continue;
    for (int k = 0; k < groups[g].mult; ++k) qj = mul_linear(qj, groups[g].pole);
  }

  const std::vector<cplx> nt = taylor_at(numerator, p);
  const std::vector<cplx> qt = taylor_at(qj, p);

  // series division (N/Q_j)(p + x) up to order m-1
  std::vector<cplx> series(m, cplx(0.0, 0.0));
  for (int k = 0; k < m; ++k) {
    cplx acc = k < static_cast<int>(nt.size()) ? nt[k] : cplx(0.0, 0.0);
    for (int l = 1; l <= k; ++l) {
      if (l < static_cast<int>(qt.size())) acc -= qt[l] * series[k - l];
    }
    series[k] = acc / qt[0];
  }

  // a_r = series[m - r]; coefficient of t^i is a_{i+1} / i!
  std::vector<cplx> coef(m);
  double factorial = 1.0;
  for (int i = 0; i < m; ++i) {
    if (i > 0) factorial *= static_cast<double>(i);
    coef[i] = series[m - 1 - i] / factorial;
  }
  return coef;
}

}  // namespace

PoleResidueForm build_transfer(const SystemParams& p_in, const InitialAmplitudes& init_in) {
  const SystemParams p = validate_params(p_in);
  const InitialAmplitudes init = validate_init(init_in);

  const cplx i1(0.0, 1.0);
  const cplx d0(p.lambda, -p.delta);  // lambda - i delta
  const double g2 = 0.5 * p.gamma * p.lambda;
  const cplx mu0 = init.mu0;
  const cplx nu0 = init.nu0;

  std::vector<cplx> poles;
  std::vector<cplx> num_mu, num_nu;  // descending coefficients

  if (p.kappa == 0.0) {
    // the quartic is an exact square; after cancelling it the images are
    //   mu0 (s + d0) / (s^2 + d0 s + g2)        (and likewise for nu)
    auto [r1, r2] = quadratic_roots(d0, cplx(g2, 0.0));
    poles = {r1, r2};
    num_mu = {mu0, mu0 * d0};
    num_nu = {nu0, nu0 * d0};
  } else {
    // denominator (s (s+d0) + g2)^2 + kappa^2 (s+d0)^2 = Q+ Q- with
    // Q+- = s^2 + (d0 +- i kappa) s + (g2 +- i kappa d0)
    auto [a1, a2] = quadratic_roots(d0 + i1 * p.kappa, g2 + i1 * p.kappa * d0);
    auto [b1, b2] = quadratic_roots(d0 - i1 * p.kappa, g2 - i1 * p.kappa * d0);
    poles = {a1, a2, b1, b2};
    const cplx ikn = i1 * p.kappa * nu0;
    const cplx ikm = i1 * p.kappa * mu0;
    num_mu = {mu0,
              2.0 * d0 * mu0 - ikn,
              (d0 * d0 + g2) * mu0 - 2.0 * d0 * ikn,
              g2 * d0 * mu0 - d0 * d0 * ikn};
    num_nu = {nu0,
              2.0 * d0 * nu0 - ikm,
              (d0 * d0 + g2) * nu0 - 2.0 * d0 * ikm,
              g2 * d0 * nu0 - d0 * d0 * ikm};
  }

  const std::vector<PoleGroup> groups = merge_poles(poles, p.lambda);

  PoleResidueForm form;
  double max_coef = 0.0;
  for (size_t j = 0; j < groups.size(); ++j) {
    PoleTerm term;
    term.pole = groups[j].pole;
    term.multiplicity = groups[j].mult;
    term.coef_mu = group_coefficients(num_mu, groups, j);
    term.coef_nu = group_coefficients(num_nu, groups, j);
    for (const cplx& c : term.coef_mu) max_coef = std::max(max_coef, std::abs(c));
    for (const cplx& c : term.coef_nu) max_coef = std::max(max_coef, std::abs(c));
    form.terms.push_back(std::move(term));
  }

  // initial-value check: the constant coefficients must sum back to the
  // initial amplitudes; failure means the residue extraction lost accuracy
  cplx sum_mu(0.0, 0.0), sum_nu(0.0, 0.0);
  for (const auto& term : form.terms) {
    sum_mu += term.coef_mu[0];
    sum_nu += term.coef_nu[0];
  }
  const double err = std::abs(sum_mu - mu0) + std::abs(sum_nu - nu0);
  if (!(err <= 1e-9 * std::max(1.0, max_coef))) {
    throw solver_error("residue extraction ill-conditioned (initial-value mismatch " +
                       std::to_string(err) + ", max coefficient magnitude " +
                       std::to_string(max_coef) + ")");
  }
  return form;
}

AmplitudePair evaluate_amplitudes(const PoleResidueForm& f, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  cplx mu(0.0, 0.0), nu(0.0, 0.0);
  for (const auto& term : f.terms) {
    const cplx e = std::exp(term.pole * t);
    cplx pm = term.coef_mu[term.multiplicity - 1];
    cplx pn = term.coef_nu[term.multiplicity - 1];
    for (int i = term.multiplicity - 2; i >= 0; --i) {
      pm = pm * t + term.coef_mu[i];
      pn = pn * t + term.coef_nu[i];
    }
    mu += e * pm;
    nu += e * pn;
  }
  return {mu, nu, t};
}

std::vector<AmplitudePair> amplitude_trajectory(const SystemParams& p,
                                                const InitialAmplitudes& init,
                                                const std::vector<double>& grid) {
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw std::invalid_argument("grid times must be finite and nonnegative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
  const PoleResidueForm form = build_transfer(p, init);
  std::vector<AmplitudePair> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(evaluate_amplitudes(form, t));
  return out;
}

}  // namespace qbsim
