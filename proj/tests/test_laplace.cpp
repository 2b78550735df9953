#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qbsim/laplace.hpp"
#include "test_util.hpp"

using namespace qbsim;

namespace {

int total_multiplicity(const PoleResidueForm& f) {
  int sum = 0;
  for (const auto& term : f.terms) sum += term.multiplicity;
  return sum;
}

// Laplace image of the pole/residue representation at s, for cross-checking
// against the rational function it was built from.
cplx image_mu(const PoleResidueForm& f, cplx s) {
  cplx acc = 0.0;
  for (const auto& term : f.terms) {
    double factorial = 1.0;
    cplx denom = s - term.pole;
    for (int k = 0; k < term.multiplicity; ++k) {
      if (k > 0) factorial *= k;
      acc += term.coef_mu[k] * factorial / denom;
      denom *= s - term.pole;
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("evaluate_amplitudes reproduces the initial condition at t = 0") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> value(0.01, 5.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int i = 0; i < 40; ++i) {
    const SystemParams p{1.0, value(rng), value(rng), value(rng), value(rng) - 2.5};
    const double a = angle(rng), b = angle(rng);
    const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const InitialAmplitudes init{std::sqrt(w) * cplx(std::cos(a), std::sin(a)),
                                 std::sqrt(1.0 - w) * cplx(std::cos(b), std::sin(b))};
    const AmplitudePair at0 = evaluate_amplitudes(build_transfer(p, init), 0.0);
    CHECK(std::abs(at0.mu - init.mu0) < 1e-9);
    CHECK(std::abs(at0.nu - init.nu0) < 1e-9);
  }
}

TEST_CASE("closed system reduces to Rabi exchange") {
  const SystemParams p{1.0, 1.3, 0.0, 1.0, 0.0};
  const PoleResidueForm f = build_transfer(p, {});
  // poles +-i kappa present
  auto has_pole = [&](cplx target) {
    return std::any_of(f.terms.begin(), f.terms.end(), [&](const PoleTerm& t) {
      return std::abs(t.pole - target) < 1e-9;
    });
  };
  CHECK(has_pole(cplx(0.0, p.kappa)));
  CHECK(has_pole(cplx(0.0, -p.kappa)));
  for (double t : {0.0, 0.17, 0.5, 1.0, 2.9, 4.4}) {
    const AmplitudePair amp = evaluate_amplitudes(f, t);
    const cplx expected_nu = cplx(0.0, -1.0) * std::sin(p.kappa * t);
    CHECK(std::abs(amp.nu - expected_nu) < 1e-12);
    CHECK(std::abs(amp.mu - std::cos(p.kappa * t)) < 1e-12);
  }
  const AmplitudePair at_tau = evaluate_amplitudes(f, M_PI / (2.0 * p.kappa));
  CHECK(std::norm(at_tau.nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kappa = 0 keeps the excitation on the initialized qubit") {
  const double gamma = 1.0;
  const double lambda = 5.0;
  const SystemParams p{1.0, 0.0, gamma, lambda, 0.0};
  const PoleResidueForm f = build_transfer(p, {});
  CHECK(total_multiplicity(f) == 2);
  const double disc = std::sqrt(lambda * lambda - 2.0 * gamma * lambda);
  auto has_pole = [&](cplx target) {
    return std::any_of(f.terms.begin(), f.terms.end(), [&](const PoleTerm& t) {
      return std::abs(t.pole - target) < 1e-9;
    });
  };
  CHECK(has_pole(cplx(0.5 * (-lambda + disc), 0.0)));
  CHECK(has_pole(cplx(0.5 * (-lambda - disc), 0.0)));
  for (double t : {0.3, 1.0, 7.0}) {
    CHECK(std::abs(evaluate_amplitudes(f, t).nu) < 1e-14);
  }
}

TEST_CASE("kappa = 0 critical ratio produces a double pole") {
  const double gamma = 1.0;
  const SystemParams p{1.0, 0.0, gamma, 2.0 * gamma, 0.0};  // R = 1/2
  const PoleResidueForm f = build_transfer(p, {});
  REQUIRE(f.terms.size() == 1);
  CHECK(f.terms[0].multiplicity == 2);
  CHECK(std::abs(f.terms[0].pole - cplx(-gamma, 0.0)) < 1e-9);
  // confluent decay e^{-gamma t} (1 + gamma t)
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    const double expected = std::exp(-gamma * t) * (1.0 + gamma * t);
    CHECK(std::abs(evaluate_amplitudes(f, t).mu) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(std::abs(evaluate_amplitudes(f, 1.0).mu) ==
        doctest::Approx(2.0 / M_E).epsilon(1e-12));
}

TEST_CASE("amplitude continuity across the critical ratio") {
  const double gamma = 1.0;
  auto value_at = [&](double ratio, double t) {
    const SystemParams p{1.0, 0.0, gamma, gamma / ratio, 0.0};
    return std::abs(evaluate_amplitudes(build_transfer(p, {}), t).mu);
  };
  for (double t : {0.4, 1.0, 2.7, 9.0}) {
    const double mid = value_at(0.5, t);
    CHECK(std::abs(value_at(0.5 + 1e-9, t) - mid) < 1e-6);
    CHECK(std::abs(value_at(0.5 - 1e-9, t) - mid) < 1e-6);
  }
}

TEST_CASE("battery population at the ideal charging time, weak damping") {
  // kappa = 1, gamma = 0.05, delta = 0, across memory ratios
  const double expected[] = {0.935286722698, 0.979737523946, 0.999750557271,
                             0.999975005581};
  const double ratios[] = {0.01, 0.1, 10.0, 100.0};
  for (int i = 0; i < 4; ++i) {
    const SystemParams p{1.0, 1.0, 0.05, 0.05 / ratios[i], 0.0};
    const AmplitudePair amp = evaluate_amplitudes(build_transfer(p, {}), M_PI / 2.0);
    CHECK(std::norm(amp.nu) == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("swapping the initial amplitudes swaps the two trajectories") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> value(0.05, 4.0);
  for (int i = 0; i < 25; ++i) {
    const SystemParams p{1.0, value(rng), value(rng), value(rng), value(rng) - 2.0};
    const cplx a = std::sqrt(0.3) * testutil::random_unit_phase(rng);
    const cplx b = std::sqrt(0.7) * testutil::random_unit_phase(rng);
    const PoleResidueForm fwd = build_transfer(p, {a, b});
    const PoleResidueForm swp = build_transfer(p, {b, a});
    for (double t : {0.0, 0.6, 2.1, 5.5}) {
      const AmplitudePair x = evaluate_amplitudes(fwd, t);
      const AmplitudePair y = evaluate_amplitudes(swp, t);
      CHECK(x.mu == y.nu);
      CHECK(x.nu == y.mu);
    }
  }
}

TEST_CASE("norm bound and dissipative poles on random parameters") {
  std::mt19937_64 rng(222);
  std::uniform_real_distribution<double> value(0.01, 8.0);
  for (int i = 0; i < 60; ++i) {
    const SystemParams p{1.0, value(rng), value(rng), value(rng), value(rng) - 4.0};
    const PoleResidueForm f = build_transfer(p, {});
    CHECK(total_multiplicity(f) == 4);
    for (const auto& term : f.terms) CHECK(term.pole.real() <= 1e-9);
    for (double t : {0.0, 0.3, 1.7, 6.0, 20.0}) {
      const AmplitudePair amp = evaluate_amplitudes(f, t);
      CHECK(std::norm(amp.mu) + std::norm(amp.nu) <= 1.0 + 1e-9);
    }
    // long-horizon boundedness
    if (p.gamma > 0.0) {
      const AmplitudePair far = evaluate_amplitudes(f, 1000.0 / p.gamma);
      CHECK(std::norm(far.mu) + std::norm(far.nu) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("pole/residue image matches the rational function it came from") {
  std::mt19937_64 rng(333);
  std::uniform_real_distribution<double> value(0.05, 5.0);
  std::uniform_real_distribution<double> splane(-0.5, 3.0);
  for (int i = 0; i < 20; ++i) {
    const SystemParams p{1.0, value(rng), value(rng), value(rng), value(rng) - 2.5};
    const InitialAmplitudes init{std::sqrt(0.4), cplx(0.0, -std::sqrt(0.6))};
    const PoleResidueForm f = build_transfer(p, init);
    const cplx d0(p.lambda, -p.delta);
    const double g2 = 0.5 * p.gamma * p.lambda;
    for (int j = 0; j < 20; ++j) {
      const cplx s(splane(rng) + 0.5, splane(rng));  // right half plane, off the poles
      const cplx sd = s + d0;
      const cplx qp = s * sd + g2 + cplx(0.0, p.kappa) * sd;
      const cplx qm = s * sd + g2 - cplx(0.0, p.kappa) * sd;
      const cplx num_mu =
          (s * sd + g2) * sd * init.mu0 - cplx(0.0, p.kappa) * sd * sd * init.nu0;
      CHECK(std::abs(image_mu(f, s) - num_mu / (qp * qm)) < 1e-9);
    }
  }
}

TEST_CASE("amplitude_trajectory validates its grid") {
  const SystemParams p{1.0, 1.0, 0.5, 1.0, 0.0};
  CHECK_THROWS_AS(amplitude_trajectory(p, {}, {0.0, 2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(amplitude_trajectory(p, {}, {-1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(amplitude_trajectory(p, {}, {0.0, 0.0}), std::invalid_argument);
  const auto single = amplitude_trajectory(p, {}, {0.0});
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single[0].mu - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(single[0].nu) < 1e-12);
  CHECK(single[0].time == 0.0);
}

TEST_CASE("trajectory points agree with scalar evaluation") {
  const SystemParams p{1.0, 1.0, 1.0, 0.01, 0.5};  // R = 100, detuned
  const PoleResidueForm f = build_transfer(p, {});
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.25 * i);
  const auto traj = amplitude_trajectory(p, {}, grid);
  REQUIRE(traj.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const AmplitudePair amp = evaluate_amplitudes(f, grid[i]);
    CHECK(traj[i].mu == amp.mu);
    CHECK(traj[i].nu == amp.nu);
    CHECK(traj[i].time == grid[i]);
  }
}
