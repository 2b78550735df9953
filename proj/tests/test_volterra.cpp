#include <doctest.h>

#include <cmath>

#include "qbsim/volterra.hpp"

using namespace qbsim;

TEST_CASE("derivative of the augmented system") {
  {
    const SystemParams p{1.0, 2.0, 0.0, 1.0, 0.0};
    const AugmentedState d = derivative({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, p);
    CHECK(std::abs(d.mu) < 1e-15);
    CHECK(std::abs(d.nu - cplx(0.0, -p.kappa)) < 1e-15);
    CHECK(std::abs(d.xA) < 1e-15);
    CHECK(std::abs(d.xB) < 1e-15);
  }
  {
    const SystemParams p{1.0, 0.0, 3.0, 2.0, 0.0};
    const AugmentedState d = derivative({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, p);
    CHECK(std::abs(d.mu) < 1e-15);
    CHECK(std::abs(d.nu) < 1e-15);
    CHECK(std::abs(d.xA - cplx(0.5 * p.gamma * p.lambda, 0.0)) < 1e-15);
    CHECK(std::abs(d.xB) < 1e-15);
  }
  {
    const SystemParams p{1.0, 1.0, 1.0, 1.5, 0.7};
    const AugmentedState d = derivative({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}, p);
    CHECK(std::abs(d.mu - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(d.xA - cplx(-p.lambda, p.delta)) < 1e-15);
  }
}

TEST_CASE("closed-system Rabi half period") {
  const SystemParams p{1.0, 1.0, 0.0, 1.0, 0.0};
  const OracleTrajectory traj = integrate(p, {}, M_PI / 2.0, 1e-4);
  const AugmentedState& last = traj.states.back();
  CHECK(std::norm(last.nu) == doctest::Approx(1.0).epsilon(1e-10));
  // memory variables never activate without coupling to the baths
  CHECK(std::abs(last.xA) == 0.0);
  CHECK(std::abs(last.xB) == 0.0);
}

TEST_CASE("decoupled qubit reproduces the critically damped closed form") {
  const SystemParams p{1.0, 0.0, 1.0, 2.0, 0.0};  // R = 1/2
  const OracleTrajectory traj = integrate(p, {}, 1.0, 1e-4);
  CHECK(std::abs(traj.states.back().mu) == doctest::Approx(2.0 / M_E).epsilon(1e-9));
}

TEST_CASE("weak-damping battery population at the ideal charging time") {
  const SystemParams p{1.0, 1.0, 0.05, 0.005, 0.0};  // memory ratio 10
  const OracleTrajectory traj = integrate(p, {}, M_PI / 2.0, 1e-4);
  CHECK(std::norm(traj.states.back().nu) ==
        doctest::Approx(0.999750557271).epsilon(1e-9));
}

TEST_CASE("fourth-order step-halving convergence") {
  // end-point error against the closed forms shrinks by >= 12 when halving
  struct Probe {
    SystemParams p;
    double t_end;
    cplx exact_nu;
  };
  const double t1 = 1.3;
  const Probe probes[] = {
      {{1.0, 1.0, 0.0, 1.0, 0.0}, t1, cplx(0.0, -std::sin(t1))},
  };
  for (const Probe& probe : probes) {
    const double h = 1e-2;
    const cplx coarse = integrate(probe.p, {}, probe.t_end, h).states.back().nu;
    const cplx fine = integrate(probe.p, {}, probe.t_end, 0.5 * h).states.back().nu;
    const double err_coarse = std::abs(coarse - probe.exact_nu);
    const double err_fine = std::abs(fine - probe.exact_nu);
    REQUIRE(err_fine > 0.0);
    CHECK(err_coarse / err_fine >= 12.0);
  }
  // same check against the confluent decoupled closed form
  const SystemParams sd{1.0, 0.0, 1.0, 2.0, 0.0};
  const double exact = 2.0 / M_E;
  const double e1 = std::abs(std::abs(integrate(sd, {}, 1.0, 2e-2).states.back().mu) - exact);
  const double e2 = std::abs(std::abs(integrate(sd, {}, 1.0, 1e-2).states.back().mu) - exact);
  REQUIRE(e2 > 0.0);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("stability guard") {
  const SystemParams fast{1.0, 1.0, 1.0, 1000.0, 0.0};
  CHECK_THROWS_WITH_AS(integrate(fast, {}, 1.0, 1e-3),
                       doctest::Contains("step must be below"), std::invalid_argument);
  // the documented comparison step at the stiffest acceptance point is allowed
  CHECK_NOTHROW(integrate(fast, {}, 0.01, 1e-4));
  CHECK_THROWS_AS(integrate(fast, {}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate(fast, {}, 1.0, -1e-4), std::invalid_argument);
}

TEST_CASE("norm never exceeds one beyond roundoff") {
  for (const SystemParams& p :
       {SystemParams{1.0, 1.0, 1.0, 1.0, 0.0}, SystemParams{1.0, 1.0, 10.0, 100.0, 5.0},
        SystemParams{1.0, 1.0, 0.05, 5.0, 0.0}}) {
    const OracleTrajectory traj = integrate(p, {}, 6.0, 5e-4);
    CHECK(traj.max_norm_excess <= 1e-8);
    for (const AugmentedState& s : traj.states) {
      CHECK(std::norm(s.mu) + std::norm(s.nu) <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("oracle_at lands exactly on the requested times") {
  const SystemParams p{1.0, 1.0, 0.5, 2.0, 0.3};
  const std::vector<double> times{0.0, 0.37, 1.0, 2.5, 2.51, 6.0};
  const auto amps = oracle_at(p, {}, times, 1e-3);
  REQUIRE(amps.size() == times.size());
  for (size_t i = 0; i < times.size(); ++i) CHECK(amps[i].time == times[i]);
  CHECK(std::abs(amps[0].mu - cplx(1.0, 0.0)) < 1e-15);
  // against a plain full integration to the final time
  const OracleTrajectory direct = integrate(p, {}, 6.0, 1e-3);
  CHECK(std::abs(amps.back().nu - direct.states.back().nu) < 1e-9);
  CHECK_THROWS_AS(oracle_at(p, {}, {0.5, 0.2}, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(oracle_at(p, {}, {-0.5, 0.2}, 1e-3), std::invalid_argument);
}

TEST_CASE("oracle matches the analytic solver on a mixed-regime case") {
  const SystemParams p{1.0, 1.0, 1.0, 0.01, 0.5};  // strongly non-Markovian, detuned
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(4.0 * M_PI * i / 100.0);
  const auto numeric = oracle_at(p, {}, times, 1e-4);
  const auto analytic = amplitude_trajectory(p, {}, times);
  double worst = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, std::abs(numeric[i].nu - analytic[i].nu));
    worst = std::max(worst, std::abs(numeric[i].mu - analytic[i].mu));
  }
  CHECK(worst < 1e-6);
}
