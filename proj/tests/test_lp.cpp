#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "vtb/lp.hpp"
#include "vtb/phase.hpp"
#include "vtb/sum_rules.hpp"

using namespace vtb;

TEST_CASE("simplex: single-variable saturating maximum") {
  // maximize K x with x/(1-0.3) <= 1 at some positive coefficient
  LinearProgramSpec spec;
  spec.num_vars = 1;
  spec.objective = {0.9};
  spec.ineq_constraints.push_back({{1.0 / 0.7}, 1.0});
  const auto sol = simplex_solve(spec, LpSense::Max);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.point[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(sol.value == doctest::Approx(0.63).epsilon(1e-12));
  CHECK(sol.active_set.size() == 1);
}

TEST_CASE("simplex: infeasible volume fraction with a single high pole") {
  // x = 0.4 and x/(1-0.8) <= 1 cannot hold together (0.4/0.2 = 2 > 1)
  LinearProgramSpec spec;
  spec.num_vars = 1;
  spec.objective = {1.0};
  spec.eq_constraints.push_back({{1.0}, 0.4});
  spec.ineq_constraints.push_back({{5.0}, 1.0});
  CHECK(simplex_solve(spec, LpSense::Min).status == LpStatus::Infeasible);
}

TEST_CASE("simplex: unbounded detection") {
  LinearProgramSpec spec;
  spec.num_vars = 2;
  spec.objective = {1.0, 1.0};
  spec.ineq_constraints.push_back({{1.0, 0.0}, 1.0});  // x0 <= 1, x1 free upward
  CHECK(simplex_solve(spec, LpSense::Max).status == LpStatus::Unbounded);
}

TEST_CASE("simplex: vf two-pole vertex matches the closed form") {
  const double f1 = 0.4;
  const std::vector<double> poles{0.2, 0.8};
  LinearProgramSpec spec;
  spec.num_vars = 2;
  spec.objective = {0.3, 1.7};  // any distinct coefficients
  spec.eq_constraints.push_back({{1.0, 1.0}, f1});
  spec.ineq_constraints.push_back({{1.0 / 0.8, 1.0 / 0.2}, 1.0});
  const auto mx = simplex_solve(spec, LpSense::Max);
  REQUIRE(mx.status == LpStatus::Optimal);
  const auto b = residues_vf_two_pole(poles[0], poles[1], f1);
  // the maximizing vertex saturates the inequality (coefficient on x1 larger)
  CHECK(mx.point[0] == doctest::Approx(b[0]).epsilon(1e-11));
  CHECK(mx.point[1] == doctest::Approx(b[1]).epsilon(1e-11));
}

TEST_CASE("closed-form residues: no-info and vf") {
  CHECK(residues_no_info(0.0) == 1.0);
  CHECK(residues_no_info(0.4) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(residues_no_info(1.0 - 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(residues_no_info(1.0), std::domain_error);

  const auto b = residues_vf_two_pole(0.2, 0.8, 0.4);
  CHECK(b[0] == doctest::Approx(0.8 * 0.2 / 0.6).epsilon(1e-13));
  CHECK(b[1] == doctest::Approx(0.2 * 0.4 / 0.6).epsilon(1e-13));
  CHECK(b[0] + b[1] == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(b[0] / 0.8 + b[1] / 0.2 == doctest::Approx(1.0).epsilon(1e-13));

  // s1 -> 1 collapses to the one-pole case B0 = f1
  const auto near = residues_vf_two_pole(0.2, 1.0 - 1e-11, 0.4);
  CHECK(near[0] == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(near[1] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(residues_vf_one_pole(0.2, 0.4) == 0.4);
  CHECK_THROWS_AS(residues_vf_one_pole(0.7, 0.4), std::domain_error);

  // s0 = f2 boundary
  const auto edge = residues_vf_two_pole(0.6, 0.9, 0.4);
  CHECK(edge[0] == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(edge[1] == doctest::Approx(0.0).epsilon(1e-13));
  CHECK_THROWS_AS(residues_vf_two_pole(0.7, 0.9, 0.4), std::domain_error);
}

TEST_CASE("closed-form residues: isotropy three-pole sum rules") {
  const double f1 = 0.4, f2 = 0.6;
  const auto b = residues_iso_three_pole(0.05, 0.45, 0.9, f1);
  REQUIRE(b.has_value());
  const double s[3] = {0.05, 0.45, 0.9};
  double sum = 0, first = 0, last = 0;
  for (int i = 0; i < 3; ++i) {
    CHECK((*b)[i] >= 0.0);
    sum += (*b)[i];
    first += (*b)[i] * s[i];
    last += (*b)[i] / (1.0 - s[i]);
  }
  CHECK(sum == doctest::Approx(f1).epsilon(1e-12));
  CHECK(first == doctest::Approx(f1 * f2 / 2.0).epsilon(1e-12));
  CHECK(last == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form residues: degenerate triple matches the two-pole form") {
  const double f1 = 0.4;
  const auto collapsed = residues_iso_three_pole(0.1, 0.7, 0.7 + 1e-14, f1);
  const auto two = residues_iso_two_pole(0.1, 0.7, f1);
  REQUIRE(collapsed.has_value());
  REQUIRE(two.has_value());
  CHECK((*collapsed)[0] == doctest::Approx((*two)[0]).epsilon(1e-12));
  CHECK((*collapsed)[1] == doctest::Approx((*two)[1]).epsilon(1e-12));
  CHECK((*collapsed)[2] == 0.0);
  // infeasible triples are signals, not exceptions
  CHECK_FALSE(residues_iso_three_pole(0.5, 0.7, 0.9, 0.4).has_value());
}

TEST_CASE("simplex agrees with exhaustive vertex enumeration on random instances") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto pair = default_stress_pair();
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + static_cast<int>(unif(rng) * 9);
    std::vector<double> poles(m);
    for (auto& s : poles) s = 0.97 * unif(rng);
    std::sort(poles.begin(), poles.end());

    InfoSet info;
    const int kind = trial % 3;
    if (kind >= 1) info.volume_fraction = 0.2 + 0.6 * unif(rng);
    if (kind == 2) info.transverse_isotropy = true;
    auto spec = build_scalar_constraints(info, poles, pair);
    for (auto& c : spec.objective) c = 2.0 * unif(rng) - 1.0;

    const auto brute = oracles::enumerate_vertices(spec);
    const auto mn = simplex_solve(spec, LpSense::Min);
    const auto mx = simplex_solve(spec, LpSense::Max);
    if (!brute.feasible) {
      CHECK(mn.status == LpStatus::Infeasible);
      continue;
    }
    REQUIRE(mn.status == LpStatus::Optimal);
    REQUIRE(mx.status == LpStatus::Optimal);
    CHECK(mn.value == doctest::Approx(brute.min_value).epsilon(1e-9));
    CHECK(mx.value == doctest::Approx(brute.max_value).epsilon(1e-9));
    // basic solutions have few nonzero residues
    int nnz = 0;
    for (double x : mn.point)
      if (x > 1e-9) ++nnz;
    CHECK(nnz <= static_cast<int>(spec.eq_constraints.size()) + 1);
  }
}
