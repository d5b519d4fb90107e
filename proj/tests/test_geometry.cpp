#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "vtb/geometry.hpp"

using namespace vtb;

namespace {

constexpr double kPi = std::numbers::pi;

bool hull_contains(const Polygon& p, Point2 q, double eps = 1e-9) {
  const auto& v = p.vertices;
  if (v.size() < 3) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto a = v[i], b = v[(i + 1) % v.size()];
    const double cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
    if (cross < -eps) return false;
  }
  return true;
}

double support(const Polygon& p, double ax, double ay) {
  double best = -1e300;
  for (const auto& v : p.vertices) best = std::max(best, ax * v[0] + ay * v[1]);
  return best;
}

}  // namespace

TEST_CASE("convex hull: basics") {
  // square with interior and duplicate points
  Polygon h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0, 0}, {0.5, 0.0}});
  REQUIRE(h.vertices.size() == 4);
  CHECK(hull_contains(h, {0.5, 0.5}));
  CHECK(hull_contains(h, {1.0, 1.0}));
  CHECK_FALSE(hull_contains(h, {1.2, 0.5}));
  // counterclockwise orientation: positive signed area
  double area = 0.0;
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    const auto a = h.vertices[i], b = h.vertices[(i + 1) % h.vertices.size()];
    area += a[0] * b[1] - b[0] * a[1];
  }
  CHECK(area == doctest::Approx(2.0).epsilon(1e-12));
  // degenerate input collapses gracefully
  CHECK(convex_hull({{0, 0}, {1, 1}}).vertices.size() <= 2);
}

TEST_CASE("instantaneous no-information stress domain spans the pure-phase points") {
  const auto pair = default_stress_pair();
  InfoSet none;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  GeometrySettings gs;
  gs.alpha_count = 128;
  const auto h = domain_fixed_orientation(0.0, kPi / 4.0, pair, none, load, gs);
  // normalized responses of pure phase 2 (0,1) and pure phase 1 (0,2)
  CHECK(hull_contains(h, {0.0, 1.0}, 1e-6));
  CHECK(hull_contains(h, {0.0, 2.0}, 1e-6));
  CHECK(support(h, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(support(h, 0.0, -1.0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(support(h, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("aligned residues keep the late-time domain on the axis") {
  const auto pair = default_stress_pair();
  InfoSet none;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  GeometrySettings gs;
  gs.alpha_count = 128;
  // theta = 0 makes every residue diagonal, so the 13-component vanishes
  const auto h = domain_fixed_orientation(50.0, 0.0, pair, none, load, gs);
  CHECK(std::abs(support(h, 1.0, 0.0)) < 1e-9);
  CHECK(std::abs(support(h, -1.0, 0.0)) < 1e-9);
  CHECK(support(h, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(support(h, 0.0, -1.0) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("domain is mirror symmetric under theta -> pi - theta") {
  const auto pair = default_stress_pair();
  InfoSet vf;
  vf.volume_fraction = 0.4;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  GeometrySettings gs;
  gs.alpha_count = 96;
  gs.pole_grid = 48;
  const double theta = 0.6;
  const auto a = domain_fixed_orientation(0.8, theta, pair, vf, load, gs);
  const auto b = domain_fixed_orientation(0.8, kPi - theta, pair, vf, load, gs);
  // mirroring x -> -x maps one hull onto the other; compare support functions
  for (int i = 0; i < 16; ++i) {
    const double phi = 2.0 * kPi * i / 16.0;
    CHECK(support(a, std::cos(phi), std::sin(phi)) ==
          doctest::Approx(support(b, -std::cos(phi), std::sin(phi))).epsilon(1e-6));
  }
}

TEST_CASE("union over orientations and rasterization") {
  const auto pair = default_stress_pair();
  InfoSet none;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  GeometrySettings gs;
  gs.alpha_count = 64;
  gs.theta_count = 8;
  const auto dom = domain_union_over_orientations(0.5, pair, none, load, gs);
  CHECK(dom.t == 0.5);
  REQUIRE(dom.thetas.size() == 8);
  REQUIRE(dom.polygons.size() == 8);
  std::array<double, 4> bbox{};
  const auto mask = rasterize_mask(dom, 32, bbox);
  REQUIRE(mask.size() == 32);
  REQUIRE(mask[0].size() == 32);
  CHECK(bbox[0] < bbox[2]);
  CHECK(bbox[1] < bbox[3]);
  int inside = 0;
  for (const auto& row : mask)
    for (auto c : row) inside += c;
  CHECK(inside > 0);
  CHECK(inside < 32 * 32);
}

TEST_CASE("laminate reference curve reproduces the classical means") {
  const auto pair = default_stress_pair();
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  // loading across the layers at t = 0: harmonic mean, normalized 4/3
  const auto across = laminate_reference_curve(0.0, 0.0, pair, load, {0.0, 0.5, 1.0});
  REQUIRE(across.size() == 3);
  CHECK(across[0][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(across[0][1] == doctest::Approx(1.0).epsilon(1e-12));  // pure phase 2
  CHECK(across[1][1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(across[2][1] == doctest::Approx(2.0).epsilon(1e-12));  // pure phase 1
  // loading along the layers: arithmetic mean, normalized 1.5
  const auto along = laminate_reference_curve(0.0, kPi / 2.0, pair, load, {0.5});
  CHECK(along[0][1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(along[0][0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("laminate responses respect the scalar bounds at every time") {
  const auto pair = default_stress_pair();
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  InfoSet vf;
  vf.volume_fraction = 0.35;
  for (double t : {0.0, 0.6, 1.4, 3.0}) {
    const double lo = optimize_bound(pair, vf, t, BoundSense::Lower).value;
    const double hi = optimize_bound(pair, vf, t, BoundSense::Upper).value;
    for (double theta : {0.0, kPi / 2.0}) {
      const auto pts = laminate_reference_curve(t, theta, pair, load, {0.35});
      CHECK(pts[0][1] >= lo - 1e-9);
      CHECK(pts[0][1] <= hi + 1e-9);
    }
  }
}

TEST_CASE("quadratic-form support: agreement with the scalar bound and superadditivity") {
  const auto pair = default_stress_pair();
  InfoSet vf;
  vf.volume_fraction = 0.4;
  GeometrySettings gs;
  // V = diag(1,0) measures the 11-entry of the relaxation matrix, whose
  // minimum is the physical scalar lower bound G2 * (normalized bound)
  const double ks = kernel_support({1.0, 0.0, 0.0, 0.0}, 1.0, pair, vf, gs);
  const double scalar = 0.5 * optimize_bound(pair, vf, 1.0, BoundSense::Lower).value;
  CHECK(ks == doctest::Approx(scalar).epsilon(1e-4));

  // splitting V loses information: support(V1 + V2) >= support(V1) + support(V2)
  for (double t : {0.2, 1.0, 2.5}) {
    const double s1 = kernel_support({1.0, 0.0, 0.0, 0.0}, t, pair, vf, gs);
    const double s2 = kernel_support({0.0, 0.0, 0.0, 1.0}, t, pair, vf, gs);
    const double s3 = kernel_support({0.0, 0.5, 0.5, 0.0}, t, pair, vf, gs);
    const double joint = kernel_support({1.0, 0.5, 0.5, 1.0}, t, pair, vf, gs);
    CHECK(joint >= s1 + s2 + s3 - 1e-9);
  }
  CHECK_THROWS_AS(kernel_support({1.0, 0.3, 0.2, 1.0}, 1.0, pair, vf, gs),
                  std::invalid_argument);
}

TEST_CASE("correlated support: single-tuple case equals the directional support") {
  const auto pair = default_stress_pair();
  InfoSet vf;
  vf.volume_fraction = 0.4;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  for (double t : {0.4, 1.1})
    for (Point2 dir : {Point2{0.0, 1.0}, Point2{0.3, 0.95}, Point2{-1.0, 0.2}}) {
      const double d = directional_support(dir, t, pair, vf, load);
      CorrelateQuery q;
      q.times = {t};
      q.directions = {dir};
      q.loadings = {load};
      CHECK(correlate_support(q, pair, vf) == doctest::Approx(d).epsilon(1e-10));
    }
}

TEST_CASE("correlated support dominates the sum of marginals") {
  const auto pair = default_stress_pair();
  InfoSet vf;
  vf.volume_fraction = 0.4;
  StepLoading load{StepLoading::Kind::StrainStep, {1.0, 0.0}};
  // generic pairs: joint optimum cannot beat optimizing each time separately
  const std::vector<std::pair<double, double>> time_pairs{{0.5, 2.0}, {0.3, 1.0}, {1.2, 2.8}};
  for (const auto& [ta, tb] : time_pairs) {
    CorrelateQuery q;
    q.times = {ta, tb};
    q.directions = {{0.0, 1.0}, {0.0, -1.0}};
    q.loadings = {load, load};
    const double joint = correlate_support(q, pair, vf);
    const double marginals = directional_support({0.0, 1.0}, ta, pair, vf, load) +
                             directional_support({0.0, -1.0}, tb, pair, vf, load);
    CHECK(joint >= marginals - 1e-9);
  }
  // opposite directions at the same time: the joint objective cancels exactly,
  // while the marginals pay the full width of the response band
  CorrelateQuery same;
  same.times = {1.0, 1.0};
  same.directions = {{0.0, 1.0}, {0.0, -1.0}};
  same.loadings = {load, load};
  const double joint = correlate_support(same, pair, vf);
  const double marginals = directional_support({0.0, 1.0}, 1.0, pair, vf, load) +
                           directional_support({0.0, -1.0}, 1.0, pair, vf, load);
  CHECK(joint == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(joint > marginals + 1e-3);
}
