#include "vtb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vtb/lp.hpp"

namespace vtb {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// (R M R^T)_11 and _22 for R = [[c,-s],[s,c]], M symmetric
std::array<double, 2> rotated_diag(double theta, const std::array<double, 4>& m) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * c * m[0] - 2.0 * s * c * m[1] + s * s * m[3],
          s * s * m[0] + 2.0 * s * c * m[1] + c * c * m[3]};
}

std::array<double, 4> sym_outer(const Point2& a, const Point2& b) {
  const double off = 0.5 * (a[0] * b[1] + a[1] * b[0]);
  return {a[0] * b[0], off, off, a[1] * b[1]};
}

std::vector<double> dense_pole_grid(int n) {
  std::vector<double> v;
  v.reserve(n + n / 2);
  for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(i) / n * 0.999);
  for (int j = 1; j <= n / 2; ++j) v.push_back(1.0 - std::exp(-30.0 * j / (n / 2)));
  std::sort(v.begin(), v.end());
  return v;
}

Point2 unit_amplitude(const StepLoading& loading) {
  const double n = std::hypot(loading.amplitude[0], loading.amplitude[1]);
  if (!(n > 0.0)) throw std::invalid_argument("loading amplitude must be nonzero");
  return {loading.amplitude[0] / n, loading.amplitude[1] / n};
}

void check_loading_side(const CompositePair& pair, const StepLoading& loading) {
  const bool strain_step = loading.kind == StepLoading::Kind::StrainStep;
  if ((pair.side == Side::Stress) != strain_step)
    throw std::invalid_argument("loading kind does not match the problem side");
}

// extremes of c(s) = K(s,t)(1-s) over s in [0,1): (min, argmin, max, argmax)
struct KernelExtremes {
  double cmin, s_at_min, cmax, s_at_max;
};

KernelExtremes kernel_extremes(const CompositePair& pair, double t, int grid) {
  const auto cands = dense_pole_grid(grid);
  KernelExtremes e{1e300, 0.0, -1e300, 0.0};
  auto refine = [&](std::size_t i, double sgn) {
    const double lo = cands[i == 0 ? 0 : i - 1];
    const double hi = cands[std::min(i + 1, cands.size() - 1)];
    double a = lo, b = hi;
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    auto f = [&](double s) { return sgn * kernel(pair, s, t) * (1.0 - s); };
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
      if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - invphi * (b - a); f1 = f(x1); }
      else { a = x1; x1 = x2; f1 = f2; x2 = a + invphi * (b - a); f2 = f(x2); }
    }
    return f1 < f2 ? x1 : x2;
  };
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const double c = kernel(pair, cands[i], t) * (1.0 - cands[i]);
    if (c < e.cmin) { e.cmin = c; imin = i; }
    if (c > e.cmax) { e.cmax = c; imax = i; }
  }
  const double smin = refine(imin, 1.0);
  const double smax = refine(imax, -1.0);
  if (double c = kernel(pair, smin, t) * (1.0 - smin); c < e.cmin) { e.cmin = c; e.s_at_min = smin; }
  else e.s_at_min = cands[imin];
  if (double c = kernel(pair, smax, t) * (1.0 - smax); c > e.cmax) { e.cmax = c; e.s_at_max = smax; }
  else e.s_at_max = cands[imax];
  return e;
}

std::array<double, 2> eval_normalized_vector(const SpectralConfig& config,
                                             const CompositePair& pair, const Point2& e,
                                             double t) {
  StepLoading unit;
  unit.amplitude = e;
  if (pair.side == Side::Stress) {
    unit.kind = StepLoading::Kind::StrainStep;
    auto r = eval_vector_stress(config, pair, unit, t);
    const double g2 = pair.phase2.modulus;
    return {r[0] / g2, r[1] / g2};
  }
  unit.kind = StepLoading::Kind::StressStep;
  auto r = eval_vector_strain(config, pair, unit, t);
  const double g2 = pair.phase2.modulus;
  return {r[0] * 2.0 * g2, r[1] * 2.0 * g2};
}

}  // namespace

Polygon convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polygon hull;
  if (pts.size() < 3) {
    hull.vertices = pts;
    return hull;
  }
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper chain
    while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  hull.vertices = std::move(h);
  return hull;
}

Polygon domain_fixed_orientation(double t, double theta, const CompositePair& pair,
                                 const InfoSet& info, const StepLoading& loading,
                                 const GeometrySettings& settings) {
  info.validate();
  pair.validate();
  check_loading_side(pair, loading);
  if (!info.known_values.empty())
    throw std::invalid_argument("response domains support only vf/isotropy information");
  const Point2 e = unit_amplitude(loading);
  const int alphas = std::max(8, static_cast<int>(std::lround(settings.alpha_count * settings.grid_scale)));
  std::vector<Point2> points;
  points.reserve(alphas);

  if (!info.volume_fraction) {
    // no information: the two tracks decouple, each with a one-pole vertex
    const auto ex = kernel_extremes(pair, t, std::max(16, static_cast<int>(std::lround(
                                                              settings.pole_grid * settings.grid_scale))));
    for (int ia = 0; ia < alphas; ++ia) {
      const double alpha = 2.0 * std::numbers::pi * ia / alphas;
      const Point2 v{std::sin(alpha), std::cos(alpha)};
      const auto m = rotated_diag(theta, sym_outer(e, v));
      SpectralConfig config;
      config.side = pair.side;
      // per track, the candidate contributions are 0 or -c(s) * weight
      auto pick = [&](double w, double& pole, double& mass) {
        const double at_min = -w * (w > 0.0 ? ex.cmax : ex.cmin);
        if (at_min < 0.0) {
          pole = w > 0.0 ? ex.s_at_max : ex.s_at_min;
          mass = 1.0 - pole;
        } else {
          mass = 0.0;
        }
      };
      double pa = 0.0, ma = 0.0, pb = 0.0, mb = 0.0;
      pick(m[0], pa, ma);
      pick(m[1], pb, mb);
      if (ma > 0.0 && mb > 0.0 && std::abs(pa - pb) < 1e-13) {
        config.poles = {pa};
        config.rotated_residues = {{theta, ma, mb}};
      } else {
        if (ma > 0.0 && mb > 0.0 && pa > pb) {
          config.poles = {pb, pa};
          config.rotated_residues = {{theta, 0.0, mb}, {theta, ma, 0.0}};
        } else {
          if (ma > 0.0) { config.poles.push_back(pa); config.rotated_residues.push_back({theta, ma, 0.0}); }
          if (mb > 0.0) {
            if (!config.poles.empty() && pb < config.poles[0]) {
              config.poles.insert(config.poles.begin(), pb);
              config.rotated_residues.insert(config.rotated_residues.begin(), {theta, 0.0, mb});
            } else {
              config.poles.push_back(pb);
              config.rotated_residues.push_back({theta, 0.0, mb});
            }
          }
        }
      }
      const auto r = eval_normalized_vector(config, pair, e, t);
      points.push_back({r[1], r[0]});  // plotted as (r13, r12)
    }
  } else {
    // inner LP over a fixed dense pole grid with reflective constraints
    const auto poles = dense_pole_grid(std::max(16, static_cast<int>(std::lround(
                                                        settings.pole_grid * settings.grid_scale))));
    InfoSet local = info;
    local.symmetry = SymmetryClass::Reflective;
    auto spec = build_reflective_constraints(local, poles);
    std::vector<double> kvals(poles.size());
    for (std::size_t i = 0; i < poles.size(); ++i) kvals[i] = kernel(pair, poles[i], t);
    for (int ia = 0; ia < alphas; ++ia) {
      const double alpha = 2.0 * std::numbers::pi * ia / alphas;
      const Point2 v{std::sin(alpha), std::cos(alpha)};
      const auto m = rotated_diag(theta, sym_outer(e, v));
      for (std::size_t i = 0; i < poles.size(); ++i) {
        spec.objective[2 * i] = -kvals[i] * m[0];
        spec.objective[2 * i + 1] = -kvals[i] * m[1];
      }
      const auto sol = simplex_solve(spec, LpSense::Min);
      if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("infeasible response-domain subproblem");
      SpectralConfig config;
      config.side = pair.side;
      for (std::size_t i = 0; i < poles.size(); ++i) {
        const double a = sol.point[2 * i], b = sol.point[2 * i + 1];
        if (a > 1e-13 || b > 1e-13) {
          config.poles.push_back(poles[i]);
          config.rotated_residues.push_back({theta, std::max(a, 0.0), std::max(b, 0.0)});
        }
      }
      const auto r = eval_normalized_vector(config, pair, e, t);
      points.push_back({r[1], r[0]});
    }
  }
  return convex_hull(std::move(points));
}

ResponseDomain domain_union_over_orientations(double t, const CompositePair& pair,
                                              const InfoSet& info, const StepLoading& loading,
                                              const GeometrySettings& settings) {
  ResponseDomain out;
  out.t = t;
  const int thetas = std::max(1, static_cast<int>(std::lround(settings.theta_count * settings.grid_scale)));
  for (int i = 0; i < thetas; ++i) {
    const double theta = std::numbers::pi * i / thetas;
    out.thetas.push_back(theta);
    out.polygons.push_back(domain_fixed_orientation(t, theta, pair, info, loading, settings));
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> rasterize_mask(const ResponseDomain& domain,
                                                      int resolution,
                                                      std::array<double, 4>& bbox) {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  bbox = {1e300, 1e300, -1e300, -1e300};
  for (const auto& poly : domain.polygons)
    for (const auto& p : poly.vertices) {
      bbox[0] = std::min(bbox[0], p[0]);
      bbox[1] = std::min(bbox[1], p[1]);
      bbox[2] = std::max(bbox[2], p[0]);
      bbox[3] = std::max(bbox[3], p[1]);
    }
  std::vector<std::vector<std::uint8_t>> mask(resolution, std::vector<std::uint8_t>(resolution, 0));
  if (bbox[0] > bbox[2]) return mask;
  auto inside = [](const Polygon& poly, double x, double y) {
    bool in = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if ((v[i][1] > y) != (v[j][1] > y) &&
          x < (v[j][0] - v[i][0]) * (y - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0])
        in = !in;
    }
    return in;
  };
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const double x = bbox[0] + (bbox[2] - bbox[0]) * (j + 0.5) / resolution;
      const double y = bbox[1] + (bbox[3] - bbox[1]) * (i + 0.5) / resolution;
      for (const auto& poly : domain.polygons) {
        if (poly.vertices.size() >= 3 && inside(poly, x, y)) {
          mask[i][j] = 1;
          break;
        }
      }
    }
  return mask;
}

std::vector<Point2> laminate_reference_curve(double t, double theta, const CompositePair& pair,
                                             const StepLoading& loading,
                                             const std::vector<double>& f1_grid) {
  pair.validate();
  check_loading_side(pair, loading);
  const Point2 e = unit_amplitude(loading);
  std::vector<Point2> out;
  out.reserve(f1_grid.size());
  for (double f1 : f1_grid) {
    if (!(f1 >= 0.0 && f1 <= 1.0)) throw std::invalid_argument("f1 grid must lie in [0,1]");
    const double f2 = 1.0 - f1;
    SpectralConfig config;
    config.side = pair.side;
    if (f1 > 0.0) {
      // layer normal along the first axis: pole f2 feeds the normal (a) slot
      // on the stress side; the roles swap in the compliance representation
      const RotatedResidue at_zero =
          pair.side == Side::Stress ? RotatedResidue{theta, 0.0, f1} : RotatedResidue{theta, f1, 0.0};
      const RotatedResidue at_f2 =
          pair.side == Side::Stress ? RotatedResidue{theta, f1, 0.0} : RotatedResidue{theta, 0.0, f1};
      if (f2 < 1e-13) {
        config.poles = {0.0};
        config.rotated_residues = {{theta, f1, f1}};
      } else {
        config.poles = {0.0, f2};
        config.rotated_residues = {at_zero, at_f2};
      }
    }
    const auto r = eval_normalized_vector(config, pair, e, t);
    out.push_back({r[1], r[0]});
  }
  return out;
}

double kernel_support(const std::array<double, 4>& V, double t, const CompositePair& pair,
                      const InfoSet& info, const GeometrySettings& settings) {
  info.validate();
  pair.validate();
  if (!info.known_values.empty())
    throw std::invalid_argument("kernel supports support only vf/isotropy information");
  if (std::abs(V[1] - V[2]) > 1e-12) throw std::invalid_argument("V must be symmetric");
  // eigenvalues of V; any admissible residue set can be diagonalized in V's
  // eigenbasis without changing the objective or violating the sum rules
  const double mean = 0.5 * (V[0] + V[3]);
  const double rad = std::sqrt(0.25 * (V[0] - V[3]) * (V[0] - V[3]) + V[1] * V[1]);
  const double v1 = mean + rad, v2 = mean - rad;

  const auto poles = dense_pole_grid(std::max(16, static_cast<int>(std::lround(
                                                      settings.pole_grid * settings.grid_scale))));
  InfoSet local = info;
  local.symmetry = SymmetryClass::Reflective;
  auto spec = build_reflective_constraints(local, poles);
  const double g2 = pair.phase2.modulus;
  const double scale = pair.side == Side::Stress ? g2 : 1.0 / (2.0 * g2);
  spec.objective_offset = scale * (v1 + v2);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double k = kernel(pair, poles[i], t);
    spec.objective[2 * i] = -scale * k * v1;
    spec.objective[2 * i + 1] = -scale * k * v2;
  }
  const auto sol = simplex_solve(spec, LpSense::Min);
  if (sol.status != LpStatus::Optimal) throw std::runtime_error("infeasible kernel-support problem");
  return sol.value;
}

namespace {

double nonreflective_support(const std::vector<Point2>& directions,
                             const std::vector<double>& times,
                             const std::vector<StepLoading>& loadings, const CompositePair& pair,
                             const InfoSet& info, const NonReflectiveDiscretization& disc) {
  info.validate();
  pair.validate();
  if (directions.empty() || directions.size() != times.size() ||
      directions.size() != loadings.size())
    throw std::invalid_argument("directions, times and loadings must have equal nonzero length");
  for (const auto& l : loadings) check_loading_side(pair, l);
  if (!info.known_values.empty())
    throw std::invalid_argument("correlated supports support only vf/isotropy information");

  InfoSet local = info;
  local.symmetry = SymmetryClass::NonReflective;
  local.fictitious_delta = disc.delta;
  auto spec = build_nonreflective_constraints(local, disc, pair);
  const auto poles = disc.poles();
  const auto angles = disc.angles();
  const double g2 = pair.phase2.modulus;
  const double scale = pair.side == Side::Stress ? g2 : 1.0 / (2.0 * g2);

  double offset = 0.0;
  for (std::size_t j = 0; j < directions.size(); ++j)
    offset += scale * (directions[j][0] * loadings[j].amplitude[0] +
                       directions[j][1] * loadings[j].amplitude[1]);
  spec.objective_offset = offset;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    double ca = 0.0, cb = 0.0;
    for (std::size_t j = 0; j < directions.size(); ++j) {
      const double k = kernel(pair, poles[i], times[j]);
      const auto m = rotated_diag(
          angles[i], sym_outer({loadings[j].amplitude[0], loadings[j].amplitude[1]}, directions[j]));
      ca += k * m[0];
      cb += k * m[1];
    }
    spec.objective[2 * i] = -scale * ca;
    spec.objective[2 * i + 1] = -scale * cb;
  }
  const auto sol = simplex_solve(spec, LpSense::Min);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("infeasible correlated-support problem");
  return sol.value;
}

}  // namespace

double directional_support(const Point2& v, double t, const CompositePair& pair,
                           const InfoSet& info, const StepLoading& loading,
                           const NonReflectiveDiscretization& disc) {
  return nonreflective_support({v}, {t}, {loading}, pair, info, disc);
}

double correlate_support(const CorrelateQuery& query, const CompositePair& pair,
                         const InfoSet& info, const NonReflectiveDiscretization& disc) {
  return nonreflective_support(query.directions, query.times, query.loadings, pair, info, disc);
}

}  // namespace vtb
