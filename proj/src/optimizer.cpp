#include "vtb/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "vtb/lp.hpp"

namespace vtb {

namespace {

constexpr double kInfeasiblePenalty = 1e30;
constexpr double kTailYMax = 30.0;  // poles near 1 parameterized as s = 1 - e^{-y}

double tail_pole(double y, double lo) { return 1.0 - (1.0 - lo) * std::exp(-y); }

double golden_min(double a, double b, const std::function<double(double)>& f) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 90 && b - a > 1e-14; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// grid scan over sorted candidates followed by golden refinement in the
// bracket around the best point; returns the minimizer
double grid_refine_min(const std::vector<double>& candidates,
                       const std::function<double(double)>& f) {
  std::size_t best = 0;
  double fbest = f(candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = f(candidates[i]);
    if (v < fbest) { fbest = v; best = i; }
  }
  const double lo = candidates[best == 0 ? 0 : best - 1];
  const double hi = candidates[std::min(best + 1, candidates.size() - 1)];
  if (hi <= lo) return candidates[best];
  const double x = golden_min(lo, hi, f);
  return f(x) < fbest ? x : candidates[best];
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// pole candidates on [lo, 1): uniform part plus a tail accumulating at 1
std::vector<double> pole_candidates(double lo, int n) {
  std::vector<double> v;
  v.reserve(n + n / 2);
  for (int i = 0; i < n; ++i) v.push_back(lo + (1.0 - lo) * i / n * 0.999);
  for (int j = 1; j <= n / 2; ++j) v.push_back(tail_pole(kTailYMax * j / (n / 2), lo));
  std::sort(v.begin(), v.end());
  return v;
}

double normalized_response(const CompositePair& pair, const std::vector<double>& poles,
                           const std::vector<double>& residues, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poles.size(); ++i)
    acc += kernel(pair, poles[i], t) * residues[i];
  return 1.0 - acc;
}

struct Candidate {
  bool ok = false;
  double value = 0.0;  // normalized response
  std::vector<double> poles;
  std::vector<double> residues;
};

void take_better(Candidate& best, const Candidate& c, BoundSense sense) {
  if (!c.ok) return;
  if (!best.ok || (sense == BoundSense::Upper ? c.value > best.value : c.value < best.value))
    best = c;
}

// ---- no-information case: extremes of c(s) = K(s,t)(1-s) ----

Candidate no_info_bound(const CompositePair& pair, double t, BoundSense sense,
                        const OptimizerSettings& st) {
  const auto cands = pole_candidates(0.0, st.scaled(st.grid_1d));
  const double sgn = (sense == BoundSense::Upper) ? 1.0 : -1.0;
  auto f = [&](double s) { return sgn * kernel(pair, s, t) * (1.0 - s); };
  const double s_star = grid_refine_min(cands, f);
  const double c_star = kernel(pair, s_star, t) * (1.0 - s_star);
  Candidate out;
  out.ok = true;
  if (sgn * c_star < 0.0) {
    out.value = 1.0 - c_star;
    out.poles = {s_star};
    out.residues = {1.0 - s_star};
  } else {
    out.value = 1.0;  // pure phase 2 (all residues zero) is extremal
  }
  return out;
}

// ---- shared local refinement over pole vectors ----

// minimizes obj over d pole parameters via Nelder-Mead from `start`
std::vector<double> refine(const std::vector<double>& start, double step,
                           const std::function<double(const std::vector<double>&)>& obj,
                           const OptimizerSettings& st) {
  return nelder_mead(start, step, obj, st.refine_iters, st.value_tol);
}

// ---- volume-fraction case ----

Candidate vf_bound(const CompositePair& pair, const InfoSet& info, double t, BoundSense sense,
                   const OptimizerSettings& st, const std::vector<double>* warm) {
  const double f1 = *info.volume_fraction;
  const double f2 = 1.0 - f1;
  const double sgn = (sense == BoundSense::Upper) ? -1.0 : 1.0;  // minimize sgn * rho

  Candidate best;

  // one-pole family: B = f1 at s0 <= f2
  {
    auto f = [&](double s) { return sgn * (1.0 - kernel(pair, s, t) * f1); };
    const double s_star = grid_refine_min(linspace(0.0, f2, st.scaled(st.grid_1d)), f);
    Candidate c;
    c.ok = true;
    c.poles = {s_star};
    c.residues = {f1};
    c.value = normalized_response(pair, c.poles, c.residues, t);
    take_better(best, c, sense);
  }

  // two-pole family: s0 in [0,f2], s1 = 1 - (1-f2) e^{-y}
  auto eval2 = [&](const std::vector<double>& p) {
    const double s0 = p[0];
    const double y = p[1];
    if (s0 < 0.0 || s0 > f2 || y < 0.0 || y > kTailYMax)
      return kInfeasiblePenalty * (1.0 + std::abs(s0) + std::abs(y));
    const double s1 = tail_pole(y, f2);
    if (s1 <= s0) return kInfeasiblePenalty;
    const auto b = residues_vf_two_pole(s0, s1, f1);
    return sgn * normalized_response(pair, {s0, s1}, {b[0], b[1]}, t);
  };
  {
    const int g = st.scaled(st.grid_2d);
    std::vector<double> bestp;
    double fbest = kInfeasiblePenalty;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const std::vector<double> p{f2 * i / (g - 1.0), kTailYMax * j / (g - 1.0)};
        const double v = eval2(p);
        if (v < fbest) { fbest = v; bestp = p; }
      }
    if (warm && warm->size() == 2) {
      const double wy = -std::log(std::max((1.0 - (*warm)[1]) / (1.0 - f2), 1e-14));
      const std::vector<double> p{std::clamp((*warm)[0], 0.0, f2), std::clamp(wy, 0.0, kTailYMax)};
      if (eval2(p) < fbest) { fbest = eval2(p); bestp = p; }
    }
    if (fbest < kInfeasiblePenalty) {
      auto p = refine(bestp, 0.05, eval2, st);
      if (eval2(p) > fbest) p = bestp;
      Candidate c;
      c.ok = true;
      c.poles = {p[0], tail_pole(p[1], f2)};
      const auto b = residues_vf_two_pole(c.poles[0], c.poles[1], f1);
      c.residues = {b[0], b[1]};
      c.value = normalized_response(pair, c.poles, c.residues, t);
      take_better(best, c, sense);
    }
  }
  return best;
}

// ---- isotropy + volume-fraction case ----

Candidate iso_bound(const CompositePair& pair, const InfoSet& info, double t, BoundSense sense,
                    const OptimizerSettings& st, const std::vector<double>* warm) {
  const double f1 = *info.volume_fraction;
  const double f2 = 1.0 - f1;
  const double sgn = (sense == BoundSense::Upper) ? -1.0 : 1.0;

  Candidate best;

  // two-pole family (sum constraint slack): s0 <= f2/2 <= s1
  auto eval2 = [&](const std::vector<double>& p) {
    const double s0 = p[0];
    const double y = p[1];
    if (s0 < 0.0 || s0 > f2 / 2.0 || y < 0.0 || y > kTailYMax) return kInfeasiblePenalty;
    const double s1 = tail_pole(y, f2 / 2.0);
    if (s1 <= s0) return kInfeasiblePenalty;
    const auto b = residues_iso_two_pole(s0, s1, f1);
    if (!b) return kInfeasiblePenalty;
    if ((*b)[0] / (1.0 - s0) + (*b)[1] / (1.0 - s1) > 1.0 + 1e-12) return kInfeasiblePenalty;
    return sgn * normalized_response(pair, {s0, s1}, {(*b)[0], (*b)[1]}, t);
  };
  {
    const int g = st.scaled(st.grid_2d);
    std::vector<double> bestp;
    double fbest = kInfeasiblePenalty;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const std::vector<double> p{f2 / 2.0 * i / (g - 1.0), kTailYMax * j / (g - 1.0)};
        const double v = eval2(p);
        if (v < fbest) { fbest = v; bestp = p; }
      }
    if (fbest < kInfeasiblePenalty) {
      auto p = refine(bestp, 0.05, eval2, st);
      if (eval2(p) > fbest) p = bestp;
      const double s1 = tail_pole(p[1], f2 / 2.0);
      const auto b = residues_iso_two_pole(p[0], s1, f1);
      if (b) {
        Candidate c;
        c.ok = true;
        c.poles = {p[0], s1};
        c.residues = {(*b)[0], (*b)[1]};
        c.value = normalized_response(pair, c.poles, c.residues, t);
        take_better(best, c, sense);
      }
    }
  }

  // three-pole family: parameters (s0, b, y) with s1 = s0 + (1-s0) b,
  // s2 = 1 - (1-s1) e^{-y}
  auto eval3 = [&](const std::vector<double>& p) {
    const double s0 = p[0], frac = p[1], y = p[2];
    if (s0 < 0.0 || s0 >= 1.0 || frac <= 0.0 || frac >= 1.0 || y <= 0.0 || y > kTailYMax)
      return kInfeasiblePenalty;
    const double s1 = s0 + (1.0 - s0) * frac;
    const double s2 = tail_pole(y, s1);
    if (!(s0 < s1 && s1 < s2 && s2 < 1.0)) return kInfeasiblePenalty;
    const auto b = residues_iso_three_pole(s0, s1, s2, f1);
    if (!b) return kInfeasiblePenalty;
    return sgn * normalized_response(pair, {s0, s1, s2}, {(*b)[0], (*b)[1], (*b)[2]}, t);
  };
  {
    const int g = st.scaled(st.grid_3d);
    std::vector<double> bestp;
    double fbest = kInfeasiblePenalty;
    for (int i = 0; i < g; ++i)
      for (int j = 1; j < g; ++j)
        for (int l = 1; l <= g; ++l) {
          const std::vector<double> p{0.999 * i / (g - 1.0), j / static_cast<double>(g),
                                      kTailYMax * l / g};
          const double v = eval3(p);
          if (v < fbest) { fbest = v; bestp = p; }
        }
    if (warm && warm->size() == 3) {
      const double s0 = (*warm)[0], s1 = (*warm)[1], s2 = (*warm)[2];
      if (s0 < s1 && s1 < s2 && s2 < 1.0) {
        const std::vector<double> p{
            s0, (s1 - s0) / (1.0 - s0),
            std::clamp(-std::log(std::max((1.0 - s2) / (1.0 - s1), 1e-14)), 1e-6, kTailYMax)};
        if (eval3(p) < fbest) { fbest = eval3(p); bestp = p; }
      }
    }
    if (fbest < kInfeasiblePenalty) {
      auto p = refine(bestp, 0.05, eval3, st);
      if (eval3(p) > fbest) p = bestp;
      const double s1 = p[0] + (1.0 - p[0]) * p[1];
      const double s2 = tail_pole(p[2], s1);
      const auto b = residues_iso_three_pole(p[0], s1, s2, f1);
      if (b) {
        Candidate c;
        c.ok = true;
        c.poles = {p[0], s1, s2};
        c.residues = {(*b)[0], (*b)[1], (*b)[2]};
        c.value = normalized_response(pair, c.poles, c.residues, t);
        take_better(best, c, sense);
      }
    }
  }
  return best;
}

// ---- generic case (known values): LP over a fixed dense pole grid ----

Candidate generic_bound(const CompositePair& pair, const InfoSet& info, double t,
                        BoundSense sense, const OptimizerSettings& st) {
  const auto poles = pole_candidates(0.0, st.scaled(st.generic_grid));
  auto spec = build_scalar_constraints(info, poles, pair);
  spec.objective.resize(poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i)
    spec.objective[i] = kernel(pair, poles[i], t);
  // rho = 1 - objective . x: the upper bound minimizes the LP objective
  const auto sol =
      simplex_solve(spec, sense == BoundSense::Upper ? LpSense::Min : LpSense::Max);
  Candidate out;
  if (sol.status != LpStatus::Optimal) return out;
  out.ok = true;
  out.value = 1.0 - sol.value;
  for (std::size_t i = 0; i < poles.size(); ++i)
    if (sol.point[i] > 1e-13) {
      out.poles.push_back(poles[i]);
      out.residues.push_back(sol.point[i]);
    }
  return out;
}

Candidate dispatch(const CompositePair& pair, const InfoSet& info, double t, BoundSense sense,
                   const OptimizerSettings& st, const std::vector<double>* warm) {
  if (!info.known_values.empty()) return generic_bound(pair, info, t, sense, st);
  if (info.transverse_isotropy) return iso_bound(pair, info, t, sense, st, warm);
  if (info.volume_fraction) return vf_bound(pair, info, t, sense, st, warm);
  return no_info_bound(pair, t, sense, st);
}

BoundResult to_result(const CompositePair& pair, Candidate c) {
  BoundResult r;
  r.feasible = c.ok;
  if (!c.ok) return r;
  r.value = c.value;
  r.config.side = pair.side;
  r.config.poles = std::move(c.poles);
  r.config.scalar_residues = std::move(c.residues);
  return r;
}

}  // namespace

int OptimizerSettings::scaled(int base) const {
  const int v = static_cast<int>(std::lround(base * grid_scale));
  return std::max(v, 4);
}

std::vector<double> nelder_mead(const std::vector<double>& start, double step,
                                const std::function<double(const std::vector<double>&)>& f,
                                int max_iters, double tol) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> pts(d + 1, start);
  std::vector<double> vals(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) vals[i] = f(pts[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(d + 1);
    for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(d + 1);
    std::vector<double> v2(d + 1);
    for (std::size_t i = 0; i <= d; ++i) { p2[i] = pts[idx[i]]; v2[i] = vals[idx[i]]; }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  for (int it = 0; it < max_iters; ++it) {
    order();
    if (std::abs(vals[d] - vals[0]) < tol) break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / d;
    auto at = [&](double coef) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + coef * (pts[d][j] - centroid[j]);
      return p;
    };
    auto xr = at(-1.0);
    const double fr = f(xr);
    if (fr < vals[0]) {
      auto xe = at(-2.0);
      const double fe = f(xe);
      if (fe < fr) { pts[d] = xe; vals[d] = fe; }
      else { pts[d] = xr; vals[d] = fr; }
    } else if (fr < vals[d - 1]) {
      pts[d] = xr;
      vals[d] = fr;
    } else {
      auto xc = at(fr < vals[d] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, vals[d])) {
        pts[d] = xc;
        vals[d] = fc;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  return pts[0];
}

BoundResult optimize_bound(const CompositePair& pair, const InfoSet& info, double t,
                           BoundSense sense, const OptimizerSettings& settings) {
  info.validate();
  pair.validate();
  return to_result(pair, dispatch(pair, info, t, sense, settings, nullptr));
}

std::vector<BoundRecord> sweep_bounds(const CompositePair& pair, const InfoSet& info,
                                      const std::vector<double>& times,
                                      const OptimizerSettings& settings, int threads) {
  info.validate();
  pair.validate();
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("times must strictly increase");
  std::vector<BoundRecord> out(times.size());
  threads = std::max(1, threads);

  auto worker = [&](std::size_t begin, std::size_t end) {
    std::vector<double> warm_up, warm_lo;
    for (std::size_t i = begin; i < end; ++i) {
      BoundRecord rec;
      rec.t = times[i];
      auto up = dispatch(pair, info, times[i], BoundSense::Upper, settings,
                         warm_up.empty() ? nullptr : &warm_up);
      auto lo = dispatch(pair, info, times[i], BoundSense::Lower, settings,
                         warm_lo.empty() ? nullptr : &warm_lo);
      rec.feasible = up.ok && lo.ok;
      if (rec.feasible) {
        rec.upper = up.value;
        rec.lower = lo.value;
        rec.upper_poles = up.poles;
        rec.lower_poles = lo.poles;
        warm_up = up.poles;
        warm_lo = lo.poles;
      }
      out[i] = std::move(rec);
    }
  };

  // warm starts propagate only within a chunk; fixed chunk boundaries keep
  // the results identical for every thread count
  constexpr std::size_t kChunk = 16;
  const std::size_t n = times.size();
  if (threads == 1 || n < 2) {
    for (std::size_t b = 0; b < n; b += kChunk) worker(b, std::min(n, b + kChunk));
  } else {
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
      for (;;) {
        const std::size_t b = next.fetch_add(kChunk);
        if (b >= n) return;
        worker(b, std::min(n, b + kChunk));
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::array<double, 3> crossover_times(const CompositePair& pair) {
  pair.validate();
  if (pair.side != Side::Stress)
    throw std::invalid_argument("crossover times are defined for the stress side");
  const double gm = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double g2 = pair.phase2.modulus;
  const double r = g2 / gm;
  if (!(r < 1.0)) throw std::domain_error("crossover times require G2 < G_M");
  return {eta * (1.0 - r) / gm, eta * std::log(1.0 / r) / gm, eta * (1.0 - r) / g2};
}

double optimal_pole_analytic(double t, const CompositePair& pair) {
  const auto tc = crossover_times(pair);
  if (!(t >= tc[0] && t <= tc[2]))
    throw std::domain_error("stationary pole is defined for t in [t1, t3]");
  const double gm = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double g2 = pair.phase2.modulus;
  const double r = g2 / gm;
  const double s0 = (t * g2 / eta - r * (1.0 - r)) / ((1.0 - r) * (1.0 - r));
  return std::clamp(s0, 0.0, 1.0 - 1e-16);
}

double closed_form_upper_no_info(const CompositePair& pair, double t) {
  const auto tc = crossover_times(pair);
  const double gm = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double g2 = pair.phase2.modulus;
  const double r = g2 / gm;
  if (t <= tc[0]) return std::exp(-gm * t / eta) / r;
  if (t >= tc[2]) return 1.0;
  return eta / (t * g2) * (1.0 - r) * std::exp(t * g2 / (eta * (1.0 - r)) - 1.0);
}

double closed_form_lower_no_info(const CompositePair& pair, double t) {
  const auto tc = crossover_times(pair);
  const double gm = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double r = pair.phase2.modulus / gm;
  if (t < tc[1]) return 1.0;
  return std::exp(-gm * t / eta) / r;
}

std::pair<double, double> tightness_coefficient_spread(double t, const CompositePair& pair,
                                                       const std::vector<double>& pole_grid) {
  if (pole_grid.size() < 3) throw std::invalid_argument("pole grid too small");
  const std::size_t n = pole_grid.size();
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = kernel(pair, pole_grid[i], t);
  const auto [mn, mx] = std::minmax_element(k.begin(), k.end());
  // least-squares affine fit k ~ a + b s
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += pole_grid[i];
    sy += k[i];
    sxx += pole_grid[i] * pole_grid[i];
    sxy += pole_grid[i] * k[i];
  }
  const double denom = n * sxx - sx * sx;
  const double b = (n * sxy - sx * sy) / denom;
  const double a = (sy - b * sx) / n;
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    resid = std::max(resid, std::abs(k[i] - a - b * pole_grid[i]));
  return {*mx - *mn, resid};
}

F1Interval invert_volume_fraction(const std::vector<std::pair<double, double>>& measurements,
                                  const CompositePair& pair, const InfoSet& info_base,
                                  const OptimizerSettings& settings) {
  if (measurements.empty()) throw std::invalid_argument("no measurements supplied");
  F1Interval out;

  InfoSet no_info;  // envelope check
  for (const auto& [t, v] : measurements) {
    const auto up = optimize_bound(pair, no_info, t, BoundSense::Upper, settings);
    const auto lo = optimize_bound(pair, no_info, t, BoundSense::Lower, settings);
    if (v > up.value + 1e-9 || v < lo.value - 1e-9) {
      out.consistent = false;
      return out;
    }
  }

  auto feasible = [&](double f1) {
    InfoSet info = info_base;
    info.volume_fraction = f1;
    for (const auto& [t, v] : measurements) {
      const auto up = optimize_bound(pair, info, t, BoundSense::Upper, settings);
      const auto lo = optimize_bound(pair, info, t, BoundSense::Lower, settings);
      if (!up.feasible || !lo.feasible) return false;
      if (v > up.value + 1e-9 || v < lo.value - 1e-9) return false;
    }
    return true;
  };

  const int n = 200;
  int first = -1, last = -1;
  std::vector<char> feas(n + 1, 0);
  for (int i = 1; i < n; ++i) {
    feas[i] = feasible(static_cast<double>(i) / n) ? 1 : 0;
    if (feas[i]) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return out;

  auto bisect_edge = [&](double bad, double good) {
    for (int it = 0; it < 24; ++it) {
      const double mid = 0.5 * (bad + good);
      if (feasible(mid)) good = mid; else bad = mid;
    }
    return good;
  };
  out.empty = false;
  out.lo = bisect_edge(static_cast<double>(first - 1) / n, static_cast<double>(first) / n);
  out.hi = bisect_edge(static_cast<double>(last + 1) / n, static_cast<double>(last) / n);
  return out;
}

}  // namespace vtb
