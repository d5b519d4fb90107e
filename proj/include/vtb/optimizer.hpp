#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "vtb/phase.hpp"
#include "vtb/spectral.hpp"
#include "vtb/sum_rules.hpp"

namespace vtb {

enum class BoundSense { Upper, Lower };

struct OptimizerSettings {
  int grid_1d = 64;        // coarse scan points per pole coordinate, 1-D cases
  int grid_2d = 48;        // per coordinate, 2-D pole searches
  int grid_3d = 24;        // per coordinate, 3-D pole searches
  double grid_scale = 1.0; // multiplies every grid size
  double value_tol = 1e-10;
  int refine_iters = 300;  // local (Nelder-Mead style) refinement budget
  int generic_grid = 160;  // fixed pole-grid size for known-value cases

  int scaled(int base) const;
};

struct BoundResult {
  bool feasible = false;
  double value = 0.0;       // normalized response bound (sigma/(G2 eps0) etc.)
  SpectralConfig config;    // attaining configuration
};

/// Extremal normalized scalar response 1 - sum K(s_i,t) B_i over all
/// configurations admissible for `info` at time t. Multiply by G2 eps0
/// (stress side) or sigma0/(2 G2) (strain side) for physical units.
BoundResult optimize_bound(const CompositePair& pair, const InfoSet& info, double t,
                           BoundSense sense, const OptimizerSettings& settings = {});

struct BoundRecord {
  double t = 0.0;
  bool feasible = false;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> lower_poles;
  std::vector<double> upper_poles;
  double gap() const { return upper - lower; }
};

/// Per-time lower and upper bounds over a strictly increasing time grid.
/// Per-time optimizations run on `threads` workers; output order is by
/// time index regardless of completion order.
std::vector<BoundRecord> sweep_bounds(const CompositePair& pair, const InfoSet& info,
                                      const std::vector<double>& times,
                                      const OptimizerSettings& settings = {}, int threads = 1);

/// Crossover times (t1, t2, t3) of the no-information stress bounds:
/// upper bound leaves the pure-phase-1 branch at t1 and reaches the
/// phase-2 plateau at t3; the lower bound switches branches at t2.
std::array<double, 3> crossover_times(const CompositePair& pair);

/// Stationary pole of the no-information upper bound for t in [t1, t3],
/// clamped to [0,1).
double optimal_pole_analytic(double t, const CompositePair& pair);

/// Closed-form normalized no-information bounds (piecewise analytic).
double closed_form_upper_no_info(const CompositePair& pair, double t);
double closed_form_lower_no_info(const CompositePair& pair, double t);

/// Diagnostics for the pinch times: the spread max K - min K of the kernel
/// over a pole grid at time t, and the residual (max absolute deviation)
/// of the best affine fit of K in s over the same grid.
std::pair<double, double> tightness_coefficient_spread(double t, const CompositePair& pair,
                                                       const std::vector<double>& pole_grid);

struct F1Interval {
  bool consistent = true;  // false: a measurement violates the no-info envelope
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};

/// Volume fractions f1 whose bounds (for info_base with that f1 inserted)
/// contain every measurement. Measurements are (t, normalized response).
F1Interval invert_volume_fraction(const std::vector<std::pair<double, double>>& measurements,
                                  const CompositePair& pair, const InfoSet& info_base,
                                  const OptimizerSettings& settings = {});

/// Derivative-free local minimizer (Nelder-Mead) used by the pole searches;
/// exposed for reuse and testing. Returns the best point found.
std::vector<double> nelder_mead(const std::vector<double>& start, double step,
                                const std::function<double(const std::vector<double>&)>& f,
                                int max_iters, double tol);

}  // namespace vtb
