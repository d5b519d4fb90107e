#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vtb/optimizer.hpp"
#include "vtb/phase.hpp"
#include "vtb/spectral.hpp"
#include "vtb/sum_rules.hpp"

namespace vtb {

using Point2 = std::array<double, 2>;

struct Polygon {
  std::vector<Point2> vertices;  // counterclockwise, no repeated closing vertex
};

/// Monotone-chain convex hull; duplicates and collinear points removed.
Polygon convex_hull(std::vector<Point2> points);

struct GeometrySettings {
  int alpha_count = 256;  // supporting-direction samples on [0, 2 pi)
  int theta_count = 64;   // residue orientations on [0, pi)
  int pole_grid = 64;     // fixed pole grid for the inner LPs
  double grid_scale = 1.0;
};

/// Attainable (response_12, response_13) set at time t when every residue
/// shares the orientation theta: convex hull of the per-direction
/// minimizers of sin(a) r12 + cos(a) r13 over the feasible residues/poles.
Polygon domain_fixed_orientation(double t, double theta, const CompositePair& pair,
                                 const InfoSet& info, const StepLoading& loading,
                                 const GeometrySettings& settings = {});

struct ResponseDomain {
  double t = 0.0;
  std::vector<double> thetas;
  std::vector<Polygon> polygons;  // one convex hull per theta
};

/// Union (as a polygon collection) of the fixed-orientation hulls over a
/// theta grid; the union itself need not be convex.
ResponseDomain domain_union_over_orientations(double t, const CompositePair& pair,
                                              const InfoSet& info, const StepLoading& loading,
                                              const GeometrySettings& settings = {});

/// Occupancy mask of the domain over its bounding box: mask[i][j] = 1 when
/// the cell center lies inside some per-theta polygon. Also returns the box
/// as {xmin, ymin, xmax, ymax}.
std::vector<std::vector<std::uint8_t>> rasterize_mask(const ResponseDomain& domain,
                                                      int resolution,
                                                      std::array<double, 4>& bbox);

/// Exact simple-laminate response curve (layer normal along the first
/// response axis before rotation by theta) over a volume-fraction grid.
std::vector<Point2> laminate_reference_curve(double t, double theta, const CompositePair& pair,
                                             const StepLoading& loading,
                                             const std::vector<double>& f1_grid);

/// Minimum of Tr(V C^h(t)) (stress side) or Tr(V M^h(t)) (strain side) over
/// all composites admissible for `info`; V must be symmetric ({v11, v12,
/// v21, v22} row-major). The half-space Tr(V .) >= returned value is valid.
double kernel_support(const std::array<double, 4>& V, double t, const CompositePair& pair,
                      const InfoSet& info, const GeometrySettings& settings = {});

/// Minimum of v . response(t) for a single time and direction, via the
/// non-reflective angle-clock discretization.
double directional_support(const Point2& v, double t, const CompositePair& pair,
                           const InfoSet& info, const StepLoading& loading,
                           const NonReflectiveDiscretization& disc = {});

struct CorrelateQuery {
  std::vector<double> times;
  std::vector<Point2> directions;
  std::vector<StepLoading> loadings;  // one per time (shared configuration)
};

/// Minimum of sum_j v_j . response_j(t_j) over one shared pole/residue
/// configuration: a supporting hyperplane of the correlated response tuple.
double correlate_support(const CorrelateQuery& query, const CompositePair& pair,
                         const InfoSet& info, const NonReflectiveDiscretization& disc = {});

}  // namespace vtb
