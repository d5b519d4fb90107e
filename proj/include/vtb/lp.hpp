#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace vtb {

struct LinearConstraint {
  std::vector<double> coeff;
  double rhs = 0.0;
};

/// Canonical carrier for the residue optimization: minimize/maximize
/// objective . x + offset over x >= 0, eq . x = rhs, ineq . x <= rhs.
struct LinearProgramSpec {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<LinearConstraint> eq_constraints;
  std::vector<LinearConstraint> ineq_constraints;

  void check_shapes() const;  // throws std::invalid_argument on mismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpSense { Min, Max };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;               // includes objective_offset
  std::vector<double> point;        // residue vector, length num_vars
  std::vector<int> active_set;      // indices of tight inequality constraints
};

/// Dense two-phase simplex with Bland's rule. Sized for <= ~100 variables
/// and a handful of constraints; not a general-purpose solver.
LpSolution simplex_solve(const LinearProgramSpec& spec, LpSense sense);

/// Closed-form basic solutions from the case analysis of the bounds.

/// No information: single pole, residue saturating sum B/(1-s) <= 1.
double residues_no_info(double s0);

/// Known volume fraction f1, two poles with s0 in [0, f2], s1 in [f2, 1).
/// Satisfies B0+B1 = f1 and B0/(1-s0)+B1/(1-s1) = 1.
std::array<double, 2> residues_vf_two_pole(double s0, double s1, double f1);

/// Volume fraction only, one-pole variant: B0 = f1, valid for s0 <= f2.
double residues_vf_one_pole(double s0, double f1);

/// Transverse isotropy + volume fraction, two-pole variant (the sum
/// constraint left slack). Returns nullopt when a residue is negative.
std::optional<std::array<double, 2>> residues_iso_two_pole(double s0, double s1, double f1);

/// Transverse isotropy + volume fraction, three poles: the unique solution
/// of sum B = f1, sum B s = f1 f2 / 2, sum B/(1-s) = 1. Returns nullopt when
/// any residue is negative (infeasible triple) or the poles are too close.
/// Nearly coincident poles (|si-sj| < 1e-12) delegate to the two-pole form.
std::optional<std::array<double, 3>> residues_iso_three_pole(double s0, double s1, double s2,
                                                             double f1);

}  // namespace vtb
