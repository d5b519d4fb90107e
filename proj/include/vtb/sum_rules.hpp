#pragma once

#include <optional>
#include <vector>

#include "vtb/lp.hpp"
#include "vtb/phase.hpp"

namespace vtb {

enum class SymmetryClass { Reflective, NonReflective };

/// Which reading of the reflective volume-fraction rule on the B track to
/// use: TraceConsistent enforces sum b_B = f1 (consistent with sum B = f1 I);
/// AsPrinted enforces sum b_B = f1 f2. See README for the discrepancy.
enum class BTrackRule { TraceConsistent, AsPrinted };

/// A prescribed response value. `value` is the normalized response
/// (sigma12/(G2 eps0) on the stress side, eps12/(sigma0/(2 G2)) on the
/// strain side). `at_infinity` selects the analytic t -> infinity kernel.
struct KnownValue {
  double time = 0.0;
  double value = 0.0;
  bool at_infinity = false;
};

/// Microstructural knowledge that generates the sum rules.
struct InfoSet {
  std::optional<double> volume_fraction;  // f1 in (0,1)
  bool transverse_isotropy = false;
  std::vector<KnownValue> known_values;
  SymmetryClass symmetry = SymmetryClass::Reflective;
  double fictitious_delta = 1e-6;
  // width of the tolerance band around each known value; 0 = exact equality
  double known_value_tolerance = 0.0;

  void validate() const;  // throws std::invalid_argument on inconsistency
};

/// Constraints on scalar residues B11_i at fixed poles: always the
/// inequality sum x/(1-s) <= 1; plus sum x = f1, sum x s = f1 f2 / 2 and
/// one kernel equality per known value, as the InfoSet requests.
/// The objective fields of the returned spec are zero-initialized.
LinearProgramSpec build_scalar_constraints(const InfoSet& info, const std::vector<double>& poles,
                                           const CompositePair& pair);

/// Constraints for reflective symmetry with a common residue orientation.
/// Variables interleave as (b_A0, b_B0, b_A1, b_B1, ...). Emits the two
/// track inequalities sum b/(1-s) <= 1; with a volume fraction, the track
/// sums (per `rule`) and the trace rule sum (b_A + b_B) s = f1 f2.
LinearProgramSpec build_reflective_constraints(const InfoSet& info, const std::vector<double>& poles,
                                               BTrackRule rule = BTrackRule::TraceConsistent);

/// Evenly spaced poles s_i = i/(m+1) for i = 0..m with clocked angles
/// theta_i = 2 pi (i mod k)/k, plus a fictitious pole at 1 - delta.
struct NonReflectiveDiscretization {
  int m = 48;
  int k = 12;
  double delta = 1e-6;

  std::vector<double> poles() const;   // m+2 entries, last = 1 - delta
  std::vector<double> angles() const;  // m+2 entries, fictitious angle 0
};

/// Constraints for the general (non-reflective) case. Variables interleave
/// as (b_A0, b_B0, ...) over all m+2 poles including the fictitious one.
/// Emits the three components of sum B/(1-s) = I over all poles, and with
/// a volume fraction the three components of sum B = f1 I plus the trace
/// rule sum Tr(B) s = f1 f2 (both excluding the fictitious pole).
LinearProgramSpec build_nonreflective_constraints(const InfoSet& info,
                                                  const NonReflectiveDiscretization& disc,
                                                  const CompositePair& pair);

}  // namespace vtb
