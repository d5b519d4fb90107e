#pragma once

#include <array>
#include <vector>

#include "vtb/phase.hpp"

namespace vtb {

/// One residue matrix in factored form: B = R(theta)^T diag(b_a, b_b) R(theta).
struct RotatedResidue {
  double theta = 0.0;
  double b_a = 0.0;
  double b_b = 0.0;
};

/// Row-major 2x2 entries {B11, B12, B21, B22} of the factored residue.
std::array<double, 4> residue_matrix(const RotatedResidue& r);

/// A pole/residue configuration. Scalar residues carry only the
/// 11-components; rotated residues carry full 2x2 PSD matrices.
struct SpectralConfig {
  Side side = Side::Stress;
  std::vector<double> poles;                    // ascending, in [0,1)
  std::vector<double> scalar_residues;          // used when rotated empty
  std::vector<RotatedResidue> rotated_residues;

  bool is_rotated() const { return !rotated_residues.empty(); }

  /// Checks pole ordering/range, residue nonnegativity and the sum
  /// constraint sum B/(1-s) <= 1 (scalar) / <= I (rotated), up to `slack`.
  /// Throws std::invalid_argument on violation.
  void validate(double slack = 1e-9) const;
};

struct StepLoading {
  enum class Kind { StrainStep, StressStep };
  Kind kind = Kind::StrainStep;
  std::array<double, 2> amplitude{1.0, 0.0};
};

/// sigma12(t) = G2 eps0 (1 - sum_i K(s_i,t) B11_i) for scalar residues.
double eval_scalar_stress(const SpectralConfig& config, const CompositePair& pair,
                          const StepLoading& loading, double t);

/// eps12(t) = sigma0/(2 G2) (1 - sum_i L(u_i,t) P11_i) for scalar residues.
double eval_scalar_strain(const SpectralConfig& config, const CompositePair& pair,
                          const StepLoading& loading, double t);

/// (sigma12, sigma13)(t) = G2 (eps0 - sum_i K(s_i,t) B_i eps0), rotated residues.
std::array<double, 2> eval_vector_stress(const SpectralConfig& config, const CompositePair& pair,
                                         const StepLoading& loading, double t);

/// (eps12, eps13)(t) = 1/(2 G2) (sigma0 - sum_i L(u_i,t) P_i sigma0).
std::array<double, 2> eval_vector_strain(const SpectralConfig& config, const CompositePair& pair,
                                         const StepLoading& loading, double t);

}  // namespace vtb
