#include "vtb/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace vtb {

std::array<double, 4> residue_matrix(const RotatedResidue& r) {
  const double c = std::cos(r.theta);
  const double s = std::sin(r.theta);
  const double off = (r.b_b - r.b_a) * s * c;
  return {r.b_a * c * c + r.b_b * s * s, off, off, r.b_a * s * s + r.b_b * c * c};
}

void SpectralConfig::validate(double slack) const {
  const std::size_t n = poles.size();
  if (is_rotated() ? rotated_residues.size() != n : scalar_residues.size() != n)
    throw std::invalid_argument("residue count does not match pole count");
  double prev = 0.0;
  for (double s : poles) {
    if (!(s >= prev && s < 1.0)) throw std::invalid_argument("poles must ascend within [0,1)");
    prev = s;
  }
  if (is_rotated()) {
    // sum B/(1-s) is symmetric PSD-combination; check its eigenvalues <= 1
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = rotated_residues[i];
      if (r.b_a < -slack || r.b_b < -slack)
        throw std::invalid_argument("rotated residues must be nonnegative");
      const auto b = residue_matrix(r);
      const double w = 1.0 / (1.0 - poles[i]);
      m11 += w * b[0];
      m12 += w * b[1];
      m22 += w * b[3];
    }
    const double mean = 0.5 * (m11 + m22);
    const double rad = std::sqrt(0.25 * (m11 - m22) * (m11 - m22) + m12 * m12);
    if (mean + rad > 1.0 + slack)
      throw std::invalid_argument("sum B/(1-s) exceeds the identity");
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (scalar_residues[i] < -slack)
        throw std::invalid_argument("scalar residues must be nonnegative");
      acc += scalar_residues[i] / (1.0 - poles[i]);
    }
    if (acc > 1.0 + slack) throw std::invalid_argument("sum B/(1-s) exceeds 1");
  }
}

namespace {

double scalar_response_factor(const SpectralConfig& config, const CompositePair& pair, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < config.poles.size(); ++i)
    acc += kernel(pair, config.poles[i], t) * config.scalar_residues[i];
  return 1.0 - acc;
}

std::array<double, 2> vector_response(const SpectralConfig& config, const CompositePair& pair,
                                      const std::array<double, 2>& amp, double t) {
  double r0 = amp[0], r1 = amp[1];
  for (std::size_t i = 0; i < config.poles.size(); ++i) {
    const double k = kernel(pair, config.poles[i], t);
    const auto b = residue_matrix(config.rotated_residues[i]);
    r0 -= k * (b[0] * amp[0] + b[1] * amp[1]);
    r1 -= k * (b[2] * amp[0] + b[3] * amp[1]);
  }
  return {r0, r1};
}

}  // namespace

double eval_scalar_stress(const SpectralConfig& config, const CompositePair& pair,
                          const StepLoading& loading, double t) {
  if (config.side != Side::Stress || pair.side != Side::Stress)
    throw std::invalid_argument("eval_scalar_stress requires stress side");
  if (config.is_rotated()) throw std::invalid_argument("scalar evaluation needs scalar residues");
  if (loading.kind != StepLoading::Kind::StrainStep)
    throw std::invalid_argument("stress response requires a strain step");
  return pair.phase2.modulus * loading.amplitude[0] * scalar_response_factor(config, pair, t);
}

double eval_scalar_strain(const SpectralConfig& config, const CompositePair& pair,
                          const StepLoading& loading, double t) {
  if (config.side != Side::Strain || pair.side != Side::Strain)
    throw std::invalid_argument("eval_scalar_strain requires strain side");
  if (config.is_rotated()) throw std::invalid_argument("scalar evaluation needs scalar residues");
  if (loading.kind != StepLoading::Kind::StressStep)
    throw std::invalid_argument("strain response requires a stress step");
  return loading.amplitude[0] / (2.0 * pair.phase2.modulus) * scalar_response_factor(config, pair, t);
}

std::array<double, 2> eval_vector_stress(const SpectralConfig& config, const CompositePair& pair,
                                         const StepLoading& loading, double t) {
  if (config.side != Side::Stress || pair.side != Side::Stress)
    throw std::invalid_argument("eval_vector_stress requires stress side");
  if (!config.poles.empty() && !config.is_rotated())
    throw std::invalid_argument("vector evaluation needs rotated residues");
  if (loading.kind != StepLoading::Kind::StrainStep)
    throw std::invalid_argument("stress response requires a strain step");
  auto r = vector_response(config, pair, loading.amplitude, t);
  const double g2 = pair.phase2.modulus;
  return {g2 * r[0], g2 * r[1]};
}

std::array<double, 2> eval_vector_strain(const SpectralConfig& config, const CompositePair& pair,
                                         const StepLoading& loading, double t) {
  if (config.side != Side::Strain || pair.side != Side::Strain)
    throw std::invalid_argument("eval_vector_strain requires strain side");
  if (!config.poles.empty() && !config.is_rotated())
    throw std::invalid_argument("vector evaluation needs rotated residues");
  if (loading.kind != StepLoading::Kind::StressStep)
    throw std::invalid_argument("strain response requires a stress step");
  auto r = vector_response(config, pair, loading.amplitude, t);
  const double f = 1.0 / (2.0 * pair.phase2.modulus);
  return {f * r[0], f * r[1]};
}

}  // namespace vtb
