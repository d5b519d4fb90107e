#include "vtb/phase.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vtb {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be strictly positive");
}

}  // namespace

PhaseModel PhaseModel::elastic(double shear_modulus) {
  check_positive(shear_modulus, "elastic modulus");
  return {Kind::Elastic, shear_modulus, 0.0};
}

PhaseModel PhaseModel::maxwell(double spring_modulus, double damper_viscosity) {
  check_positive(spring_modulus, "Maxwell modulus");
  check_positive(damper_viscosity, "Maxwell viscosity");
  return {Kind::Maxwell, spring_modulus, damper_viscosity};
}

PhaseModel PhaseModel::kelvin_voigt(double spring_modulus, double damper_viscosity) {
  check_positive(spring_modulus, "Kelvin-Voigt modulus");
  check_positive(damper_viscosity, "Kelvin-Voigt viscosity");
  return {Kind::KelvinVoigt, spring_modulus, damper_viscosity};
}

double PhaseModel::laplace_modulus(double lambda) const {
  if (!(lambda > 0.0)) throw std::domain_error("laplace_modulus requires lambda > 0");
  switch (kind) {
    case Kind::Elastic:
      return modulus;
    case Kind::Maxwell:
      // spring and damper in series: mu(lambda) = G_M eta_M lambda / (eta_M lambda + G_M)
      return modulus * viscosity * lambda / (viscosity * lambda + modulus);
    case Kind::KelvinVoigt:
      // spring and damper in parallel: mu(lambda) = G_K + eta_K lambda
      return modulus + viscosity * lambda;
  }
  throw std::logic_error("unreachable");
}

double PhaseModel::laplace_compliance(double lambda) const {
  return 1.0 / laplace_modulus(lambda);
}

double PhaseModel::instantaneous_modulus() const {
  switch (kind) {
    case Kind::Elastic: return modulus;
    case Kind::Maxwell: return modulus;
    case Kind::KelvinVoigt: return std::numeric_limits<double>::infinity();
  }
  throw std::logic_error("unreachable");
}

double PhaseModel::long_time_modulus() const {
  switch (kind) {
    case Kind::Elastic: return modulus;
    case Kind::Maxwell: return 0.0;
    case Kind::KelvinVoigt: return modulus;
  }
  throw std::logic_error("unreachable");
}

std::string PhaseModel::describe() const {
  switch (kind) {
    case Kind::Elastic: return "elastic(G=" + std::to_string(modulus) + ")";
    case Kind::Maxwell:
      return "maxwell(G_M=" + std::to_string(modulus) + ",eta_M=" + std::to_string(viscosity) + ")";
    case Kind::KelvinVoigt:
      return "kelvin_voigt(G_K=" + std::to_string(modulus) + ",eta_K=" + std::to_string(viscosity) + ")";
  }
  throw std::logic_error("unreachable");
}

double laplace_modulus(const PhaseModel& model, double lambda) {
  return model.laplace_modulus(lambda);
}

void CompositePair::validate() const {
  if (side == Side::Stress) {
    if (phase1.kind != PhaseModel::Kind::Maxwell || phase2.kind != PhaseModel::Kind::Elastic)
      throw std::invalid_argument(
          "stress-side kernels require phase 1 Maxwell and phase 2 elastic; got " +
          phase1.describe() + " / " + phase2.describe());
  } else {
    if (phase1.kind != PhaseModel::Kind::KelvinVoigt || phase2.kind != PhaseModel::Kind::Elastic)
      throw std::invalid_argument(
          "strain-side kernels require phase 1 Kelvin-Voigt and phase 2 elastic; got " +
          phase1.describe() + " / " + phase2.describe());
  }
}

double CompositePair::s_parameter(double lambda) const {
  if (side == Side::Stress) {
    const double m1 = phase1.laplace_modulus(lambda);
    const double m2 = phase2.laplace_modulus(lambda);
    if (m1 == m2) throw std::domain_error("degenerate contrast: mu1(lambda) == mu2(lambda)");
    return m2 / (m2 - m1);
  }
  const double z1 = phase1.laplace_compliance(lambda);
  const double z2 = phase2.laplace_compliance(lambda);
  if (z1 == z2) throw std::domain_error("degenerate contrast: zeta1(lambda) == zeta2(lambda)");
  return z2 / (z2 - z1);
}

bool CompositePair::well_ordered() const {
  const double d0 = phase1.instantaneous_modulus() - phase2.instantaneous_modulus();
  const double di = phase1.long_time_modulus() - phase2.long_time_modulus();
  return d0 * di > 0.0;
}

CompositePair default_stress_pair() {
  return {PhaseModel::maxwell(1.0, 5.0 / 3.0), PhaseModel::elastic(0.5), Side::Stress};
}

CompositePair default_strain_pair() {
  return {PhaseModel::kelvin_voigt(1.0, 5.0 / 3.0), PhaseModel::elastic(0.5), Side::Strain};
}

double stress_kernel(const CompositePair& pair, double s, double t) {
  if (pair.side != Side::Stress) throw std::invalid_argument("stress_kernel requires stress side");
  pair.validate();
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("pole must lie in [0,1)");
  if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
  const double g2 = pair.phase2.modulus;
  const double gm = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double r = g2 / gm;
  const double d = r - s * (r - 1.0);  // = r (1-s) + s, positive on [0,1)
  return (1.0 - std::exp(-g2 * (1.0 - s) * t / (eta * d)) / d) / (1.0 - s);
}

double strain_kernel(const CompositePair& pair, double u, double t) {
  if (pair.side != Side::Strain) throw std::invalid_argument("strain_kernel requires strain side");
  pair.validate();
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("pole must lie in [0,1)");
  if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
  const double g2 = pair.phase2.modulus;
  const double gk = pair.phase1.modulus;
  const double eta = pair.phase1.viscosity;
  const double den = gk - u * (gk - g2);
  const double expo = -(gk * (1.0 - u) + u * g2) * t / (eta * (1.0 - u));
  return (gk - g2 + g2 * std::exp(expo) / (1.0 - u)) / den;
}

double kernel(const CompositePair& pair, double pole, double t) {
  return pair.side == Side::Stress ? stress_kernel(pair, pole, t) : strain_kernel(pair, pole, t);
}

double kernel_at_infinity(const CompositePair& pair, double pole) {
  if (!(pole >= 0.0 && pole < 1.0)) throw std::domain_error("pole must lie in [0,1)");
  if (pair.side == Side::Stress) return 1.0 / (1.0 - pole);
  const double g2 = pair.phase2.modulus;
  const double gk = pair.phase1.modulus;
  return (gk - g2) / (gk - pole * (gk - g2));
}

double one_pole_response(const CompositePair& pair, double pole, double t) {
  return 1.0 - (1.0 - pole) * kernel(pair, pole, t);
}

double pure_phase1_response(const CompositePair& pair, double t) {
  return one_pole_response(pair, 0.0, t);
}

double pure_phase2_response(const CompositePair& pair, double t) {
  (void)pair;
  (void)t;
  return 1.0;
}

}  // namespace vtb
