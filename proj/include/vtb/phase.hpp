#pragma once

#include <array>
#include <string>

namespace vtb {

// Which response is being bounded: stress under a step strain (relaxation
// test) or strain under a step stress (creep test).
enum class Side { Stress, Strain };

/// A viscoelastic constituent with a closed-form Laplace-domain shear
/// modulus/compliance. Only the three models needed here are supported.
struct PhaseModel {
  enum class Kind { Elastic, Maxwell, KelvinVoigt };

  Kind kind = Kind::Elastic;
  double modulus = 1.0;    // G (elastic), G_M (Maxwell) or G_K (Kelvin-Voigt)
  double viscosity = 0.0;  // eta_M or eta_K; unused for Elastic

  static PhaseModel elastic(double shear_modulus);
  static PhaseModel maxwell(double spring_modulus, double damper_viscosity);
  static PhaseModel kelvin_voigt(double spring_modulus, double damper_viscosity);

  /// Laplace-transformed shear modulus mu(lambda), lambda > 0.
  double laplace_modulus(double lambda) const;

  /// Laplace-transformed shear compliance zeta(lambda) = 1/mu(lambda).
  double laplace_compliance(double lambda) const;

  double instantaneous_modulus() const;  // lambda -> infinity limit
  double long_time_modulus() const;      // lambda -> 0+ limit

  std::string describe() const;
};

/// Free-function form of PhaseModel::laplace_modulus.
double laplace_modulus(const PhaseModel& model, double lambda);

/// The two constituents of the composite plus the side of the problem.
/// Phase 2 must be elastic for the closed-form kernels below.
struct CompositePair {
  PhaseModel phase1;
  PhaseModel phase2;
  Side side = Side::Stress;

  /// Throws std::invalid_argument when the model pair has no closed-form
  /// kernel on the configured side (Maxwell/elastic for stress,
  /// Kelvin-Voigt/elastic for strain).
  void validate() const;

  /// The spectral variable s(lambda) = mu2/(mu2-mu1) on the stress side,
  /// u(lambda) = zeta2/(zeta2-zeta1) on the strain side.
  /// Throws std::domain_error when the phases have equal moduli at lambda.
  double s_parameter(double lambda) const;

  /// Sign of (mu1(0+)-mu2(0+)) * (mu1(inf)-mu2(inf)) is positive.
  bool well_ordered() const;
};

/// Default example pair used throughout: Maxwell(G_M=1, eta_M=5/3) against
/// Elastic(G_2=1/2), back-derived from the printed crossover times.
CompositePair default_stress_pair();
CompositePair default_strain_pair();

/// K(s,t): coefficient of a unit 11-residue in the normalized step-strain
/// stress response, sigma12(t) = G2 eps0 (1 - sum_i K(s_i,t) B11_i).
/// Requires pair = (Maxwell, Elastic) on the stress side, 0 <= s < 1, t >= 0.
double stress_kernel(const CompositePair& pair, double s, double t);

/// L(u,t): the strain-side analogue, eps12(t) = sigma0/(2 G2) *
/// (1 - sum_i L(u_i,t) P11_i). Requires (Kelvin-Voigt, Elastic), strain side.
double strain_kernel(const CompositePair& pair, double u, double t);

/// Side-dispatching kernel: stress_kernel or strain_kernel.
double kernel(const CompositePair& pair, double pole, double t);

/// t -> infinity limit of the kernel: 1/(1-s) on the stress side,
/// (G_K - G2)/(G_K - u (G_K - G2)) on the strain side.
double kernel_at_infinity(const CompositePair& pair, double pole);

/// Normalized response of the one-pole configuration with residue (1-pole):
/// the simple-laminate response. Stress side: sigma12/(G2 eps0); strain
/// side: eps12/(sigma0/(2 G2)).
double one_pole_response(const CompositePair& pair, double pole, double t);

/// Normalized pure-phase responses (phase 1: pole at 0 with residue 1;
/// phase 2: empty configuration).
double pure_phase1_response(const CompositePair& pair, double t);
double pure_phase2_response(const CompositePair& pair, double t);

}  // namespace vtb
