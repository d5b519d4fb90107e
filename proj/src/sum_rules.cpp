#include "vtb/sum_rules.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vtb {

void InfoSet::validate() const {
  if (volume_fraction) {
    const double f1 = *volume_fraction;
    if (!(f1 > 0.0 && f1 < 1.0)) throw std::invalid_argument("volume fraction must lie in (0,1)");
  }
  if (transverse_isotropy && !volume_fraction)
    throw std::invalid_argument("transverse isotropy requires a known volume fraction");
  for (std::size_t i = 0; i < known_values.size(); ++i) {
    const auto& kv = known_values[i];
    if (!kv.at_infinity && !(kv.time >= 0.0))
      throw std::invalid_argument("known-value time must be nonnegative");
    if (!std::isfinite(kv.value)) throw std::invalid_argument("known value must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& other = known_values[j];
      if (kv.at_infinity == other.at_infinity && (kv.at_infinity || kv.time == other.time))
        throw std::invalid_argument("known-value times must be distinct");
    }
  }
  if (symmetry == SymmetryClass::NonReflective && !(fictitious_delta > 0.0 && fictitious_delta < 1.0))
    throw std::invalid_argument("fictitious delta must lie in (0,1)");
  if (known_value_tolerance < 0.0)
    throw std::invalid_argument("known-value tolerance must be nonnegative");
}

LinearProgramSpec build_scalar_constraints(const InfoSet& info, const std::vector<double>& poles,
                                           const CompositePair& pair) {
  info.validate();
  const std::size_t n = poles.size();
  for (double s : poles)
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("poles must lie in [0,1)");

  LinearProgramSpec spec;
  spec.num_vars = n;
  spec.objective.assign(n, 0.0);

  LinearConstraint sum_rule;
  sum_rule.coeff.resize(n);
  for (std::size_t i = 0; i < n; ++i) sum_rule.coeff[i] = 1.0 / (1.0 - poles[i]);
  sum_rule.rhs = 1.0;
  spec.ineq_constraints.push_back(sum_rule);

  if (info.volume_fraction) {
    const double f1 = *info.volume_fraction;
    spec.eq_constraints.push_back({std::vector<double>(n, 1.0), f1});
    if (info.transverse_isotropy) {
      LinearConstraint trace;
      trace.coeff = poles;
      trace.rhs = f1 * (1.0 - f1) / 2.0;
      spec.eq_constraints.push_back(trace);
    }
  }

  for (const auto& kv : info.known_values) {
    LinearConstraint c;
    c.coeff.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      c.coeff[i] = kv.at_infinity ? kernel_at_infinity(pair, poles[i])
                                  : kernel(pair, poles[i], kv.time);
    c.rhs = 1.0 - kv.value;
    if (info.known_value_tolerance == 0.0) {
      spec.eq_constraints.push_back(c);
    } else {
      LinearConstraint upper = c, lower = c;
      upper.rhs += info.known_value_tolerance;
      for (double& v : lower.coeff) v = -v;
      lower.rhs = -(c.rhs - info.known_value_tolerance);
      spec.ineq_constraints.push_back(upper);
      spec.ineq_constraints.push_back(lower);
    }
  }
  return spec;
}

LinearProgramSpec build_reflective_constraints(const InfoSet& info, const std::vector<double>& poles,
                                               BTrackRule rule) {
  info.validate();
  if (info.symmetry != SymmetryClass::Reflective)
    throw std::invalid_argument("reflective constraint builder requires reflective symmetry");
  if (!info.known_values.empty())
    throw std::invalid_argument("known values are supported only for scalar constraints");
  const std::size_t n = poles.size();
  for (double s : poles)
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("poles must lie in [0,1)");

  LinearProgramSpec spec;
  spec.num_vars = 2 * n;
  spec.objective.assign(2 * n, 0.0);

  LinearConstraint track_a, track_b;
  track_a.coeff.assign(2 * n, 0.0);
  track_b.coeff.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / (1.0 - poles[i]);
    track_a.coeff[2 * i] = w;
    track_b.coeff[2 * i + 1] = w;
  }
  track_a.rhs = track_b.rhs = 1.0;
  spec.ineq_constraints.push_back(track_a);
  spec.ineq_constraints.push_back(track_b);

  if (info.volume_fraction) {
    const double f1 = *info.volume_fraction;
    const double f2 = 1.0 - f1;
    LinearConstraint sum_a, sum_b, trace;
    sum_a.coeff.assign(2 * n, 0.0);
    sum_b.coeff.assign(2 * n, 0.0);
    trace.coeff.assign(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sum_a.coeff[2 * i] = 1.0;
      sum_b.coeff[2 * i + 1] = 1.0;
      trace.coeff[2 * i] = trace.coeff[2 * i + 1] = poles[i];
    }
    sum_a.rhs = f1;
    sum_b.rhs = (rule == BTrackRule::TraceConsistent) ? f1 : f1 * f2;
    trace.rhs = f1 * f2;
    spec.eq_constraints.push_back(sum_a);
    spec.eq_constraints.push_back(sum_b);
    spec.eq_constraints.push_back(trace);
  }
  return spec;
}

std::vector<double> NonReflectiveDiscretization::poles() const {
  if (m < 1 || k < 1) throw std::invalid_argument("discretization sizes must be positive");
  std::vector<double> p(m + 2);
  for (int i = 0; i <= m; ++i) p[i] = static_cast<double>(i) / (m + 1);
  p[m + 1] = 1.0 - delta;
  if (!(delta > 0.0 && p[m + 1] > p[m]))
    throw std::invalid_argument("delta must lie in (0, 1 - s_m)");
  return p;
}

std::vector<double> NonReflectiveDiscretization::angles() const {
  std::vector<double> a(m + 2, 0.0);
  for (int i = 0; i <= m; ++i) a[i] = 2.0 * std::numbers::pi * (i % k) / k;
  return a;
}

LinearProgramSpec build_nonreflective_constraints(const InfoSet& info,
                                                  const NonReflectiveDiscretization& disc,
                                                  const CompositePair& pair) {
  (void)pair;
  info.validate();
  if (info.symmetry != SymmetryClass::NonReflective)
    throw std::invalid_argument("builder requires non-reflective symmetry");
  if (!info.known_values.empty())
    throw std::invalid_argument("known values are supported only for scalar constraints");
  const auto poles = disc.poles();
  const auto angles = disc.angles();
  const std::size_t n = poles.size();

  LinearProgramSpec spec;
  spec.num_vars = 2 * n;
  spec.objective.assign(2 * n, 0.0);

  // components of sum_i B_i/(1-s_i) = I, fictitious pole included
  LinearConstraint c11, c22, c12;
  c11.coeff.assign(2 * n, 0.0);
  c22.coeff.assign(2 * n, 0.0);
  c12.coeff.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / (1.0 - poles[i]);
    const double c = std::cos(angles[i]);
    const double s = std::sin(angles[i]);
    c11.coeff[2 * i] = w * c * c;
    c11.coeff[2 * i + 1] = w * s * s;
    c22.coeff[2 * i] = w * s * s;
    c22.coeff[2 * i + 1] = w * c * c;
    c12.coeff[2 * i] = -w * s * c;
    c12.coeff[2 * i + 1] = w * s * c;
  }
  c11.rhs = c22.rhs = 1.0;
  c12.rhs = 0.0;
  spec.eq_constraints.push_back(c11);
  spec.eq_constraints.push_back(c22);
  spec.eq_constraints.push_back(c12);

  if (info.volume_fraction) {
    const double f1 = *info.volume_fraction;
    const double f2 = 1.0 - f1;
    // components of sum B_i = f1 I and the trace rule, fictitious pole excluded
    LinearConstraint v11, v22, v12, trace;
    v11.coeff.assign(2 * n, 0.0);
    v22.coeff.assign(2 * n, 0.0);
    v12.coeff.assign(2 * n, 0.0);
    trace.coeff.assign(2 * n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double c = std::cos(angles[i]);
      const double s = std::sin(angles[i]);
      v11.coeff[2 * i] = c * c;
      v11.coeff[2 * i + 1] = s * s;
      v22.coeff[2 * i] = s * s;
      v22.coeff[2 * i + 1] = c * c;
      v12.coeff[2 * i] = -s * c;
      v12.coeff[2 * i + 1] = s * c;
      trace.coeff[2 * i] = trace.coeff[2 * i + 1] = poles[i];
    }
    v11.rhs = v22.rhs = f1;
    v12.rhs = 0.0;
    trace.rhs = f1 * f2;
    spec.eq_constraints.push_back(v11);
    spec.eq_constraints.push_back(v22);
    spec.eq_constraints.push_back(v12);
    spec.eq_constraints.push_back(trace);
  }
  return spec;
}

}  // namespace vtb
