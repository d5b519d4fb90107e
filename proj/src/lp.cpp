#include "vtb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vtb {

namespace {

constexpr double kPivotTol = 1e-11;

// Dense simplex tableau over columns [structural | slack | artificial].
struct Tableau {
  std::size_t rows, cols;           // cols excludes the rhs column
  std::vector<double> a;            // row-major, rows x (cols+1); last col = rhs
  std::vector<int> basis;           // basis[r] = column basic in row r

  double& at(std::size_t r, std::size_t c) { return a[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * (cols + 1) + c]; }
  double& rhs(std::size_t r) { return a[r * (cols + 1) + cols]; }
  double rhs(std::size_t r) const { return a[r * (cols + 1) + cols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
    }
    basis[pr] = static_cast<int>(pc);
  }
};

// Minimizes cost over the tableau with Bland's rule. allowed[c] marks
// columns eligible to enter. Returns false on unboundedness.
bool run_simplex(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
  std::vector<double> red(t.cols);  // reduced costs
  for (;;) {
    // reduced cost: c_j - cB . B^{-1} A_j, computed from the tableau
    for (std::size_t c = 0; c < t.cols; ++c) {
      double v = cost[c];
      for (std::size_t r = 0; r < t.rows; ++r) v -= cost[t.basis[r]] * t.at(r, c);
      red[c] = v;
    }
    std::size_t enter = t.cols;
    for (std::size_t c = 0; c < t.cols; ++c) {
      if (allowed[c] && red[c] < -kPivotTol) { enter = c; break; }  // Bland: smallest index
    }
    if (enter == t.cols) return true;  // optimal
    std::size_t leave = t.rows;
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
      const double col = t.at(r, enter);
      if (col > kPivotTol) {
        const double ratio = t.rhs(r) / col;
        if (leave == t.rows || ratio < best - kPivotTol ||
            (ratio < best + kPivotTol && t.basis[r] < t.basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave == t.rows) return false;  // unbounded
    t.pivot(leave, enter);
  }
}

}  // namespace

void LinearProgramSpec::check_shapes() const {
  if (objective.size() != num_vars)
    throw std::invalid_argument("objective length does not match num_vars");
  for (const auto& c : eq_constraints)
    if (c.coeff.size() != num_vars || !std::isfinite(c.rhs))
      throw std::invalid_argument("malformed equality constraint");
  for (const auto& c : ineq_constraints)
    if (c.coeff.size() != num_vars || !std::isfinite(c.rhs))
      throw std::invalid_argument("malformed inequality constraint");
}

LpSolution simplex_solve(const LinearProgramSpec& spec, LpSense sense) {
  spec.check_shapes();
  const std::size_t n = spec.num_vars;
  const std::size_t p = spec.ineq_constraints.size();
  const std::size_t m = spec.eq_constraints.size() + p;

  LpSolution sol;
  if (m == 0) {
    // only nonnegativity: optimum at x = 0 unless improving direction exists
    sol.point.assign(n, 0.0);
    const double sign = (sense == LpSense::Min) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (sign * spec.objective[j] < -kPivotTol) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
    sol.status = LpStatus::Optimal;
    sol.value = spec.objective_offset;
    return sol;
  }

  Tableau t;
  t.rows = m;
  t.cols = n + p + m;  // structural, slack, artificial
  t.a.assign(m * (t.cols + 1), 0.0);
  t.basis.assign(m, -1);

  std::size_t r = 0;
  for (const auto& c : spec.eq_constraints) {
    const double sgn = (c.rhs < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sgn * c.coeff[j];
    t.rhs(r) = sgn * c.rhs;
    ++r;
  }
  for (std::size_t i = 0; i < p; ++i, ++r) {
    const auto& c = spec.ineq_constraints[i];
    const double sgn = (c.rhs < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sgn * c.coeff[j];
    t.at(r, n + i) = sgn;  // slack
    t.rhs(r) = sgn * c.rhs;
  }
  for (std::size_t i = 0; i < m; ++i) {
    t.at(i, n + p + i) = 1.0;
    t.basis[i] = static_cast<int>(n + p + i);
  }

  // phase 1: minimize the sum of artificials
  std::vector<double> cost1(t.cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) cost1[n + p + i] = 1.0;
  std::vector<bool> allowed(t.cols, true);
  if (!run_simplex(t, cost1, allowed)) throw std::logic_error("phase-1 simplex unbounded");

  double art_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] >= static_cast<int>(n + p)) art_sum += t.rhs(i);
  if (art_sum > 1e-8) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  // drive any degenerate artificials out of the basis
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < static_cast<int>(n + p)) continue;
    std::size_t pc = t.cols;
    for (std::size_t c = 0; c < n + p; ++c)
      if (std::abs(t.at(i, c)) > kPivotTol) { pc = c; break; }
    if (pc < t.cols) t.pivot(i, pc);
    // otherwise the row is redundant; leave the zero artificial in place
  }

  // phase 2
  const double sign = (sense == LpSense::Min) ? 1.0 : -1.0;
  std::vector<double> cost2(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost2[j] = sign * spec.objective[j];
  for (std::size_t c = n + p; c < t.cols; ++c) allowed[c] = false;
  if (!run_simplex(t, cost2, allowed)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.point.assign(n, 0.0);
  std::vector<double> slack(p, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const int b = t.basis[i];
    if (b < static_cast<int>(n)) sol.point[b] = t.rhs(i);
    else if (b < static_cast<int>(n + p)) slack[b - n] = t.rhs(i);
  }
  double value = spec.objective_offset;
  for (std::size_t j = 0; j < n; ++j) value += spec.objective[j] * sol.point[j];
  sol.value = value;
  for (std::size_t i = 0; i < p; ++i)
    if (std::abs(slack[i]) <= 1e-9) sol.active_set.push_back(static_cast<int>(i));
  sol.status = LpStatus::Optimal;
  return sol;
}

double residues_no_info(double s0) {
  if (!(s0 >= 0.0 && s0 < 1.0)) throw std::domain_error("pole must lie in [0,1)");
  return 1.0 - s0;
}

std::array<double, 2> residues_vf_two_pole(double s0, double s1, double f1) {
  const double f2 = 1.0 - f1;
  if (!(f1 > 0.0 && f1 < 1.0)) throw std::domain_error("f1 must lie in (0,1)");
  if (!(s0 >= 0.0 && s0 <= f2 && s1 >= f2 && s1 < 1.0 && s0 < s1))
    throw std::domain_error("require s0 in [0,f2], s1 in [f2,1), s0 < s1");
  const double b0 = (1.0 - s0) * (s1 - f2) / (s1 - s0);
  const double b1 = (1.0 - s1) * (f2 - s0) / (s1 - s0);
  return {b0, b1};
}

double residues_vf_one_pole(double s0, double f1) {
  const double f2 = 1.0 - f1;
  if (!(s0 >= 0.0 && s0 <= f2)) throw std::domain_error("one-pole vf case requires s0 <= f2");
  return f1;
}

std::optional<std::array<double, 2>> residues_iso_two_pole(double s0, double s1, double f1) {
  const double f2 = 1.0 - f1;
  if (!(s1 > s0)) return std::nullopt;
  const double b0 = f1 * (s1 - f2 / 2.0) / (s1 - s0);
  const double b1 = f1 * (f2 / 2.0 - s0) / (s1 - s0);
  if (b0 < 0.0 || b1 < 0.0) return std::nullopt;
  return std::array<double, 2>{b0, b1};
}

std::optional<std::array<double, 3>> residues_iso_three_pole(double s0, double s1, double s2,
                                                             double f1) {
  if (!(s0 >= 0.0 && s0 < s1 + 1e-12 && s1 < s2 + 1e-12 && s2 < 1.0))
    throw std::domain_error("require 0 <= s0 <= s1 <= s2 < 1");
  constexpr double kCoincident = 1e-12;
  if (s1 - s0 < kCoincident || s2 - s1 < kCoincident) {
    // collapsed pair: reduce to the two-pole isotropy solution
    const double lo = s0;
    const double hi = (s2 - s1 < kCoincident) ? s1 : s2;
    if (hi - lo < kCoincident) return std::nullopt;
    auto two = residues_iso_two_pole(lo, hi, f1);
    if (!two) return std::nullopt;
    if ((*two)[0] / (1.0 - lo) + (*two)[1] / (1.0 - hi) > 1.0 + 1e-12) return std::nullopt;
    if (s1 - s0 < kCoincident) return std::array<double, 3>{(*two)[0], 0.0, (*two)[1]};
    return std::array<double, 3>{(*two)[0], (*two)[1], 0.0};
  }
  // solve sum B = f1, sum B s = f1 f2/2, sum B/(1-s) = 1 by elimination
  const double f2 = 1.0 - f1;
  double A[3][4] = {{1.0, 1.0, 1.0, f1},
                    {s0, s1, s2, f1 * f2 / 2.0},
                    {1.0 / (1.0 - s0), 1.0 / (1.0 - s1), 1.0 / (1.0 - s2), 1.0}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-14) return std::nullopt;
    std::swap(A[piv], A[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::array<double, 3> b{A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2]};
  for (double v : b)
    if (v < 0.0) return std::nullopt;
  return b;
}

}  // namespace vtb
