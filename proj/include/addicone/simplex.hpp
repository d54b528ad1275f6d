#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "addicone/linalg_exact.hpp"

namespace addicone {

/// Result of the conic-combination feasibility problem
///   find lambda >= 0 with sum_j lambda_j g_j = target.
/// When infeasible, `separator` is a Farkas vector w with w . g_j >= 0 for
/// every generator and w . target < 0.
struct Certificate {
  bool member = false;
  std::vector<Rational> multipliers;
  RatVec separator;
};

namespace detail {

/// Phase-1 simplex (Bland's rule, exact arithmetic) for A x = b, x >= 0,
/// where A's columns are the generators. Returns primal values or the
/// infeasibility dual.
struct Phase1 {
  bool feasible = false;
  std::vector<Rational> x;  // per original column
  RatVec dual;              // per row, see dual_membership for orientation
};

inline Phase1 phase1_feasible(const std::vector<RatVec>& cols, RatVec b) {
  const std::size_t m = b.size();
  const std::size_t n = cols.size();
  for (const auto& c : cols)
    if (c.size() != m) throw std::invalid_argument("phase1: column dimension mismatch");

  // Tableau over columns [originals | artificials | rhs], rows flipped so rhs >= 0.
  std::vector<bool> flipped(m, false);
  RatMat t(m, RatVec(n + m + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    const bool fl = b[i].sign() < 0;
    flipped[i] = fl;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = fl ? -cols[j][i] : cols[j][i];
    t[i][n + i] = Rational(1);
    t[i][n + m] = fl ? -b[i] : b[i];
  }
  std::vector<std::size_t> basis(m);
  std::vector<bool> in_basis(n + m, false);
  for (std::size_t i = 0; i < m; ++i) {
    basis[i] = n + i;
    in_basis[n + i] = true;
  }

  auto is_artificial = [&](std::size_t col) { return col >= n; };

  // Dantzig pricing at first, Bland's rule after a safety cap (anti-cycling).
  std::size_t iters = 0;
  const std::size_t bland_after = 4 * (n + m);
  while (true) {
    std::size_t enter = n + m;
    Rational best_red;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (in_basis[j]) continue;
      // Reduced cost for objective sum(artificials):
      // c_j - sum_{rows with artificial basic} t[row][j].
      Rational red = is_artificial(j) ? Rational(1) : Rational(0);
      for (std::size_t i = 0; i < m; ++i)
        if (is_artificial(basis[i])) red -= t[i][j];
      if (red.sign() < 0) {
        if (iters >= bland_after) { enter = j; break; }
        if (enter == n + m || red < best_red) {
          enter = j;
          best_red = red;
        }
      }
    }
    if (enter == n + m) break;
    ++iters;

    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter].sign() <= 0) continue;
      if (leave == m) { leave = i; continue; }
      const Rational cur = t[i][n + m] / t[i][enter];
      const Rational best = t[leave][n + m] / t[leave][enter];
      if (cur < best || (cur == best && basis[i] < basis[leave])) leave = i;
    }
    if (leave == m) throw std::runtime_error("phase1: unbounded phase-1 objective");

    const Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter].is_zero()) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    in_basis[basis[leave]] = false;
    in_basis[enter] = true;
    basis[leave] = enter;
  }

  Rational objective;
  for (std::size_t i = 0; i < m; ++i)
    if (is_artificial(basis[i])) objective += t[i][n + m];

  Phase1 out;
  if (objective.is_zero()) {
    out.feasible = true;
    out.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = t[i][n + m];
  } else {
    out.feasible = false;
    // y_i = sum over rows with artificial basic of t[row][n+i]; artificial
    // columns carry the running row-operation inverse.
    out.dual.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      Rational y;
      for (std::size_t k = 0; k < m; ++k)
        if (is_artificial(basis[k])) y += t[k][n + i];
      out.dual[i] = flipped[i] ? -y : y;
    }
  }
  return out;
}

}  // namespace detail

/// Decides target in cone(generators); exact. On success returns the conic
/// multipliers, otherwise a separating Farkas vector.
inline Certificate dual_membership(const RatVec& target, const std::vector<RatVec>& generators) {
  auto r = detail::phase1_feasible(generators, target);
  Certificate c;
  c.member = r.feasible;
  if (r.feasible) {
    c.multipliers = std::move(r.x);
  } else {
    // Phase-1 dual y has y.g_j <= 0 for all j and y.target > 0; flip it so
    // the separator satisfies the generators and refutes the target.
    c.separator.assign(r.dual.size(), Rational(0));
    for (std::size_t i = 0; i < r.dual.size(); ++i) c.separator[i] = -r.dual[i];
    c.separator = primitive(c.separator);
  }
  return c;
}

/// Membership in cone(generators) + span(lines): lines enter as +/- columns.
inline Certificate dual_membership_with_lines(const RatVec& target,
                                              const std::vector<RatVec>& generators,
                                              const std::vector<RatVec>& lines) {
  std::vector<RatVec> cols = generators;
  for (const auto& l : lines) {
    cols.push_back(l);
    RatVec neg = l;
    for (auto& v : neg) v = -v;
    cols.push_back(std::move(neg));
  }
  Certificate c = dual_membership(target, cols);
  if (c.member) c.multipliers.resize(generators.size() + 2 * lines.size());
  return c;
}

}  // namespace addicone
