#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "addicone/rational.hpp"

namespace addicone {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

inline Rational dot(const RatVec& a, const RatVec& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero_vec(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.is_zero(); });
}

inline RatVec scaled(RatVec v, const Rational& c) {
  for (auto& x : v) x *= c;
  return v;
}

inline RatVec vec_add(RatVec a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

/// a + c*b
inline RatVec axpy(RatVec a, const Rational& c, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
  return a;
}

/// Rescales to the unique parallel vector with coprime integer entries,
/// preserving orientation. Zero vectors pass through.
inline RatVec primitive(const RatVec& v) {
  mpz_class L = 1;
  for (const auto& x : v)
    if (!x.is_zero()) L = lcm(L, x.raw().get_den());
  mpz_class G = 0;
  for (const auto& x : v)
    if (!x.is_zero()) G = gcd(G, mpz_class(x.raw().get_num() * (L / x.raw().get_den())));
  if (G == 0) return v;
  RatVec out;
  out.reserve(v.size());
  const Rational f{mpq_class(L, G)};
  for (const auto& x : v) out.push_back(x * f);
  return out;
}

/// Primitive integer form with the first nonzero entry positive
/// (canonical representative of a line through the origin).
inline RatVec sign_canonical(const RatVec& v) {
  RatVec p = primitive(v);
  for (const auto& x : p) {
    if (x.sign() > 0) return p;
    if (x.sign() < 0) {
      for (auto& y : p) y = -y;
      return p;
    }
  }
  return p;
}

inline bool lex_less(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

/// Row-reduced echelon form. Pivot columns are chosen in the order given by
/// `col_order` (defaults to left-to-right); rows end up normalized with pivot 1
/// and pivot columns eliminated from all other rows.
struct Rref {
  RatMat rows;                     // rank rows, echelon w.r.t. pivot_cols
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return rows.size(); }
};

inline Rref rref(const RatMat& m, std::vector<std::size_t> col_order = {}) {
  Rref out;
  if (m.empty()) return out;
  const std::size_t ncol = m[0].size();
  if (col_order.empty()) {
    col_order.resize(ncol);
    std::iota(col_order.begin(), col_order.end(), std::size_t{0});
  }
  RatMat work;
  for (const auto& r : m)
    if (!is_zero_vec(r)) work.push_back(r);
  for (std::size_t col : col_order) {
    std::size_t sel = work.size();
    for (std::size_t i = 0; i < work.size(); ++i)
      if (!work[i][col].is_zero()) { sel = i; break; }
    if (sel == work.size()) continue;
    RatVec piv = scaled(work[sel], Rational(1) / work[sel][col]);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(sel));
    for (auto& r : work)
      if (!r[col].is_zero()) r = axpy(std::move(r), -r[col], piv);
    for (auto& r : out.rows)
      if (!r[col].is_zero()) r = axpy(std::move(r), -r[col], piv);
    out.rows.push_back(std::move(piv));
    out.pivot_cols.push_back(col);
    work.erase(std::remove_if(work.begin(), work.end(), is_zero_vec), work.end());
    if (work.empty()) break;
  }
  return out;
}

inline std::size_t rank_of(const RatMat& m) { return rref(m).rank(); }

/// Canonical coset representative of v modulo the row space of `basis`.
inline RatVec reduce_mod(RatVec v, const Rref& basis) {
  for (std::size_t i = 0; i < basis.rows.size(); ++i) {
    const std::size_t c = basis.pivot_cols[i];
    if (!v[c].is_zero()) v = axpy(std::move(v), -v[c], basis.rows[i]);
  }
  return v;
}

/// Basis of { x : M x = 0 }.
inline RatMat nullspace(const RatMat& m, std::size_t ncol) {
  Rref r = rref(m);
  std::vector<bool> is_pivot(ncol, false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  RatMat basis;
  for (std::size_t free = 0; free < ncol; ++free) {
    if (is_pivot[free]) continue;
    RatVec x(ncol, Rational(0));
    x[free] = Rational(1);
    for (std::size_t i = 0; i < r.rows.size(); ++i)
      x[r.pivot_cols[i]] = -r.rows[i][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace addicone
