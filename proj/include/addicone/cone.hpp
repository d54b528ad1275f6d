#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/linalg_exact.hpp"
#include "addicone/simplex.hpp"

namespace addicone {

/// Halfspace representation { x : ineqs . x >= 0, eqs . x == 0 }.
struct ConeH {
  std::size_t dim = 0;
  std::vector<std::string> coords;
  RatMat ineqs;
  RatMat eqs;
};

/// Generator representation cone(rays) + span(lineality).
struct ConeV {
  std::size_t dim = 0;
  std::vector<std::string> coords;
  RatMat rays;
  RatMat lineality;
};

namespace detail {

inline std::vector<std::size_t> right_to_left(std::size_t dim) {
  std::vector<std::size_t> order(dim);
  for (std::size_t i = 0; i < dim; ++i) order[i] = dim - 1 - i;
  return order;
}

inline RatMat sorted_unique(RatMat rows) {
  std::sort(rows.begin(), rows.end(), lex_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

/// Canonical lineality/equality-space basis: reduced echelon rows,
/// sign-normalized, lex-sorted.
inline RatMat canonical_basis(const RatMat& gens, std::size_t dim,
                              const std::vector<std::size_t>& pivot_order) {
  if (gens.empty()) return {};
  Rref r = rref(gens, pivot_order);
  RatMat rows;
  rows.reserve(r.rank());
  for (const auto& row : r.rows) rows.push_back(sign_canonical(row));
  (void)dim;
  return sorted_unique(std::move(rows));
}

}  // namespace detail

/// Extreme-ray computation by the double description method with explicit
/// lineality handling and a rank-based adjacency test. Output rays are
/// primitive coset representatives modulo the lineality space, lex-sorted.
inline ConeV double_description(const ConeH& cone) {
  const std::size_t d = cone.dim;
  for (const auto& r : cone.ineqs)
    if (r.size() != d) throw std::invalid_argument("double_description: bad inequality width");
  for (const auto& r : cone.eqs)
    if (r.size() != d) throw std::invalid_argument("double_description: bad equality width");

  // Start from the solution space of the equalities: all lineality, no rays.
  RatMat lineality;
  if (cone.eqs.empty()) {
    for (std::size_t i = 0; i < d; ++i) {
      RatVec e(d, Rational(0));
      e[i] = Rational(1);
      lineality.push_back(std::move(e));
    }
  } else {
    lineality = nullspace(cone.eqs, d);
  }
  RatMat rays;

  // Deterministic processing order: primitive rows, deduplicated, lex-sorted.
  RatMat rows;
  for (const auto& r : cone.ineqs)
    if (!is_zero_vec(r)) rows.push_back(primitive(r));
  rows = detail::sorted_unique(std::move(rows));

  RatMat processed;
  auto reduce_all = [&](RatMat& vecs, const Rref& lin_rref) {
    RatMat out;
    std::set<RatVec, bool (*)(const RatVec&, const RatVec&)> seen(lex_less);
    for (auto& v : vecs) {
      RatVec w = primitive(reduce_mod(std::move(v), lin_rref));
      if (is_zero_vec(w)) continue;
      if (seen.insert(w).second) out.push_back(std::move(w));
    }
    vecs = std::move(out);
  };

  for (const auto& a : rows) {
    // Lineality-shrinking branch: some lineality direction crosses a.
    std::size_t hit = lineality.size();
    for (std::size_t i = 0; i < lineality.size(); ++i)
      if (!dot(a, lineality[i]).is_zero()) { hit = i; break; }
    if (hit != lineality.size()) {
      RatVec l0 = lineality[hit];
      if (dot(a, l0).sign() < 0)
        for (auto& x : l0) x = -x;
      const Rational al0 = dot(a, l0);
      RatMat new_lin;
      for (std::size_t i = 0; i < lineality.size(); ++i) {
        if (i == hit) continue;
        const Rational c = dot(a, lineality[i]) / al0;
        new_lin.push_back(axpy(std::move(lineality[i]), -c, l0));
      }
      for (auto& r : rays) {
        const Rational c = dot(a, r) / al0;
        r = axpy(std::move(r), -c, l0);
      }
      rays.push_back(std::move(l0));
      lineality = std::move(new_lin);
      Rref lr = rref(lineality);
      reduce_all(rays, lr);
      processed.push_back(a);
      continue;
    }

    // Ray-splitting branch.
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, zero, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i]);
      if (val[i].sign() > 0) pos.push_back(i);
      else if (val[i].sign() < 0) neg.push_back(i);
      else zero.push_back(i);
    }
    processed.push_back(a);
    if (neg.empty()) continue;

    const std::size_t target_rank = d - lineality.size();
    auto adjacent = [&](std::size_t p, std::size_t n) {
      RatMat active = cone.eqs;
      for (const auto& row : processed)
        if (dot(row, rays[p]).is_zero() && dot(row, rays[n]).is_zero()) active.push_back(row);
      return rank_of(active) + 2 == target_rank;
    };

    RatMat new_rays;
    for (std::size_t i : pos) new_rays.push_back(rays[i]);
    for (std::size_t i : zero) new_rays.push_back(rays[i]);
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        if (!adjacent(p, n)) continue;
        // val[p] * rays[n] - val[n] * rays[p]: a positive combination on a = 0.
        RatVec comb = axpy(scaled(rays[n], val[p]), -val[n], rays[p]);
        new_rays.push_back(primitive(comb));
      }
    rays = std::move(new_rays);
    Rref lr = rref(lineality);
    reduce_all(rays, lr);
  }

  ConeV out;
  out.dim = d;
  out.coords = cone.coords;
  out.lineality = detail::canonical_basis(lineality, d, {});
  Rref lr = rref(out.lineality);
  for (auto& r : rays) r = primitive(reduce_mod(std::move(r), lr));
  out.rays = detail::sorted_unique(std::move(rays));
  return out;
}

/// Minimal halfspace description by polarity: extreme rays of the polar cone
/// are the facets, its lineality is the equality space. Facet rows are
/// canonical coset representatives modulo the equalities with pivots chosen
/// right-to-left (keeping low-index coordinates in the printed form).
inline ConeH facet_enumeration(const ConeV& cone) {
  ConeH polar;
  polar.dim = cone.dim;
  polar.ineqs = cone.rays;
  polar.eqs = cone.lineality;
  ConeV pv = double_description(polar);

  ConeH out;
  out.dim = cone.dim;
  out.coords = cone.coords;
  out.eqs = detail::canonical_basis(pv.lineality, cone.dim, detail::right_to_left(cone.dim));
  Rref er = rref(out.eqs, detail::right_to_left(cone.dim));
  for (auto& f : pv.rays) f = primitive(reduce_mod(std::move(f), er));
  out.ineqs = detail::sorted_unique(std::move(pv.rays));
  return out;
}

/// Canonical minimal form of an H-cone: full double-description round trip.
/// Implicit equalities surface in `eqs`; redundant rows vanish.
inline ConeH canonical_form(const ConeH& cone) {
  ConeV v = double_description(cone);
  ConeH h = facet_enumeration(v);
  h.coords = cone.coords;
  return h;
}

inline bool cone_v_equal(const ConeV& a, const ConeV& b) {
  return a.dim == b.dim && a.rays == b.rays && a.lineality == b.lineality;
}

inline bool cones_equal(const ConeH& a, const ConeH& b) {
  return cone_v_equal(double_description(a), double_description(b));
}

inline bool cones_equal(const ConeH& a, const ConeV& b) {
  return cone_v_equal(double_description(a), double_description(facet_enumeration(b)));
}

inline bool cones_equal(const ConeV& a, const ConeH& b) { return cones_equal(b, a); }

inline bool cones_equal(const ConeV& a, const ConeV& b) {
  return cone_v_equal(double_description(facet_enumeration(a)),
                      double_description(facet_enumeration(b)));
}

/// Exact pointwise membership in an H-cone.
inline bool cone_contains(const ConeH& cone, const RatVec& x) {
  for (const auto& e : cone.eqs)
    if (!dot(e, x).is_zero()) return false;
  for (const auto& a : cone.ineqs)
    if (dot(a, x).sign() < 0) return false;
  return true;
}

/// Fourier-Motzkin projection onto the coordinates in `keep` (order
/// preserved). Equality pivots eliminate what they can; remaining dropped
/// coordinates are eliminated pairwise with LP-based redundancy pruning.
inline ConeH project_cone(const ConeH& cone, const std::vector<std::size_t>& keep) {
  const std::size_t d = cone.dim;
  std::vector<bool> keep_mask(d, false);
  for (std::size_t k : keep) {
    if (k >= d) throw std::out_of_range("project_cone: bad coordinate");
    keep_mask[k] = true;
  }

  RatMat ineqs, eqs;
  for (const auto& r : cone.ineqs)
    if (!is_zero_vec(r)) ineqs.push_back(primitive(r));
  for (const auto& r : cone.eqs)
    if (!is_zero_vec(r)) eqs.push_back(primitive(r));

  auto prune = [&]() {
    ineqs = detail::sorted_unique(std::move(ineqs));
    RatMat kept;
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
      std::vector<RatVec> others = kept;
      others.insert(others.end(), ineqs.begin() + static_cast<std::ptrdiff_t>(i) + 1, ineqs.end());
      Certificate c = dual_membership_with_lines(ineqs[i], others, eqs);
      if (!c.member) kept.push_back(ineqs[i]);
    }
    ineqs = std::move(kept);
  };

  for (std::size_t k = 0; k < d; ++k) {
    if (keep_mask[k]) continue;
    std::size_t piv = eqs.size();
    for (std::size_t i = 0; i < eqs.size(); ++i)
      if (!eqs[i][k].is_zero()) { piv = i; break; }
    if (piv != eqs.size()) {
      RatVec e = scaled(eqs[piv], Rational(1) / eqs[piv][k]);
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(piv));
      for (auto& r : ineqs)
        if (!r[k].is_zero()) r = primitive(axpy(std::move(r), -r[k], e));
      for (auto& r : eqs)
        if (!r[k].is_zero()) r = primitive(axpy(std::move(r), -r[k], e));
      continue;
    }
    RatMat kept_rows, pos, neg;
    for (auto& r : ineqs) {
      if (r[k].is_zero()) kept_rows.push_back(std::move(r));
      else if (r[k].sign() > 0) pos.push_back(std::move(r));
      else neg.push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        // p[k] * n - n[k] * p has zero k-th coordinate.
        RatVec comb = axpy(scaled(n, p[k]), -n[k], p);
        if (!is_zero_vec(comb)) kept_rows.push_back(primitive(comb));
      }
    ineqs = std::move(kept_rows);
    prune();
  }

  ConeH out;
  out.dim = keep.size();
  for (std::size_t k : keep)
    if (!cone.coords.empty()) out.coords.push_back(cone.coords[k]);
  auto restrict_row = [&](const RatVec& r) {
    RatVec o;
    o.reserve(keep.size());
    for (std::size_t k : keep) o.push_back(r[k]);
    return o;
  };
  for (const auto& r : ineqs) out.ineqs.push_back(restrict_row(r));
  for (const auto& r : eqs) out.eqs.push_back(restrict_row(r));
  return canonical_form(out);
}

}  // namespace addicone
