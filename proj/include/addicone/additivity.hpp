#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "addicone/cone.hpp"
#include "addicone/context.hpp"
#include "addicone/decoupling.hpp"
#include "addicone/distribution.hpp"
#include "addicone/functional.hpp"
#include "addicone/inequalities.hpp"
#include "addicone/linalg_exact.hpp"
#include "addicone/simplex.hpp"
#include "addicone/witness.hpp"

namespace addicone {

/// One equality row per nonempty auxiliary subset t: the four coefficients
/// attached to t must sum to zero. Rows live in AlphaSpace(n_aux).
inline RatMat boundedness_constraints(int n_aux) {
  const AlphaSpace sp(n_aux);
  RatMat rows;
  for (Mask t = 1; t < (Mask{1} << n_aux); ++t) {
    RatVec row(sp.dim(), Rational(0));
    for (Mask s = 0; s < 4; ++s) row[sp.index(t, s)] = Rational(1);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RatVec embed_block_vector(const AlphaSpace& sp, Mask t, const RatVec& block) {
  RatVec full(sp.dim(), Rational(0));
  if (t == 0) {
    if (block.size() != 3) throw std::invalid_argument("embed_block_vector: want 3 coords");
    for (Mask s = 1; s < 4; ++s) full[sp.index(0, s)] = block[s - 1];
  } else {
    if (block.size() != 4) throw std::invalid_argument("embed_block_vector: want 4 coords");
    for (Mask s = 0; s < 4; ++s) full[sp.index(t, s)] = block[s];
  }
  return full;
}

inline RatVec extract_block_vector(const AlphaSpace& sp, Mask t, const RatVec& alpha) {
  if (alpha.size() != static_cast<std::size_t>(sp.dim()))
    throw std::invalid_argument("extract_block_vector: dimension mismatch");
  RatVec block;
  if (t == 0) {
    for (Mask s = 1; s < 4; ++s) block.push_back(alpha[sp.index(0, s)]);
  } else {
    for (Mask s = 0; s < 4; ++s) block.push_back(alpha[sp.index(t, s)]);
  }
  return block;
}

namespace detail {

inline RatVec block_template_vector(bool with_aux, Mask x, Mask y) {
  // Coordinates: with_aux -> (V, BV, EV, BEV) indexed by the subset of {B,E};
  // without  -> (B, E, BE); the empty subset contributes nothing there.
  const std::size_t dim = with_aux ? 4 : 3;
  RatVec v(dim, Rational(0));
  auto put = [&](Mask s, int c) {
    if (with_aux)
      v[s] += Rational(c);
    else if (s != 0)
      v[s - 1] += Rational(c);
  };
  put(x, 1);
  put(y, -1);
  return v;
}

inline std::string subset_label(Mask s) {
  std::string out;
  if (s & 1u) out += "B";
  if (s & 2u) out += "E";
  return out;
}

}  // namespace detail

/// Renders a block vector as an entropy expression when it matches one of the
/// difference templates H(xAux) - H(yAux); falls back to a coefficient list.
/// `aux` is the auxiliary label ("V", "V1V2", ...) or "" for the variable-free
/// block. Lineality directions are prefixed with a bidirectional sign.
inline std::string block_formula_name(const RatVec& v, const std::string& aux, bool bidirectional = false) {
  const bool with_aux = v.size() == 4;
  if (!with_aux && v.size() != 3)
    throw std::invalid_argument("block_formula_name: want 3 or 4 coordinates");
  const RatVec canon = primitive(v);
  std::string body;
  for (int sgn : {+1, -1}) {
    for (Mask x = 0; x < 4 && body.empty(); ++x) {
      for (Mask y = 0; y < 4 && body.empty(); ++y) {
        if (x == y) continue;
        RatVec cand = detail::block_template_vector(with_aux, x, y);
        if (sgn < 0)
          for (auto& c : cand) c = -c;
        if (is_zero_vec(cand) || primitive(cand) != canon) continue;
        const Mask xs = sgn > 0 ? x : y;
        const Mask ys = sgn > 0 ? y : x;
        std::string name;
        if ((ys & ~xs) == 0) {
          const std::string sub = detail::subset_label(xs & ~ys);
          const std::string cond = detail::subset_label(ys) + aux;
          name = cond.empty() ? "H(" + sub + ")" : "H(" + sub + "|" + cond + ")";
        } else {
          name = "[H(" + detail::subset_label(xs) + aux + ")-H(" + detail::subset_label(ys) + aux + ")]";
        }
        body = (sgn < 0 ? "-" : "") + name;
      }
    }
    if (!body.empty()) break;
  }
  if (body.empty()) {
    const std::vector<std::string> names =
        with_aux ? std::vector<std::string>{"a_V", "a_BV", "a_EV", "a_BEV"}
                 : std::vector<std::string>{"a_B", "a_E", "a_BE"};
    for (std::size_t i = 0; i < canon.size(); ++i) {
      if (canon[i].is_zero()) continue;
      const std::string mag = abs(canon[i]) == Rational(1) ? "" : abs(canon[i]).str() + " ";
      if (body.empty())
        body += (canon[i].sign() < 0 ? "-" : "") + mag + names[i];
      else
        body += (canon[i].sign() < 0 ? " - " : " + ") + mag + names[i];
    }
  }
  if (bidirectional) return "+/-" + body;
  return body;
}

/// An extreme direction of a block cone together with the exact conic
/// decomposition of its joint-state functional into basic-set instances.
struct CertifiedRay {
  RatVec vector;        // block coordinates
  std::string formula;  // entropy-expression rendering
  Certificate certificate;
  Certificate certificate_reverse;  // populated for lineality directions only
  bool bidirectional = false;
};

struct WitnessRecord {
  WitnessSpec spec;
  RatVec form;  // block coordinates of the induced outer inequality
  std::vector<std::size_t> tight_facets;
};

/// Additivity cone of a single auxiliary block: either the variable-free
/// block (code with zero slots) or one auxiliary subset treated as a single
/// register (code with one slot).
struct BlockCone {
  DecouplingCode code;  // zero or one slot
  ConeH hrep;           // canonical: irredundant facets + equality basis
  ConeV vrep;           // canonical: extreme rays + lineality basis
  std::vector<CertifiedRay> rays;
  std::vector<CertifiedRay> lineality;
  std::vector<WitnessRecord> witnesses;
  bool certified = true;  // every ray/lineality decomposition succeeded
};

namespace detail {

inline std::vector<std::string> block_coord_names(int arity) {
  if (arity == 0) return {"a_B", "a_E", "a_BE"};
  return {"a_V", "a_BV", "a_EV", "a_BEV"};
}

inline const std::vector<RatVec>& basic_generator_tails(int arity) {
  static std::map<int, std::vector<RatVec>> cache;
  auto it = cache.find(arity);
  if (it == cache.end()) {
    const SystemContext ctx = channel_pair_context(arity);
    std::vector<RatVec> tails;
    for (const auto& inst : quantum_basic_set(ctx)) tails.push_back(inst.f.coeffs_tail());
    it = cache.emplace(arity, std::move(tails)).first;
  }
  return it->second;
}

inline Certificate certify_block_direction(const DecouplingCode& code, const RatVec& block) {
  const int arity = code.n_aux();
  const AlphaSpace sp(arity);
  const RatVec alpha = arity == 0 ? block : embed_block_vector(sp, 1, block);
  const LinearEntropyFunctional delta = delta_functional(code, alpha);
  return dual_membership(delta.coeffs_tail(), basic_generator_tails(arity));
}

}  // namespace detail

/// Exact conic decomposition of the block direction's joint-state functional
/// over the basic inequality set; `certificate.member == false` means the
/// direction is not supported by the basic set alone.
inline Certificate certify_ray(const DecouplingCode& code, const RatVec& block_vector) {
  if (code.n_aux() > 1) throw std::invalid_argument("certify_ray: expected a block code");
  return detail::certify_block_direction(code, block_vector);
}

/// Outer bound on a block cone: one inequality per library witness plus the
/// boundedness equality (auxiliary blocks only). Canonical form.
inline ConeH witness_outer_cone(const DecouplingCode& code) {
  const int arity = code.n_aux();
  if (arity > 1) throw std::invalid_argument("witness_outer_cone: expected a block code");
  ConeH h;
  h.dim = arity == 0 ? 3 : 4;
  h.coords = detail::block_coord_names(arity);
  const AlphaSpace sp(arity);
  const std::vector<WitnessSpec> ws = witnesses_for(code);
  if (ws.empty()) throw std::runtime_error("witness_outer_cone: no witnesses for " + code.str());
  for (const auto& w : ws) {
    const RatVec full = witness_delta_form(w);
    h.ineqs.push_back(arity == 0 ? full : extract_block_vector(sp, 1, full));
  }
  if (arity == 1) h.eqs.push_back(RatVec(4, Rational(1)));
  return canonical_form(h);
}

/// Builds the block cone for a zero- or one-slot code: witness outer bound,
/// extreme rays, and a basic-set certificate for every extreme direction.
inline BlockCone build_block_cone(const DecouplingCode& code) {
  const int arity = code.n_aux();
  if (arity > 1) throw std::invalid_argument("build_block_cone: expected a block code");
  BlockCone b;
  b.code = code;
  b.hrep = witness_outer_cone(code);
  b.vrep = double_description(b.hrep);

  const std::string aux = arity == 0 ? "" : "V";
  for (const auto& r : b.vrep.rays) {
    CertifiedRay cr;
    cr.vector = r;
    cr.formula = block_formula_name(r, aux);
    cr.certificate = detail::certify_block_direction(code, r);
    if (!cr.certificate.member) b.certified = false;
    b.rays.push_back(std::move(cr));
  }
  for (const auto& l : b.vrep.lineality) {
    CertifiedRay cr;
    cr.vector = l;
    cr.formula = block_formula_name(l, aux, true);
    cr.bidirectional = true;
    cr.certificate = detail::certify_block_direction(code, l);
    RatVec neg = scaled(l, Rational(-1));
    cr.certificate_reverse = detail::certify_block_direction(code, neg);
    if (!cr.certificate.member || !cr.certificate_reverse.member) b.certified = false;
    b.lineality.push_back(std::move(cr));
  }

  // Tightness bookkeeping: a witness is tight on facet i when its form is a
  // positive multiple of the facet modulo the equality span.
  const Rref eqr = rref(b.hrep.eqs, detail::right_to_left(b.hrep.dim));
  const AlphaSpace sp(arity);
  for (const auto& w : witnesses_for(code)) {
    WitnessRecord rec;
    rec.spec = w;
    const RatVec full = witness_delta_form(w);
    rec.form = arity == 0 ? full : extract_block_vector(sp, 1, full);
    RatVec wred = reduce_mod(rec.form, eqr);
    if (!is_zero_vec(wred)) {
      const RatVec wcan = primitive(wred);
      for (std::size_t i = 0; i < b.hrep.ineqs.size(); ++i) {
        RatVec fred = reduce_mod(b.hrep.ineqs[i], eqr);
        if (!is_zero_vec(fred) && primitive(fred) == wcan) rec.tight_facets.push_back(i);
      }
    }
    b.witnesses.push_back(std::move(rec));
  }
  return b;
}

namespace detail {

inline const BlockCone& cached_block_cone(const DecouplingCode& code) {
  static std::map<DecouplingCode, BlockCone> cache;
  auto it = cache.find(code);
  if (it == cache.end()) it = cache.emplace(code, build_block_cone(code)).first;
  return it->second;
}

}  // namespace detail

/// Label of the block induced by auxiliary subset t: each side is the union
/// of the slot labels over t (consistency keeps those unions disjoint).
inline DecouplingCode induced_block_code(const DecouplingCode& code, Mask t) {
  if (t == 0) return DecouplingCode{};
  int a = 0, b = 0;
  for (int j = 0; j < code.n_aux(); ++j) {
    if (!(t >> j & 1u)) continue;
    a |= code.slots[static_cast<std::size_t>(j)].first;
    b |= code.slots[static_cast<std::size_t>(j)].second;
  }
  return one_var_code(a, b);
}

/// Full additivity cone of a decoupling code: the direct sum of its block
/// cones over all auxiliary subsets, living in AlphaSpace(n_aux).
struct AdditivityCone {
  DecouplingCode code;
  AlphaSpace space{0};
  ConeH hrep;  // canonical, full coordinates
  ConeV vrep;  // canonical, full coordinates
  std::vector<std::pair<Mask, BlockCone>> blocks;  // t ascending, t=0 first
  bool certified = true;
};

namespace detail {

inline void embed_rows(const AlphaSpace& sp, Mask t, const RatMat& rows, RatMat& out) {
  for (const auto& r : rows) out.push_back(embed_block_vector(sp, t, r));
}

}  // namespace detail

inline AdditivityCone assemble_additivity_cone(const DecouplingCode& code) {
  const int n = code.n_aux();
  AdditivityCone c;
  c.code = code;
  c.space = AlphaSpace(n);

  ConeH h;
  h.dim = c.space.dim();
  h.coords = c.space.coord_names();
  for (Mask t = 0; t < (Mask{1} << n); ++t) {
    const DecouplingCode block_code = induced_block_code(code, t);
    const BlockCone& b = detail::cached_block_cone(block_code);
    if (!b.certified) c.certified = false;
    detail::embed_rows(c.space, t, b.hrep.ineqs, h.ineqs);
    detail::embed_rows(c.space, t, b.hrep.eqs, h.eqs);
    c.blocks.emplace_back(t, b);
  }
  c.hrep = canonical_form(h);
  c.vrep = double_description(c.hrep);
  return c;
}

inline AdditivityCone zero_var_cone() { return assemble_additivity_cone(DecouplingCode{}); }

inline AdditivityCone one_var_cone(const DecouplingCode& code) {
  if (code.n_aux() != 1) throw std::invalid_argument("one_var_cone: expected one slot");
  return assemble_additivity_cone(code);
}

inline AdditivityCone multi_var_cone(const DecouplingCode& code) { return assemble_additivity_cone(code); }

inline bool cone_member(const AdditivityCone& cone, const RatVec& alpha) {
  return cone_contains(cone.hrep, alpha);
}

/// Exact refutation of a coefficient vector outside the cone: the violating
/// block's witness is lifted to the full code and re-evaluated symbolically.
struct Refutation {
  bool refuted = false;
  bool boundedness_violated = false;
  Mask block = 0;
  WitnessSpec witness;        // lifted to the full code
  Rational value;             // exact joint-state value, negative when refuted
  std::string block_formula;  // rendering of the violated block inequality
};

inline Refutation refute_outside(const AdditivityCone& cone, const RatVec& alpha) {
  Refutation out;
  for (const auto& row : boundedness_constraints(cone.code.n_aux()))
    if (!dot(row, alpha).is_zero()) {
      out.boundedness_violated = true;
      return out;
    }
  for (const auto& [t, block] : cone.blocks) {
    const RatVec at = extract_block_vector(cone.space, t, alpha);
    for (const auto& rec : block.witnesses) {
      const Rational v = dot(rec.form, at);
      if (v.sign() >= 0) continue;
      out.refuted = true;
      out.block = t;
      out.witness = lift_witness(rec.spec, cone.code, t);
      out.value = witness_delta_value(out.witness, alpha);
      out.block_formula = block_formula_name(rec.form, t == 0 ? "" : cone.space.aux_label(t));
      if (out.value != v)
        throw std::runtime_error("refute_outside: lifted witness value mismatch");
      return out;
    }
  }
  return out;
}

/// Classical coincidence evidence for a block: every extreme direction of the
/// block cone is decomposed over the classical elemental set. Together with
/// the witnesses (which are classical states) this pins the classical cone to
/// the same polyhedron.
struct CoincidenceReport {
  DecouplingCode code;
  bool coincide = true;
  std::vector<CertifiedRay> rays;
  std::vector<CertifiedRay> lineality;
};

namespace detail {

inline const std::vector<RatVec>& classical_generator_tails(int arity) {
  static std::map<int, std::vector<RatVec>> cache;
  auto it = cache.find(arity);
  if (it == cache.end()) {
    const SystemContext ctx = channel_pair_context(arity);
    std::vector<RatVec> tails;
    for (const auto& inst : classical_elemental_set(ctx)) tails.push_back(inst.f.coeffs_tail());
    it = cache.emplace(arity, std::move(tails)).first;
  }
  return it->second;
}

inline Certificate certify_block_direction_classical(const DecouplingCode& code, const RatVec& block) {
  const int arity = code.n_aux();
  const AlphaSpace sp(arity);
  const RatVec alpha = arity == 0 ? block : embed_block_vector(sp, 1, block);
  const LinearEntropyFunctional delta = delta_functional(code, alpha);
  return dual_membership(delta.coeffs_tail(), classical_generator_tails(arity));
}

}  // namespace detail

inline CoincidenceReport coincidence_check(const DecouplingCode& code) {
  if (code.n_aux() > 1) throw std::invalid_argument("coincidence_check: expected a block code");
  const BlockCone& b = detail::cached_block_cone(code);
  CoincidenceReport rep;
  rep.code = code;
  const std::string aux = code.n_aux() == 0 ? "" : "V";
  for (const auto& r : b.vrep.rays) {
    CertifiedRay cr;
    cr.vector = r;
    cr.formula = block_formula_name(r, aux);
    cr.certificate = detail::certify_block_direction_classical(code, r);
    if (!cr.certificate.member) rep.coincide = false;
    rep.rays.push_back(std::move(cr));
  }
  for (const auto& l : b.vrep.lineality) {
    CertifiedRay cr;
    cr.vector = l;
    cr.formula = block_formula_name(l, aux, true);
    cr.bidirectional = true;
    cr.certificate = detail::certify_block_direction_classical(code, l);
    cr.certificate_reverse =
        detail::certify_block_direction_classical(code, scaled(l, Rational(-1)));
    if (!cr.certificate.member || !cr.certificate_reverse.member) rep.coincide = false;
    rep.lineality.push_back(std::move(cr));
  }
  return rep;
}

/// Pads the four channel outputs of a distribution with shared uniform noise
/// registers and rebuilds the auxiliary variables so that, on the boundedness
/// subspace, only the block selected by `t_set` contributes. Variables must
/// be ordered B1,E1,B2,E2[,V]; the result is ordered for `code.n_aux()`
/// auxiliaries. Generic-alphabet counterpart of the witness lift.
inline ClassicalDistribution distribution_transform(const ClassicalDistribution& p,
                                                    const DecouplingCode& code, Mask t_set) {
  const int n = code.n_aux();
  const bool has_host = t_set != 0;
  const std::size_t want_vars = has_host ? 5 : 4;
  if (p.names.size() != want_vars)
    throw std::invalid_argument("distribution_transform: variable count mismatch");
  if (t_set >= (Mask{1} << n)) throw std::invalid_argument("distribution_transform: bad subset");
  const int host = has_host ? __builtin_ctz(t_set) : -1;

  const std::array<int, 4> out_dim = {p.alphabet[0], p.alphabet[1], p.alphabet[2], p.alphabet[3]};
  const std::size_t pad_block = static_cast<std::size_t>(out_dim[0]) *
                                static_cast<std::size_t>(out_dim[1]) *
                                static_cast<std::size_t>(out_dim[2]) *
                                static_cast<std::size_t>(out_dim[3]);
  const int host_dim = has_host ? p.alphabet[4] : 1;

  std::vector<std::string> names = {"B1", "E1", "B2", "E2"};
  std::vector<int> alphabet = {out_dim[0], out_dim[1], out_dim[2], out_dim[3]};
  std::size_t n_pads = 0;
  for (int j = 0; j < n; ++j) {
    names.push_back("V" + std::to_string(j + 1));
    if (t_set >> j & 1u) {
      ++n_pads;
      alphabet.push_back(static_cast<int>((j == host ? host_dim : 1) * pad_block));
    } else {
      alphabet.push_back(static_cast<int>(pad_block));
    }
  }

  double total = 1.0;
  for (int a : alphabet) {
    total *= static_cast<double>(a);
    if (total > static_cast<double>(1u << 24))
      throw std::invalid_argument("distribution_transform: table too large");
  }

  ClassicalDistribution q(names, alphabet);
  double w = 1.0;
  for (std::size_t i = 0; i < n_pads; ++i) w /= static_cast<double>(pad_block);

  std::vector<std::size_t> pad(n_pads, 0);
  std::vector<int> dst(names.size(), 0);
  for (std::size_t idx = 0; idx < p.p.size(); ++idx) {
    if (p.p[idx] == 0.0) continue;
    const std::vector<int> src = p.outcome_of_index(idx);
    const std::size_t copy_code =
        ((static_cast<std::size_t>(src[0]) * static_cast<std::size_t>(out_dim[1]) +
          static_cast<std::size_t>(src[1])) *
             static_cast<std::size_t>(out_dim[2]) +
         static_cast<std::size_t>(src[2])) *
            static_cast<std::size_t>(out_dim[3]) +
        static_cast<std::size_t>(src[3]);
    std::fill(pad.begin(), pad.end(), 0);
    while (true) {
      std::array<int, 4> shifted = {src[0], src[1], src[2], src[3]};
      for (std::size_t k = 0; k < n_pads; ++k) {
        std::size_t r = pad[k];
        for (int s = 3; s >= 0; --s) {
          const int digit = static_cast<int>(r % static_cast<std::size_t>(out_dim[s]));
          r /= static_cast<std::size_t>(out_dim[s]);
          shifted[static_cast<std::size_t>(s)] = (shifted[static_cast<std::size_t>(s)] + digit) % out_dim[s];
        }
      }
      for (std::size_t s = 0; s < 4; ++s) dst[s] = shifted[s];
      std::size_t pk = 0;
      for (int j = 0; j < n; ++j) {
        int& cell = dst[static_cast<std::size_t>(4 + j)];
        if (t_set >> j & 1u) {
          cell = static_cast<int>(pad[pk]);
          if (j == host) cell = static_cast<int>(static_cast<std::size_t>(src[4]) * pad_block + pad[pk]);
          ++pk;
        } else {
          cell = static_cast<int>(copy_code);
        }
      }
      q.p[q.index_of_outcome(dst)] += p.p[idx] * w;

      // odometer over pad tuples
      std::size_t k = 0;
      while (k < n_pads) {
        if (++pad[k] < pad_block) break;
        pad[k] = 0;
        ++k;
      }
      if (k == n_pads) break;
    }
  }
  return q;
}

}  // namespace addicone
