#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/context.hpp"
#include "addicone/functional.hpp"

namespace addicone {

/// Auxiliary-register dressing of a channel pair. Slot i carries labels
/// (a_i, b_i) in 0..3 selecting subsets of the first channel's outputs
/// {B1, E1} and the second channel's outputs {B2, E2} respectively
/// (0 = none, 1 = B part, 2 = E part, 3 = both).
struct DecouplingCode {
  std::vector<std::pair<int, int>> slots;

  int n_aux() const { return static_cast<int>(slots.size()); }

  bool operator==(const DecouplingCode& o) const { return slots == o.slots; }
  bool operator<(const DecouplingCode& o) const { return slots < o.slots; }

  /// Standard codes assign each of B1, E1, B2, E2 to at most one slot.
  bool consistent() const {
    for (int bit = 1; bit <= 2; ++bit) {
      int na = 0, nb = 0;
      for (const auto& [a, b] : slots) {
        if (a & bit) ++na;
        if (b & bit) ++nb;
      }
      if (na > 1 || nb > 1) return false;
    }
    return true;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (i) s += ";";
      s += std::to_string(slots[i].first) + "," + std::to_string(slots[i].second);
    }
    return s + ")";
  }
};

inline DecouplingCode one_var_code(int a, int b) {
  DecouplingCode c;
  c.slots = {{a, b}};
  return c;
}

/// All consistent codes on n slots; there are (n+1)^4 of them.
inline std::vector<DecouplingCode> enumerate_standard(int n_aux) {
  if (n_aux < 0 || n_aux > 8) throw std::invalid_argument("enumerate_standard: bad n_aux");
  std::vector<DecouplingCode> out;
  DecouplingCode cur;
  cur.slots.assign(static_cast<std::size_t>(n_aux), {0, 0});
  // Odometer over label assignments, filtered by consistency.
  const std::size_t total = static_cast<std::size_t>(n_aux);
  std::vector<int> digits(2 * total, 0);
  while (true) {
    for (std::size_t i = 0; i < total; ++i) cur.slots[i] = {digits[2 * i], digits[2 * i + 1]};
    if (cur.consistent()) out.push_back(cur);
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == 3) digits[k++] = 0;
    if (k == digits.size()) break;
    ++digits[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline int beswap_label(int l) { return l == 1 ? 2 : (l == 2 ? 1 : l); }

inline DecouplingCode beswap_code(DecouplingCode c) {
  for (auto& [a, b] : c.slots) {
    a = beswap_label(a);
    b = beswap_label(b);
  }
  return c;
}

inline DecouplingCode chanswap_code(DecouplingCode c) {
  for (auto& [a, b] : c.slots) std::swap(a, b);
  return c;
}

inline DecouplingCode dual_code(DecouplingCode c) {
  for (auto& [a, b] : c.slots) {
    a = 3 - a;
    b = 3 - b;
  }
  return c;
}

// Presentation ranks reproducing the published class table: slot labels are
// preferred in the order full, B-part, none, E-part on the first channel and
// full, B-part, E-part, none on the second.
inline int rank_a(int l) { return l == 3 ? 0 : (l == 1 ? 1 : (l == 0 ? 2 : 3)); }
inline int rank_b(int l) { return l == 3 ? 0 : (l == 1 ? 1 : (l == 2 ? 2 : 3)); }

inline std::vector<int> class_key(const DecouplingCode& c) {
  std::vector<int> k;
  for (const auto& [a, b] : c.slots) k.push_back(rank_a(a));
  for (const auto& [a, b] : c.slots) k.push_back(rank_b(b));
  return k;
}

}  // namespace detail

enum class SymmetryMap {
  BESwap,            // exchange B and E on both channels (with the slot swap it induces)
  PurificationDual   // complement every slot label; reverses alpha blocks
};

/// Equivalence class of codes under the chosen symmetry maps.
struct CodeClass {
  DecouplingCode representative;
  std::vector<DecouplingCode> equivalents;  // orbit minus the representative
};

/// Orbit partition of `codes` under the selected symmetries. BESwap orbits
/// always include the simultaneous exchange of the two channel slots, which
/// leaves every additive cone unchanged because the defining quantification
/// runs over all joint states.
inline std::vector<CodeClass> reduce_by_symmetry(const std::vector<DecouplingCode>& codes,
                                                 const std::vector<SymmetryMap>& maps) {
  const bool use_beswap =
      std::find(maps.begin(), maps.end(), SymmetryMap::BESwap) != maps.end();
  const bool use_dual =
      std::find(maps.begin(), maps.end(), SymmetryMap::PurificationDual) != maps.end();

  std::set<DecouplingCode> pending(codes.begin(), codes.end());
  std::vector<CodeClass> classes;
  while (!pending.empty()) {
    DecouplingCode seed = *pending.begin();
    std::set<DecouplingCode> orbit{seed};
    std::vector<DecouplingCode> frontier{seed};
    while (!frontier.empty()) {
      std::vector<DecouplingCode> next;
      for (const auto& c : frontier) {
        std::vector<DecouplingCode> images;
        if (use_beswap) {
          images.push_back(detail::beswap_code(c));
          images.push_back(detail::chanswap_code(c));
        }
        if (use_dual) images.push_back(detail::dual_code(c));
        for (auto& img : images)
          if (orbit.insert(img).second) next.push_back(img);
      }
      frontier = std::move(next);
    }

    CodeClass cls;
    cls.representative = *std::min_element(orbit.begin(), orbit.end(),
                                           [](const DecouplingCode& x, const DecouplingCode& y) {
                                             return detail::class_key(x) < detail::class_key(y);
                                           });
    // Equivalents in generator order from the representative, then the rest.
    std::vector<DecouplingCode> listed{cls.representative};
    auto push_unique = [&](const DecouplingCode& c) {
      if (std::find(listed.begin(), listed.end(), c) == listed.end() && orbit.count(c))
        listed.push_back(c);
    };
    push_unique(detail::chanswap_code(cls.representative));
    push_unique(detail::beswap_code(cls.representative));
    push_unique(detail::chanswap_code(detail::beswap_code(cls.representative)));
    if (use_dual) {
      const auto d = detail::dual_code(cls.representative);
      push_unique(d);
      push_unique(detail::chanswap_code(d));
      push_unique(detail::beswap_code(d));
      push_unique(detail::chanswap_code(detail::beswap_code(d)));
    }
    for (const auto& c : orbit) push_unique(c);
    cls.equivalents.assign(listed.begin() + 1, listed.end());

    for (const auto& c : orbit) pending.erase(c);
    classes.push_back(std::move(cls));
  }

  std::sort(classes.begin(), classes.end(), [](const CodeClass& x, const CodeClass& y) {
    return detail::class_key(x.representative) < detail::class_key(y.representative);
  });
  return classes;
}

namespace detail {

/// Mask of the a-labeled subset of {B1, E1} in the channel-pair context.
inline Mask first_channel_mask(const SystemContext& ctx, int label) {
  Mask m = 0;
  if (label & 1) m |= ctx.mask_of({"B1"});
  if (label & 2) m |= ctx.mask_of({"E1"});
  return m;
}

inline Mask second_channel_mask(const SystemContext& ctx, int label) {
  Mask m = 0;
  if (label & 1) m |= ctx.mask_of({"B2"});
  if (label & 2) m |= ctx.mask_of({"E2"});
  return m;
}

}  // namespace detail

/// Compiles the additivity defect of the formula f_alpha under a decoupling:
///   Delta = f_alpha(first channel, slots dressed by the second-channel
///           subsets) + f_alpha(second channel, slots dressed by the
///           first-channel subsets) - f_alpha(joint channel),
/// as a linear entropy functional on the channel-pair context.
inline LinearEntropyFunctional delta_functional(const DecouplingCode& code, const RatVec& alpha) {
  const int n = code.n_aux();
  const AlphaSpace sp(n);
  if (alpha.size() != sp.dim()) throw std::invalid_argument("delta_functional: alpha dimension");
  const SystemContext dst = channel_pair_context(n);
  const LinearEntropyFunctional f = alpha_to_formula(sp, alpha);

  const Mask b1 = dst.mask_of({"B1"}), e1 = dst.mask_of({"E1"});
  const Mask b2 = dst.mask_of({"B2"}), e2 = dst.mask_of({"E2"});
  auto vmask = [&](int i) { return Mask{1} << (4 + i); };

  std::vector<Mask> img1{b1, e1}, img2{b2, e2}, img3{b1 | b2, e1 | e2};
  for (int i = 0; i < n; ++i) {
    img1.push_back(detail::second_channel_mask(dst, code.slots[i].second) | vmask(i));
    img2.push_back(detail::first_channel_mask(dst, code.slots[i].first) | vmask(i));
    img3.push_back(vmask(i));
  }
  return f.relabel(dst, img1) + f.relabel(dst, img2) - f.relabel(dst, img3);
}

/// Per-coefficient expansion term for a one-slot code (a, b): the exact
/// functional E_s = H(s1, Mt2, V) + H(Mh1, s2, V) - H(s1, s2, V)
///                 - H(Mh1, Mt2, V), s a subset of {B, E}.
inline LinearEntropyFunctional esv_term(Mask s, int a, int b) {
  const SystemContext ctx = channel_pair_context(1);
  const Mask v = ctx.mask_of({"V"});
  Mask s1 = 0, s2 = 0;
  if (s & 1u) { s1 |= ctx.mask_of({"B1"}); s2 |= ctx.mask_of({"B2"}); }
  if (s & 2u) { s1 |= ctx.mask_of({"E1"}); s2 |= ctx.mask_of({"E2"}); }
  const Mask mh1 = detail::first_channel_mask(ctx, a);
  const Mask mt2 = detail::second_channel_mask(ctx, b);

  LinearEntropyFunctional f(ctx);
  f.add(s1 | mt2 | v, Rational(1));
  f.add(mh1 | s2 | v, Rational(1));
  f.add(s1 | s2 | v, Rational(-1));
  f.add(mh1 | mt2 | v, Rational(-1));
  return f;
}

inline LinearEntropyFunctional esv_term(Mask s, const DecouplingCode& code) {
  if (code.n_aux() != 1) throw std::invalid_argument("esv_term: one-slot codes only");
  return esv_term(s, code.slots[0].first, code.slots[0].second);
}

}  // namespace addicone
