#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace addicone {

using Mask = std::uint32_t;

/// Ordered collection of named subsystems (at most 16). Subsets are bitmasks,
/// bit i (little-endian) standing for names[i]; labels concatenate names in
/// context order.
struct SystemContext {
  std::vector<std::string> names;

  SystemContext() = default;
  explicit SystemContext(std::vector<std::string> n) : names(std::move(n)) {
    if (names.size() > 16) throw std::invalid_argument("SystemContext: more than 16 systems");
  }

  std::size_t n() const { return names.size(); }
  Mask full_mask() const { return static_cast<Mask>((1u << names.size()) - 1u); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument("SystemContext: unknown system '" + name + "'");
  }

  Mask mask_of(const std::vector<std::string>& subset) const {
    Mask m = 0;
    for (const auto& s : subset) m |= Mask{1} << index_of(s);
    return m;
  }

  std::string label(Mask m) const {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (m & (Mask{1} << i)) out += names[i];
    return out;
  }

  std::vector<std::string> subset_names(Mask m) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (m & (Mask{1} << i)) out.push_back(names[i]);
    return out;
  }

  bool operator==(const SystemContext& o) const { return names == o.names; }
};

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// Channel-pair context used by decoupling functionals: B1, E1, B2, E2
/// followed by the auxiliary systems (none, "V", or "V1".."Vn").
inline SystemContext channel_pair_context(int n_aux) {
  std::vector<std::string> names = {"B1", "E1", "B2", "E2"};
  if (n_aux == 1) {
    names.push_back("V");
  } else {
    for (int i = 1; i <= n_aux; ++i) names.push_back("V" + std::to_string(i));
  }
  return SystemContext(std::move(names));
}

/// Single-channel context B, E plus auxiliaries; the domain of the
/// entropic formulas whose additivity is being classified.
inline SystemContext formula_context(int n_aux) {
  std::vector<std::string> names = {"B", "E"};
  if (n_aux == 1) {
    names.push_back("V");
  } else {
    for (int i = 1; i <= n_aux; ++i) names.push_back("V" + std::to_string(i));
  }
  return SystemContext(std::move(names));
}

/// Coordinate system for coefficient vectors alpha over a formula context
/// with n_aux auxiliary systems. A coordinate is a pair (t, s): t a subset of
/// the auxiliaries, s a nonempty-unless-t-nonempty subset of {B, E}. Blocks
/// are ordered by ascending t; within a block by ascending s; the t = 0 block
/// omits s = 0 (the constant term H(empty) = 0 is not a coordinate).
struct AlphaSpace {
  int n_aux = 0;

  explicit AlphaSpace(int n = 0) : n_aux(n) {
    if (n < 0 || n > 12) throw std::invalid_argument("AlphaSpace: bad n_aux");
  }

  std::size_t aux_blocks() const { return (std::size_t{1} << n_aux); }
  std::size_t dim() const { return 3 + 4 * (aux_blocks() - 1); }

  std::size_t index(Mask t, Mask s) const {
    check(t, s);
    if (t == 0) return static_cast<std::size_t>(s) - 1;
    return 3 + 4 * (static_cast<std::size_t>(t) - 1) + s;
  }

  std::pair<Mask, Mask> coord(std::size_t idx) const {
    if (idx < 3) return {0u, static_cast<Mask>(idx + 1)};
    idx -= 3;
    return {static_cast<Mask>(idx / 4 + 1), static_cast<Mask>(idx % 4)};
  }

  std::string coord_name(std::size_t idx) const {
    auto [t, s] = coord(idx);
    std::string out = "a_";
    if (s & 1u) out += "B";
    if (s & 2u) out += "E";
    out += aux_label(t);
    return out;
  }

  std::vector<std::string> coord_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(coord_name(i));
    return out;
  }

  std::string aux_label(Mask t) const {
    std::string out;
    if (n_aux == 1) {
      if (t & 1u) out += "V";
    } else {
      for (int i = 0; i < n_aux; ++i)
        if (t & (Mask{1} << i)) out += "V" + std::to_string(i + 1);
    }
    return out;
  }

 private:
  void check(Mask t, Mask s) const {
    if (t >= aux_blocks() || s > 3 || (t == 0 && s == 0))
      throw std::out_of_range("AlphaSpace: bad coordinate");
  }
};

}  // namespace addicone
