#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/decoupling.hpp"
#include "addicone/distribution.hpp"
#include "addicone/functional.hpp"

namespace addicone {

/// Deterministic bit-linear witness state: every subsystem is a tuple of
/// F2-linear forms of n_bits independent uniform bits, so every subset
/// entropy is exactly the F2 rank of the stacked forms.
///
/// `forms` follows the channel-pair context order B1, E1, B2, E2, then the
/// auxiliaries. `code` names the decoupling block the witness refutes for
/// (zero slots = the auxiliary-free block). `expected_delta`, when present,
/// is the hand-computed defect linear form in the alpha coordinates; it must
/// equal the compiled form coefficient by coefficient.
struct WitnessSpec {
  std::string name;
  DecouplingCode code;
  int n_bits = 0;
  std::vector<std::vector<std::uint32_t>> forms;
  RatVec expected_delta;

  SystemContext context() const { return channel_pair_context(code.n_aux()); }
};

inline int f2_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (int bit = 31; bit >= 0; --bit) {
    const std::uint32_t m = 1u << bit;
    std::size_t piv = rows.size();
    for (std::size_t i = static_cast<std::size_t>(rank); i < rows.size(); ++i)
      if (rows[i] & m) { piv = i; break; }
    if (piv == rows.size()) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[piv]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != static_cast<std::size_t>(rank) && (rows[i] & m)) rows[i] ^= rows[static_cast<std::size_t>(rank)];
    ++rank;
  }
  return rank;
}

/// Exact joint entropies (in bits, integer-valued) for all subset masks.
inline RatVec exact_entropy_table(const WitnessSpec& w) {
  const SystemContext ctx = w.context();
  if (w.forms.size() != ctx.n()) throw std::invalid_argument("WitnessSpec: wrong number of systems");
  RatVec h(std::size_t{1} << ctx.n(), Rational(0));
  for (Mask m = 1; m <= ctx.full_mask(); ++m) {
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < ctx.n(); ++i)
      if (m & (Mask{1} << i)) rows.insert(rows.end(), w.forms[i].begin(), w.forms[i].end());
    h[m] = Rational(f2_rank(std::move(rows)));
  }
  return h;
}

/// Exact additivity-defect linear form of the witness: coefficient c of the
/// returned vector is Delta(e_c) on the witness state, over the full alpha
/// space of the witness's block arity.
inline RatVec witness_delta_form(const WitnessSpec& w) {
  const AlphaSpace sp(w.code.n_aux());
  const RatVec h = exact_entropy_table(w);
  RatVec form(sp.dim(), Rational(0));
  for (std::size_t c = 0; c < sp.dim(); ++c) {
    RatVec unit(sp.dim(), Rational(0));
    unit[c] = Rational(1);
    form[c] = delta_functional(w.code, unit).evaluate_exact(h);
  }
  return form;
}

inline Rational witness_delta_value(const WitnessSpec& w, const RatVec& alpha) {
  return dot(witness_delta_form(w), alpha);
}

/// Uniform distribution over the witness's F2 solution set. Each system's
/// alphabet is 2^(number of its forms).
inline ClassicalDistribution compile_witness(const WitnessSpec& w) {
  const SystemContext ctx = w.context();
  std::vector<int> alphabet;
  for (const auto& f : w.forms) alphabet.push_back(1 << f.size());
  ClassicalDistribution d(ctx.names, alphabet);
  const std::size_t total = std::size_t{1} << w.n_bits;
  const double weight = 1.0 / static_cast<double>(total);
  std::vector<int> outcome(ctx.n());
  for (std::size_t bits = 0; bits < total; ++bits) {
    for (std::size_t i = 0; i < ctx.n(); ++i) {
      int val = 0;
      for (std::size_t j = 0; j < w.forms[i].size(); ++j)
        val |= (popcount(static_cast<Mask>(w.forms[i][j] & bits)) & 1) << j;
      outcome[i] = val;
    }
    d.at(outcome) += weight;
  }
  return d;
}

/// The shipped refutation library: one family per decoupling class (numbered
/// by the published table rows; case0 is the auxiliary-free block), each
/// witness matching one outer face of that class's additive cone.
inline std::vector<WitnessSpec> witness_library() {
  std::vector<WitnessSpec> lib;
  auto ints = [](std::vector<int> v) {
    RatVec out;
    for (int x : v) out.emplace_back(x);
    return out;
  };
  auto zero = [&](std::string name, std::vector<std::vector<std::uint32_t>> f, int bits,
                  std::vector<int> expected) {
    lib.push_back({std::move(name), DecouplingCode{}, bits, std::move(f), ints(std::move(expected))});
  };
  auto one = [&](std::string name, int a, int b, std::vector<std::vector<std::uint32_t>> f, int bits,
                 std::vector<int> expected) {
    f.push_back({});  // V carries no forms: the library states are flat on V
    lib.push_back({std::move(name), one_var_code(a, b), bits, std::move(f), ints(std::move(expected))});
  };

  // Expected forms follow the alpha coordinate order
  // (a_B, a_E, a_BE[, a_V, a_BV, a_EV, a_BEV]); because every library state is
  // flat on V, the auxiliary part reduces on the sum-zero subspace to the
  // outer face named alongside each entry.

  // Auxiliary-free block: faces a_B + a_BE, a_E + a_BE, a_B + a_E + a_BE, a_BE.
  zero("case0-w1", {{1u}, {}, {1u}, {}}, 1, {1, 0, 1});
  zero("case0-w2", {{}, {1u}, {}, {1u}}, 1, {0, 1, 1});
  zero("case0-w3", {{1u}, {1u}, {1u}, {1u}}, 1, {1, 1, 1});
  zero("case0-w4", {{0b001u}, {0b101u}, {0b010u}, {0b110u}}, 3, {0, 0, 1});

  // (3,3): faces a_V, a_V + a_EV, a_V + a_BV, a_V + a_BV + a_EV.
  one("case1-w1", 3, 3, {{1u}, {}, {}, {1u}}, 1, {0, 0, 1, 2, 1, 1, 1});
  one("case1-w2", 3, 3, {{0b01u}, {}, {0b11u}, {0b10u}}, 2, {0, 0, 1, 3, 2, 3, 2});
  one("case1-w3", 3, 3, {{}, {0b01u}, {0b10u}, {0b11u}}, 2, {0, 0, 1, 3, 3, 2, 2});
  one("case1-w4", 3, 3, {{0b001u}, {0b101u}, {0b010u}, {0b110u}}, 3, {0, 0, 1, 4, 4, 4, 3});

  // (3,1): faces -a_EV and a_V + a_EV.
  one("case2-w1", 3, 1, {{1u}, {}, {}, {1u}}, 1, {0, 0, 1, 1, 1, 0, 1});
  one("case2-w2", 3, 1, {{1u}, {}, {1u}, {}}, 1, {1, 0, 1, 2, 1, 2, 1});

  // (3,0): faces -a_BV and -a_EV.
  one("case3-w1", 3, 0, {{}, {1u}, {1u}, {}}, 1, {0, 0, 1, 1, 0, 1, 1});
  one("case3-w2", 3, 0, {{1u}, {}, {}, {1u}}, 1, {0, 0, 1, 1, 1, 0, 1});

  // (1,1): the a_EV = 0 equality (two opposite faces) plus a_V and a_BEV.
  one("case4-w1", 1, 1, {{1u}, {}, {}, {1u}}, 1, {0, 0, 1, 1, 1, 0, 1});
  one("case4-w2", 1, 1, {{0b01u}, {0b11u}, {0b10u}, {0b11u}}, 2, {0, 1, 2, 2, 2, 3, 2});
  one("case4-w3", 1, 1, {{1u}, {}, {1u}, {}}, 1, {1, 0, 1, 2, 1, 2, 1});
  one("case4-w4", 1, 1, {{}, {1u}, {}, {1u}}, 1, {0, 1, 1, 0, 0, 1, 1});

  // (1,2): faces a_BEV and a_V.
  one("case5-w1", 1, 2, {{}, {1u}, {1u}, {}}, 1, {0, 0, 1, 0, 0, 0, 1});
  one("case5-w2", 1, 2, {{1u}, {1u}, {1u}, {1u}}, 1, {1, 1, 1, 2, 1, 1, 1});

  // (1,0): faces -a_EV, a_EV + a_BEV, a_BEV (third face implied).
  one("case6-w1", 1, 0, {{1u}, {}, {}, {1u}}, 1, {0, 0, 1, 1, 1, 0, 1});
  one("case6-w2", 1, 0, {{}, {1u}, {}, {1u}}, 1, {0, 1, 1, 0, 0, 1, 1});
  one("case6-w3", 1, 0, {{}, {1u}, {1u}, {}}, 1, {0, 0, 1, 0, 0, 0, 1});

  // (0,0): faces a_BV + a_BEV, a_EV + a_BEV, a_BV + a_EV + a_BEV, a_BEV.
  one("case7-w1", 0, 0, {{1u}, {}, {1u}, {}}, 1, {1, 0, 1, 0, 1, 0, 1});
  one("case7-w2", 0, 0, {{}, {1u}, {}, {1u}}, 1, {0, 1, 1, 0, 0, 1, 1});
  one("case7-w3", 0, 0, {{1u}, {1u}, {1u}, {1u}}, 1, {1, 1, 1, 0, 1, 1, 1});
  one("case7-w4", 0, 0, {{0b001u}, {0b101u}, {0b010u}, {0b110u}}, 3, {0, 0, 1, 0, 0, 0, 1});

  return lib;
}

/// Image of a witness under the global B/E exchange: swaps the B and E forms
/// of both channels, and the code label accordingly. A witness for code c maps
/// to a witness for the exchanged code; its defect form is the original one
/// with the B and E alpha coordinates exchanged in every block.
inline WitnessSpec beswap_witness(WitnessSpec w) {
  w.code = detail::beswap_code(w.code);
  std::swap(w.forms[0], w.forms[1]);
  std::swap(w.forms[2], w.forms[3]);
  if (!w.expected_delta.empty()) {
    const AlphaSpace sp(w.code.n_aux());
    std::swap(w.expected_delta[sp.index(0, 1)], w.expected_delta[sp.index(0, 2)]);
    for (Mask t = 1; t < sp.aux_blocks(); ++t)
      std::swap(w.expected_delta[sp.index(t, 1)], w.expected_delta[sp.index(t, 2)]);
  }
  w.name += "-beswap";
  return w;
}

/// Image of a witness under exchanging the two channels; the defect form is
/// unchanged because the defect is symmetric in the channel pair.
inline WitnessSpec chanswap_witness(WitnessSpec w) {
  w.code = detail::chanswap_code(w.code);
  std::swap(w.forms[0], w.forms[2]);
  std::swap(w.forms[1], w.forms[3]);
  w.name += "-chanswap";
  return w;
}

/// Library entries targeting a given block code. Codes without direct entries
/// are served through the exchange symmetries from their class representative
/// (both maps are involutions and commute, so applying the same map to the
/// representative's witnesses lands on the requested code).
inline std::vector<WitnessSpec> witnesses_for(const DecouplingCode& code) {
  const auto direct = [](const DecouplingCode& c) {
    std::vector<WitnessSpec> out;
    for (auto& w : witness_library())
      if (w.code == c) out.push_back(std::move(w));
    return out;
  };
  std::vector<WitnessSpec> out = direct(code);
  if (!out.empty()) return out;

  using Map = WitnessSpec (*)(WitnessSpec);
  using CodeMap = DecouplingCode (*)(DecouplingCode);
  const std::vector<std::pair<std::vector<Map>, std::vector<CodeMap>>> compositions = {
      {{&beswap_witness}, {&detail::beswap_code}},
      {{&chanswap_witness}, {&detail::chanswap_code}},
      {{&beswap_witness, &chanswap_witness}, {&detail::beswap_code, &detail::chanswap_code}}};
  for (const auto& [maps, code_maps] : compositions) {
    DecouplingCode image = code;
    for (CodeMap m : code_maps) image = m(std::move(image));
    std::vector<WitnessSpec> base = direct(image);
    if (base.empty()) continue;
    for (auto& w : base) {
      for (Map m : maps) w = m(std::move(w));
      out.push_back(std::move(w));
    }
    return out;
  }
  return out;
}

/// Pads a block witness into an n-slot channel-pair context so that, for
/// every alpha on the boundedness subspace, the full defect equals the
/// T-block defect of alpha's restriction on the original witness: outputs
/// gain fresh uniform shares from every slot in T, slots in T keep their
/// shares alongside the original auxiliary, and slots outside T carry a copy
/// of the original outputs. T empty takes an auxiliary-free witness and only
/// copies outputs.
inline WitnessSpec lift_witness(const WitnessSpec& w, const DecouplingCode& code, Mask t_set) {
  const int expected_arity = t_set == 0 ? 0 : 1;
  if (w.code.n_aux() != expected_arity)
    throw std::invalid_argument("lift_witness: source arity must match the slot set");
  const int n = code.n_aux();
  if (t_set >= (Mask{1} << n)) throw std::invalid_argument("lift_witness: bad slot set");

  WitnessSpec out;
  out.name = w.name + "-lift" + code.str();
  out.code = code;
  out.forms.assign(4 + static_cast<std::size_t>(n), {});
  int next_bit = w.n_bits;

  // Pads: for every slot j in T and every output form, one fresh bit.
  std::vector<std::vector<std::vector<std::uint32_t>>> pad(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (!(t_set & (Mask{1} << j))) continue;
    pad[static_cast<std::size_t>(j)].resize(4);
    for (std::size_t sys = 0; sys < 4; ++sys)
      for (std::size_t k = 0; k < w.forms[sys].size(); ++k)
        pad[static_cast<std::size_t>(j)][sys].push_back(1u << next_bit++);
  }
  if (next_bit > 31) throw std::invalid_argument("lift_witness: too many bits");
  out.n_bits = next_bit;

  for (std::size_t sys = 0; sys < 4; ++sys) {
    out.forms[sys] = w.forms[sys];
    for (int j = 0; j < n; ++j)
      if (t_set & (Mask{1} << j))
        for (std::size_t k = 0; k < out.forms[sys].size(); ++k)
          out.forms[sys][k] ^= pad[static_cast<std::size_t>(j)][sys][k];
  }

  // Lowest slot in T hosts the original auxiliary register.
  const int host = t_set == 0 ? -1 : __builtin_ctz(t_set);
  for (int j = 0; j < n; ++j) {
    auto& vf = out.forms[4 + static_cast<std::size_t>(j)];
    if (t_set & (Mask{1} << j)) {
      if (j == host) vf = w.forms[4];
      for (std::size_t sys = 0; sys < 4; ++sys)
        for (std::uint32_t b : pad[static_cast<std::size_t>(j)][sys]) vf.push_back(b);
    } else {
      for (std::size_t sys = 0; sys < 4; ++sys)
        for (std::uint32_t f : w.forms[sys]) vf.push_back(f);
    }
  }
  return out;
}

}  // namespace addicone
