#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "addicone/additivity.hpp"
#include "addicone/entropy.hpp"
#include "addicone/rng.hpp"
#include "addicone/witness.hpp"

using namespace addicone;

namespace {

RatVec bounded_alpha(const AlphaSpace& sp, Rng& rng) {
  RatVec alpha(sp.dim(), Rational(0));
  for (std::size_t i = 0; i < 3; ++i) alpha[i] = Rational(static_cast<long>(rng.uniform_int(9)) - 4);
  for (Mask t = 1; t < sp.aux_blocks(); ++t) {
    Rational sum;
    for (Mask s = 0; s < 3; ++s) {
      alpha[sp.index(t, s)] = Rational(static_cast<long>(rng.uniform_int(9)) - 4);
      sum += alpha[sp.index(t, s)];
    }
    alpha[sp.index(t, 3)] = -sum;
  }
  return alpha;
}

}  // namespace

TEST_CASE("library shape invariants") {
  const auto lib = witness_library();
  CHECK(lib.size() == 25);
  std::set<std::string> names;
  for (const auto& w : lib) {
    INFO(w.name);
    CHECK(names.insert(w.name).second);
    const int arity = w.code.n_aux();
    CHECK((arity == 0 || arity == 1));
    CHECK(w.forms.size() == 4 + static_cast<std::size_t>(arity));
    if (arity == 1) CHECK(w.forms[4].empty());
    CHECK(w.expected_delta.size() == AlphaSpace(arity).dim());
    CHECK(w.n_bits >= 1);
    for (const auto& sys : w.forms)
      for (std::uint32_t f : sys) CHECK(f < (1u << w.n_bits));
  }
}

TEST_CASE("rank arithmetic on a concrete three-bit witness") {
  WitnessSpec w;
  for (const auto& lw : witness_library())
    if (lw.name == "case0-w4") w = lw;
  REQUIRE(w.n_bits == 3);
  const SystemContext ctx = w.context();
  const RatVec h = exact_entropy_table(w);

  auto H = [&](std::vector<std::string> names) { return h[ctx.mask_of(names)]; };
  CHECK(H({"B1"}) == Rational(1));
  CHECK(H({"E1"}) == Rational(1));
  CHECK(H({"B2"}) == Rational(1));
  CHECK(H({"E2"}) == Rational(1));
  CHECK(H({"B1", "E1"}) == Rational(2));
  CHECK(H({"B2", "E2"}) == Rational(2));
  CHECK(H({"B1", "B2"}) == Rational(2));
  CHECK(H({"E1", "E2"}) == Rational(2));
  CHECK(H({"B1", "E1", "B2", "E2"}) == Rational(3));

  // So both single-output mutual informations vanish while the joint one is
  // positive: exactly the last outer face of the auxiliary-free cone.
  CHECK(witness_delta_form(w) == w.expected_delta);
  CHECK(w.expected_delta[0].is_zero());
  CHECK(w.expected_delta[1].is_zero());
  CHECK(w.expected_delta[2] == Rational(1));
}

TEST_CASE("declared defect forms match the compiled ones exactly") {
  for (const auto& w : witness_library()) {
    INFO(w.name);
    CHECK(witness_delta_form(w) == w.expected_delta);
  }
}

TEST_CASE("compiled distributions reproduce the exact entropy tables") {
  for (const auto& w : witness_library()) {
    INFO(w.name);
    const ClassicalDistribution d = compile_witness(w);
    REQUIRE(d.valid(1e-12));
    const RatVec h = exact_entropy_table(w);
    const EntropyVector hv = entropy_vector(d);
    for (Mask m = 1; m <= w.context().full_mask(); ++m)
      CHECK(std::fabs(hv[m] - h[m].to_double()) < 1e-9);
  }
}

TEST_CASE("defect forms agree with state evaluation coordinate by coordinate") {
  for (const auto& w : witness_library()) {
    const AlphaSpace sp(w.code.n_aux());
    const EntropyVector hv = entropy_vector(compile_witness(w));
    for (std::size_t c = 0; c < sp.dim(); ++c) {
      RatVec unit(sp.dim(), Rational(0));
      unit[c] = Rational(1);
      const double sampled = delta_functional(w.code, unit).evaluate(hv);
      INFO(w.name << " coord " << sp.coord_name(c));
      CHECK(sampled == Catch::Approx(w.expected_delta[c].to_double()).margin(1e-9));
    }
  }
}

TEST_CASE("witness defect value is the declared linear form applied to alpha") {
  Rng rng(606);
  for (const auto& w : witness_library()) {
    const AlphaSpace sp(w.code.n_aux());
    RatVec alpha(sp.dim());
    for (auto& x : alpha) x = Rational(static_cast<long>(rng.uniform_int(9)) - 4);
    CHECK(witness_delta_value(w, alpha) == dot(w.expected_delta, alpha));
  }
}

TEST_CASE("exchange maps are involutions on the witness data") {
  for (const auto& w : witness_library()) {
    const WitnessSpec bb = beswap_witness(beswap_witness(w));
    CHECK(bb.code == w.code);
    CHECK(bb.forms == w.forms);
    CHECK(bb.expected_delta == w.expected_delta);
    const WitnessSpec cc = chanswap_witness(chanswap_witness(w));
    CHECK(cc.code == w.code);
    CHECK(cc.forms == w.forms);
    CHECK(cc.expected_delta == w.expected_delta);
  }
}

TEST_CASE("transformed witnesses keep declaration and compilation in sync") {
  for (const auto& w : witness_library()) {
    const WitnessSpec bw = beswap_witness(w);
    INFO(bw.name);
    CHECK(witness_delta_form(bw) == bw.expected_delta);
    const WitnessSpec cw = chanswap_witness(w);
    CHECK(witness_delta_form(cw) == cw.expected_delta);
    CHECK(cw.expected_delta == w.expected_delta);
    const WitnessSpec bcw = chanswap_witness(beswap_witness(w));
    CHECK(witness_delta_form(bcw) == bcw.expected_delta);
  }
}

TEST_CASE("every one-slot code is served with witnesses for that code") {
  for (const auto& code : enumerate_standard(1)) {
    const auto ws = witnesses_for(code);
    INFO(code.str());
    CHECK(!ws.empty());
    for (const auto& w : ws) {
      CHECK(w.code == code);
      CHECK(!w.expected_delta.empty());
      CHECK(witness_delta_form(w) == w.expected_delta);
    }
  }
  CHECK(witnesses_for(DecouplingCode{}).size() == 4);
  CHECK(witnesses_for(one_var_code(3, 3)).size() == 4);
  CHECK(witnesses_for(one_var_code(2, 2)).size() == 4);  // exchanged image of (1,1)
  CHECK(witnesses_for(one_var_code(1, 3)).size() == 2);  // channel swap of (3,1)
}

TEST_CASE("lifted witnesses reduce to their block defect on bounded alpha") {
  DecouplingCode code2;
  code2.slots = {{3, 3}, {0, 0}};
  REQUIRE(code2.consistent());
  const AlphaSpace sp2(2);
  Rng rng(707);

  const auto pick = [](const std::string& name) {
    for (const auto& w : witness_library())
      if (w.name == name) return w;
    throw std::runtime_error("missing witness " + name);
  };

  struct Case {
    Mask t;
    std::string source;
  };
  // Block of slot subset {1}: (3,3); {2}: (0,0); {1,2}: union (3,3).
  const std::vector<Case> cases = {{0u, "case0-w4"}, {1u, "case1-w1"}, {2u, "case7-w2"},
                                   {3u, "case1-w2"}};
  for (const auto& c : cases) {
    const WitnessSpec src = pick(c.source);
    const WitnessSpec lifted = lift_witness(src, code2, c.t);
    CHECK(lifted.code == code2);
    CHECK(lifted.forms.size() == 6);
    const RatVec lifted_form = witness_delta_form(lifted);
    for (int trial = 0; trial < 5; ++trial) {
      const RatVec alpha = bounded_alpha(sp2, rng);
      const RatVec at = extract_block_vector(sp2, c.t, alpha);
      const RatVec src_alpha = c.t == 0 ? at : embed_block_vector(AlphaSpace(1), 1, at);
      INFO(lifted.name << " block " << c.t);
      CHECK(dot(lifted_form, alpha) == dot(witness_delta_form(src), src_alpha));
    }
  }
}

TEST_CASE("lifted witnesses still compile to matching distributions") {
  DecouplingCode code2;
  code2.slots = {{3, 0}, {0, 1}};
  const WitnessSpec src = [] {
    for (const auto& w : witness_library())
      if (w.name == "case3-w1") return w;
    throw std::runtime_error("missing witness");
  }();
  const WitnessSpec lifted = lift_witness(src, code2, 1u);
  CHECK(lifted.n_bits > src.n_bits);
  const ClassicalDistribution d = compile_witness(lifted);
  REQUIRE(d.valid(1e-12));
  const RatVec h = exact_entropy_table(lifted);
  const EntropyVector hv = entropy_vector(d);
  for (Mask m = 1; m <= lifted.context().full_mask(); ++m)
    CHECK(std::fabs(hv[m] - h[m].to_double()) < 1e-9);
}

TEST_CASE("lift rejects mismatched arities and oversized slot sets") {
  const auto lib = witness_library();
  const WitnessSpec zerovar = lib[0];
  const WitnessSpec onevar = lib[4];
  DecouplingCode code2;
  code2.slots = {{3, 3}, {0, 0}};
  CHECK_THROWS_AS(lift_witness(zerovar, code2, 1u), std::invalid_argument);
  CHECK_THROWS_AS(lift_witness(onevar, code2, 0u), std::invalid_argument);
  CHECK_THROWS_AS(lift_witness(onevar, code2, 4u), std::invalid_argument);
}
