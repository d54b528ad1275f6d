#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "addicone/decoupling.hpp"
#include "addicone/entropy.hpp"
#include "addicone/rng.hpp"

using namespace addicone;

namespace {

using F = LinearEntropyFunctional;

RatVec rv(std::vector<int> v) {
  RatVec out;
  for (int x : v) out.emplace_back(x);
  return out;
}

std::set<DecouplingCode> as_set(const std::vector<DecouplingCode>& v) {
  return {v.begin(), v.end()};
}

/// Independent enumeration: place each of B1, E1, B2, E2 into one of the
/// n slots or leave it out, (n+1)^4 placements in bijection with codes.
std::vector<DecouplingCode> codes_by_placement(int n) {
  std::vector<DecouplingCode> out;
  for (int pb1 = 0; pb1 <= n; ++pb1)
    for (int pe1 = 0; pe1 <= n; ++pe1)
      for (int pb2 = 0; pb2 <= n; ++pb2)
        for (int pe2 = 0; pe2 <= n; ++pe2) {
          DecouplingCode c;
          c.slots.assign(static_cast<std::size_t>(n), {0, 0});
          if (pb1) c.slots[static_cast<std::size_t>(pb1 - 1)].first |= 1;
          if (pe1) c.slots[static_cast<std::size_t>(pe1 - 1)].first |= 2;
          if (pb2) c.slots[static_cast<std::size_t>(pb2 - 1)].second |= 1;
          if (pe2) c.slots[static_cast<std::size_t>(pe2 - 1)].second |= 2;
          out.push_back(std::move(c));
        }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("standard code enumeration matches the placement count") {
  CHECK(enumerate_standard(0).size() == 1);
  CHECK(enumerate_standard(1).size() == 16);
  CHECK(enumerate_standard(2).size() == 81);
  for (int n = 0; n <= 3; ++n) {
    const auto direct = enumerate_standard(n);
    const auto placed = codes_by_placement(n);
    CHECK(direct.size() == placed.size());
    CHECK(as_set(direct) == as_set(placed));
    long expect = 1;
    for (int k = 0; k < 4; ++k) expect *= (n + 1);
    CHECK(static_cast<long>(direct.size()) == expect);
  }
}

TEST_CASE("consistency rejects doubly assigned outputs") {
  DecouplingCode c;
  c.slots = {{1, 0}, {1, 0}};
  CHECK(!c.consistent());
  c.slots = {{1, 2}, {2, 1}};
  CHECK(c.consistent());
  CHECK(c.str() == "(1,2;2,1)");
  CHECK(one_var_code(3, 1).str() == "(3,1)");
  CHECK(DecouplingCode{}.str() == "()");
}

TEST_CASE("symmetry maps are involutions") {
  for (const auto& c : enumerate_standard(1)) {
    CHECK(detail::beswap_code(detail::beswap_code(c)) == c);
    CHECK(detail::chanswap_code(detail::chanswap_code(c)) == c);
    CHECK(detail::dual_code(detail::dual_code(c)) == c);
    CHECK(detail::beswap_code(c).consistent());
    CHECK(detail::dual_code(c).consistent());
  }
}

TEST_CASE("output-swap symmetry partitions the one-slot codes into seven classes") {
  const auto classes = reduce_by_symmetry(enumerate_standard(1), {SymmetryMap::BESwap});
  REQUIRE(classes.size() == 7);

  const std::vector<DecouplingCode> reps = {
      one_var_code(3, 3), one_var_code(3, 1), one_var_code(3, 0), one_var_code(1, 1),
      one_var_code(1, 2), one_var_code(1, 0), one_var_code(0, 0)};
  for (std::size_t i = 0; i < 7; ++i) CHECK(classes[i].representative == reps[i]);

  auto equiv_set = [&](std::size_t i) { return as_set(classes[i].equivalents); };
  CHECK(equiv_set(0).empty());
  CHECK(equiv_set(1) == as_set({one_var_code(1, 3), one_var_code(3, 2), one_var_code(2, 3)}));
  CHECK(equiv_set(2) == as_set({one_var_code(0, 3)}));
  CHECK(equiv_set(3) == as_set({one_var_code(2, 2)}));
  CHECK(equiv_set(4) == as_set({one_var_code(2, 1)}));
  CHECK(equiv_set(5) == as_set({one_var_code(0, 1), one_var_code(2, 0), one_var_code(0, 2)}));
  CHECK(equiv_set(6).empty());

  std::size_t covered = 0;
  for (const auto& cls : classes) covered += 1 + cls.equivalents.size();
  CHECK(covered == 16);
}

TEST_CASE("adding the purification dual merges the classes to five") {
  const auto classes = reduce_by_symmetry(enumerate_standard(1),
                                          {SymmetryMap::BESwap, SymmetryMap::PurificationDual});
  REQUIRE(classes.size() == 5);
  const std::vector<DecouplingCode> reps = {one_var_code(3, 3), one_var_code(3, 1),
                                            one_var_code(3, 0), one_var_code(1, 1),
                                            one_var_code(1, 2)};
  for (std::size_t i = 0; i < 5; ++i) CHECK(classes[i].representative == reps[i]);

  // The all-or-nothing pair is self-dual as a set, and the one-sided class
  // absorbs the entire single-output class through the dual map.
  CHECK(as_set(classes[0].equivalents).count(one_var_code(0, 0)) == 1);
  CHECK(classes[1].equivalents.size() == 7);
  CHECK(as_set(classes[1].equivalents).count(one_var_code(1, 0)) == 1);
  CHECK(as_set(classes[1].equivalents).count(one_var_code(0, 2)) == 1);
  CHECK(classes[2].equivalents.size() == 1);
  CHECK(classes[3].equivalents.size() == 1);
  CHECK(classes[4].equivalents.size() == 1);
}

TEST_CASE("slotless defect is the mutual-information combination") {
  const SystemContext ctx = channel_pair_context(0);
  const Mask b1 = ctx.mask_of({"B1"}), e1 = ctx.mask_of({"E1"});
  const Mask b2 = ctx.mask_of({"B2"}), e2 = ctx.mask_of({"E2"});
  const DecouplingCode none{};

  CHECK(delta_functional(none, rv({1, 0, 0})) == F::cmi(ctx, b1, b2, 0));
  CHECK(delta_functional(none, rv({0, 1, 0})) == F::cmi(ctx, e1, e2, 0));
  CHECK(delta_functional(none, rv({0, 0, 1})) == F::cmi(ctx, b1 | e1, b2 | e2, 0));

  const RatVec mixed = rv({2, -1, 3});
  F expect = Rational(2) * F::cmi(ctx, b1, b2, 0) - F::cmi(ctx, e1, e2, 0);
  expect += Rational(3) * F::cmi(ctx, b1 | e1, b2 | e2, 0);
  CHECK(delta_functional(none, mixed) == expect);
}

TEST_CASE("full-dressing defect of the bare auxiliary term") {
  // With every output copied into the slot, the H(V) coefficient turns into
  // the cross-channel conditional mutual information plus a total entropy
  // that vanishes on pure joint states.
  const SystemContext ctx = channel_pair_context(1);
  const Mask b1e1 = ctx.mask_of({"B1", "E1"}), b2e2 = ctx.mask_of({"B2", "E2"});
  const Mask v = ctx.mask_of({"V"});
  const F delta = delta_functional(one_var_code(3, 3), rv({0, 0, 0, 1, 0, 0, 0}));
  CHECK(delta == F::cmi(ctx, b1e1, b2e2, v) + F::entropy(ctx, ctx.full_mask()));
}

namespace {

/// Transcribed per-term table for the one-slot expansion, indexed by the
/// carried subset (B or E) and the two slot labels.
F expected_esv(Mask s, int a, int b) {
  const SystemContext ctx = channel_pair_context(1);
  auto M = [&](std::vector<std::string> names) { return ctx.mask_of(names); };
  const Mask v = M({"V"});

  if (s == 1u) {
    switch (a * 4 + b) {
      case 0 * 4 + 0: return F::cmi(ctx, M({"B1"}), M({"B2"}), v);
      case 1 * 4 + 0: return F(ctx);
      case 2 * 4 + 0:
        return F::conditional(ctx, M({"B2"}), M({"E1"}) | v) -
               F::conditional(ctx, M({"B2"}), M({"B1"}) | v);
      case 3 * 4 + 0: return Rational(-1) * F::cmi(ctx, M({"E1"}), M({"B2"}), M({"B1"}) | v);
      case 0 * 4 + 1:
      case 1 * 4 + 1:
      case 2 * 4 + 1:
      case 3 * 4 + 1: return F(ctx);
      case 0 * 4 + 2:
        return F::conditional(ctx, M({"B1"}), M({"E2"}) | v) -
               F::conditional(ctx, M({"B1"}), M({"B2"}) | v);
      case 1 * 4 + 2: return F(ctx);
      case 2 * 4 + 2: {
        F f(ctx);
        f.add(M({"B1", "E2"}) | v, Rational(1));
        f.add(M({"E1", "B2"}) | v, Rational(1));
        f.add(M({"B1", "B2"}) | v, Rational(-1));
        f.add(M({"E1", "E2"}) | v, Rational(-1));
        return f;
      }
      case 3 * 4 + 2:
        return F::cmi(ctx, M({"E1"}), M({"E2"}), M({"B1"}) | v) -
               F::cmi(ctx, M({"E1"}), M({"B2"}), M({"B1"}) | v);
      case 0 * 4 + 3: return Rational(-1) * F::cmi(ctx, M({"B1"}), M({"E2"}), M({"B2"}) | v);
      case 1 * 4 + 3: return F(ctx);
      case 2 * 4 + 3:
        return F::cmi(ctx, M({"E2"}), M({"E1"}), M({"B2"}) | v) -
               F::cmi(ctx, M({"E2"}), M({"B1"}), M({"B2"}) | v);
      case 3 * 4 + 3: return F::cmi(ctx, M({"E1"}), M({"E2"}), M({"B1", "B2"}) | v);
    }
  }
  if (s == 2u) {
    switch (a * 4 + b) {
      case 0 * 4 + 0: return F::cmi(ctx, M({"E1"}), M({"E2"}), v);
      case 2 * 4 + 0: return F(ctx);
      case 1 * 4 + 0:
        return F::conditional(ctx, M({"E2"}), M({"B1"}) | v) -
               F::conditional(ctx, M({"E2"}), M({"E1"}) | v);
      case 3 * 4 + 0: return Rational(-1) * F::cmi(ctx, M({"B1"}), M({"E2"}), M({"E1"}) | v);
      case 0 * 4 + 2:
      case 1 * 4 + 2:
      case 2 * 4 + 2:
      case 3 * 4 + 2: return F(ctx);
      case 0 * 4 + 1:
        return F::conditional(ctx, M({"E1"}), M({"B2"}) | v) -
               F::conditional(ctx, M({"E1"}), M({"E2"}) | v);
      case 2 * 4 + 1: return F(ctx);
      case 1 * 4 + 1: {
        F f(ctx);
        f.add(M({"E1", "B2"}) | v, Rational(1));
        f.add(M({"B1", "E2"}) | v, Rational(1));
        f.add(M({"E1", "E2"}) | v, Rational(-1));
        f.add(M({"B1", "B2"}) | v, Rational(-1));
        return f;
      }
      case 3 * 4 + 1:
        return F::cmi(ctx, M({"B1"}), M({"B2"}), M({"E1"}) | v) -
               F::cmi(ctx, M({"B1"}), M({"E2"}), M({"E1"}) | v);
      case 0 * 4 + 3: return Rational(-1) * F::cmi(ctx, M({"E1"}), M({"B2"}), M({"E2"}) | v);
      case 2 * 4 + 3: return F(ctx);
      case 1 * 4 + 3:
        return F::cmi(ctx, M({"B2"}), M({"B1"}), M({"E2"}) | v) -
               F::cmi(ctx, M({"B2"}), M({"E1"}), M({"E2"}) | v);
      case 3 * 4 + 3: return F::cmi(ctx, M({"B1"}), M({"B2"}), M({"E1", "E2"}) | v);
    }
  }
  throw std::logic_error("expected_esv: bad entry");
}

}  // namespace

TEST_CASE("all 32 expansion terms match the transcribed table") {
  for (Mask s = 1; s <= 2; ++s)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        INFO("s=" << s << " a=" << a << " b=" << b);
        CHECK(esv_term(s, a, b) == expected_esv(s, a, b));
      }
}

TEST_CASE("edge expansion terms are conditional mutual informations") {
  const SystemContext ctx = channel_pair_context(1);
  const Mask v = ctx.mask_of({"V"});
  for (const auto& code : enumerate_standard(1)) {
    const auto [a, b] = code.slots[0];
    const Mask mh1 = detail::first_channel_mask(ctx, a);
    const Mask mt2 = detail::second_channel_mask(ctx, b);
    const Mask mh1c = ctx.mask_of({"B1", "E1"}) & ~mh1;
    const Mask mt2c = ctx.mask_of({"B2", "E2"}) & ~mt2;
    INFO(code.str());
    CHECK(esv_term(0u, code) == F::cmi(ctx, mh1, mt2, v));
    CHECK(esv_term(3u, code) == F::cmi(ctx, mh1c, mt2c, mh1 | mt2 | v));
  }
}

TEST_CASE("one-slot defect decomposes into slotless part plus expansion terms") {
  const SystemContext ctx = channel_pair_context(1);
  const Mask b1 = ctx.mask_of({"B1"}), e1 = ctx.mask_of({"E1"});
  const Mask b2 = ctx.mask_of({"B2"}), e2 = ctx.mask_of({"E2"});
  const Mask v = ctx.mask_of({"V"});
  Rng rng(404);

  for (const auto& code : enumerate_standard(1)) {
    const auto [a, b] = code.slots[0];
    const Mask mh1 = detail::first_channel_mask(ctx, a);
    const Mask mt2 = detail::second_channel_mask(ctx, b);
    for (int trial = 0; trial < 3; ++trial) {
      RatVec alpha(7);
      for (auto& x : alpha) x = Rational(static_cast<long>(rng.uniform_int(11)) - 5);

      F rhs = alpha[0] * F::cmi(ctx, b1, b2, 0) + alpha[1] * F::cmi(ctx, e1, e2, 0);
      rhs += alpha[2] * F::cmi(ctx, b1 | e1, b2 | e2, 0);
      Rational vsum;
      for (Mask s = 0; s < 4; ++s) {
        vsum += alpha[3 + s];
        rhs += alpha[3 + s] * esv_term(s, code);
      }
      rhs += vsum * F::entropy(ctx, mh1 | mt2 | v);

      INFO(code.str());
      CHECK(delta_functional(code, alpha) == rhs);
    }
  }
}

TEST_CASE("defect functional evaluates consistently on random classical states") {
  Rng rng(505);
  const SystemContext ctx = channel_pair_context(1);
  const DecouplingCode code = one_var_code(3, 1);
  for (int trial = 0; trial < 10; ++trial) {
    RatVec alpha(7);
    for (auto& x : alpha) x = Rational(static_cast<long>(rng.uniform_int(7)) - 3);
    const F delta = delta_functional(code, alpha);
    const ClassicalDistribution d = random_distribution(ctx.names, {2, 2, 2, 2, 2}, rng);
    const EntropyVector hv = entropy_vector(d);

    // Re-derive the three dressed formula values through explicit relabeling.
    const F f = alpha_to_formula(AlphaSpace(1), alpha);
    const double v1 = f.relabel_by_name(ctx, {{"B1"}, {"E1"}, {"B2", "V"}}).evaluate(hv);
    const double v2 = f.relabel_by_name(ctx, {{"B2"}, {"E2"}, {"B1", "E1", "V"}}).evaluate(hv);
    const double vj = f.relabel_by_name(ctx, {{"B1", "B2"}, {"E1", "E2"}, {"V"}}).evaluate(hv);
    CHECK(delta.evaluate(hv) == Catch::Approx(v1 + v2 - vj).margin(1e-9));
  }
}
