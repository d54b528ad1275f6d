#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "addicone/entropy.hpp"
#include "addicone/inequalities.hpp"
#include "addicone/quantum.hpp"
#include "addicone/rng.hpp"
#include "addicone/simplex.hpp"

using namespace addicone;

namespace {

SystemContext vars(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
  return SystemContext(std::move(names));
}

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

DensityMatrix random_mixed_state(const SystemContext& ctx, int local_dim, Rng& rng) {
  std::vector<std::string> names = ctx.names;
  names.push_back("purifier");
  std::vector<int> dims(ctx.n(), local_dim);
  const std::size_t sys_dim = static_cast<std::size_t>(ipow(local_dim, static_cast<int>(ctx.n())));
  dims.push_back(static_cast<int>(sys_dim));
  const auto psi = random_state_vector(sys_dim * sys_dim, rng);
  const DensityMatrix full = pure_state(names, dims, psi);
  return partial_trace(full, ctx.full_mask());
}

}  // namespace

TEST_CASE("elemental instance count matches the closed form") {
  // n single-variable conditionals plus C(n,2) * 2^(n-2) conditional mutual
  // informations (every subset of the remaining n-2 variables can condition).
  for (int n = 1; n <= 5; ++n) {
    const auto set = classical_elemental_set(vars(n));
    long expected = n;
    if (n >= 2) expected += (static_cast<long>(n) * (n - 1) / 2) * ipow(2, n - 2);
    CHECK(static_cast<long>(set.size()) == expected);
  }
  CHECK(classical_elemental_set(vars(3)).size() == 9);
}

TEST_CASE("elemental instances for one variable reduce to plain entropy") {
  const auto set = classical_elemental_set(vars(1));
  REQUIRE(set.size() == 1);
  CHECK(set[0].f == LinearEntropyFunctional::entropy(vars(1), 1u));
}

TEST_CASE("quantum basic set size matches an independent count") {
  // Closed forms: P(n) unordered disjoint nonempty pairs, T(n) such pairs
  // together with a nonempty disjoint conditioner.
  auto P = [](int n) { return (ipow(3, n) - ipow(2, n + 1) + 1) / 2; };
  auto T = [](int n) { return (ipow(4, n) - 3 * ipow(3, n) + 3 * ipow(2, n) - 1) / 2; };
  for (int n = 1; n <= 5; ++n) {
    const long expected = (ipow(2, n) - 1) + 2 * T(n) + 3 * P(n);
    CHECK(static_cast<long>(quantum_basic_set(vars(n)).size()) == expected);
  }
  CHECK(quantum_basic_set(vars(2)).size() == 6);
  CHECK(quantum_basic_set(vars(5)).size() == 691);
}

TEST_CASE("quantum basic set family breakdown at two variables") {
  std::map<InequalityFamily, int> counts;
  for (const auto& inst : quantum_basic_set(vars(2))) counts[inst.family]++;
  CHECK(counts[InequalityFamily::NonNegativity] == 3);
  CHECK(counts[InequalityFamily::StrongSubadditivity] == 0);
  CHECK(counts[InequalityFamily::WeakMonotonicity] == 0);
  CHECK(counts[InequalityFamily::Subadditivity] == 1);
  CHECK(counts[InequalityFamily::ArakiLieb] == 2);
}

TEST_CASE("elemental inequalities hold on random classical distributions") {
  Rng rng(101);
  const SystemContext ctx = vars(3);
  const auto set = classical_elemental_set(ctx);
  for (int trial = 0; trial < 20; ++trial) {
    const ClassicalDistribution d = random_distribution(ctx.names, {2, 3, 2}, rng);
    const EntropyVector hv = entropy_vector(d);
    for (const auto& inst : set) {
      INFO(inst.name);
      CHECK(inst.f.evaluate(hv) >= -1e-9);
    }
  }
}

TEST_CASE("basic quantum inequalities hold on random density matrices") {
  Rng rng(202);
  const SystemContext ctx = vars(3);
  const auto set = quantum_basic_set(ctx);
  for (int trial = 0; trial < 8; ++trial) {
    const DensityMatrix rho = random_mixed_state(ctx, 2, rng);
    REQUIRE(rho.valid(1e-8));
    const EntropyVector hv = entropy_vector_as(rho, ctx);
    for (const auto& inst : set) {
      INFO(inst.name);
      CHECK(inst.f.evaluate(hv) >= -1e-7);
    }
  }
}

TEST_CASE("conditional entropy is negative on the Bell pair") {
  const SystemContext ctx = vars(2);
  std::vector<std::complex<double>> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  const DensityMatrix rho = pure_state(ctx.names, {2, 2}, bell);
  const EntropyVector hv = entropy_vector_as(rho, ctx);
  const auto cond = LinearEntropyFunctional::conditional(ctx, 1u, 2u);
  CHECK(cond.evaluate(hv) == Catch::Approx(-1.0).margin(1e-9));
}

TEST_CASE("conditional entropy is outside the cone of basic quantum inequalities") {
  const SystemContext ctx = vars(2);
  const auto cond = LinearEntropyFunctional::conditional(ctx, 1u, 2u);
  std::vector<RatVec> tails;
  for (const auto& inst : quantum_basic_set(ctx)) tails.push_back(inst.f.coeffs_tail());
  const Certificate c = dual_membership(cond.coeffs_tail(), tails);
  REQUIRE(!c.member);

  // The separator plays the role of an entropy vector that obeys every basic
  // inequality yet gives the target a negative value; the Bell pair is the
  // canonical such vector, so check it separates too.
  for (const auto& t : tails) CHECK(dot(c.separator, t).sign() >= 0);
  CHECK(dot(c.separator, cond.coeffs_tail()).sign() < 0);

  RatVec bell_tail;  // H(X1)=H(X2)=1, H(X1X2)=0
  bell_tail.emplace_back(1);
  bell_tail.emplace_back(1);
  bell_tail.emplace_back(0);
  for (const auto& t : tails) CHECK(dot(bell_tail, t).sign() >= 0);
  CHECK(dot(bell_tail, cond.coeffs_tail()).sign() < 0);
}

TEST_CASE("conditional entropy is inside the classical elemental cone") {
  const SystemContext ctx = vars(2);
  const auto cond = LinearEntropyFunctional::conditional(ctx, 1u, 2u);
  std::vector<RatVec> tails;
  for (const auto& inst : classical_elemental_set(ctx)) tails.push_back(inst.f.coeffs_tail());
  CHECK(dual_membership(cond.coeffs_tail(), tails).member);

  // Shannon identity H(X1) = H(X1|X2) + I(X1;X2) exhibits plain entropy as a
  // conic combination as well.
  const auto h1 = LinearEntropyFunctional::entropy(ctx, 1u);
  const Certificate c = dual_membership(h1.coeffs_tail(), tails);
  REQUIRE(c.member);
  RatVec acc(h1.coeffs_tail().size(), Rational(0));
  for (std::size_t i = 0; i < tails.size(); ++i) acc = axpy(std::move(acc), c.multipliers[i], tails[i]);
  CHECK(acc == h1.coeffs_tail());
}

TEST_CASE("mutual information instances vanish on product distributions") {
  Rng rng(303);
  const SystemContext ctx = vars(2);
  const ClassicalDistribution a = random_distribution({"X1"}, {3}, rng);
  const ClassicalDistribution b = random_distribution({"X2"}, {4}, rng);
  ClassicalDistribution prod(ctx.names, {3, 4});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) prod.at({i, j}) = a.p[static_cast<std::size_t>(i)] * b.p[static_cast<std::size_t>(j)];
  REQUIRE(prod.valid(1e-9));
  const EntropyVector hv = entropy_vector(prod);
  const auto mi = LinearEntropyFunctional::cmi(ctx, 1u, 2u, 0u);
  CHECK(mi.evaluate(hv) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("instance names render readably") {
  const auto set = quantum_basic_set(vars(2));
  bool saw_nonneg = false, saw_subadd = false;
  for (const auto& inst : set) {
    if (inst.name == "H(X1)") saw_nonneg = true;
    if (inst.name == "I(X1;X2)") saw_subadd = true;
  }
  CHECK(saw_nonneg);
  CHECK(saw_subadd);
  CHECK(std::string(family_name(InequalityFamily::StrongSubadditivity)) == "strong-subadditivity");
}
