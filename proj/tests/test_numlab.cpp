#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "addicone/numlab.hpp"

using namespace addicone;

namespace {

RatVec rv(std::vector<int> v) {
  RatVec out;
  for (int x : v) out.emplace_back(x);
  return out;
}

double hbin(double x) {
  double s = 0.0;
  if (x > 0.0) s -= x * std::log2(x);
  if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

}  // namespace

TEST_CASE("standard channels are valid isometries") {
  CHECK(identity_channel(2).valid());
  CHECK(identity_channel(3).valid());
  CHECK(swap_to_environment_channel(2).valid());
  CHECK(dephasing_channel(3).valid());
  CHECK(erasure_channel(2, 0.5).valid());
  CHECK(erasure_channel(2, 0.0).valid());
  Rng rng(11);
  CHECK(random_channel(2, 2, 2, rng).valid());
  CHECK(random_channel(3, 2, 4, rng).valid());
  CHECK_THROWS_AS(erasure_channel(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(random_channel(4, 1, 3, rng), std::invalid_argument);
}

TEST_CASE("Kraus dilation records the acting operator in the environment") {
  // Amplitude damping with gamma = 0.36.
  const double g = 0.36;
  CMat k0(2, 2), k1(2, 2);
  k0.at(0, 0) = 1.0;
  k0.at(1, 1) = std::sqrt(1.0 - g);
  k1.at(0, 1) = std::sqrt(g);
  const IsometryChannel ch = channel_from_kraus({k0, k1});
  CHECK(ch.d_in == 2);
  CHECK(ch.d_b == 2);
  CHECK(ch.d_e == 2);
  CHECK(ch.valid());
}

TEST_CASE("coherent information of the qubit identity channel") {
  // Sweep oracle over Schmidt inputs sqrt(l)|00> + sqrt(1-l)|11>:
  // the output entropy is the binary entropy of l, maximal at 1/2.
  double oracle = 0.0;
  for (int i = 0; i <= 64; ++i) oracle = std::max(oracle, hbin(static_cast<double>(i) / 64.0));
  REQUIRE(oracle == Catch::Approx(1.0).margin(1e-12));

  OptimizerConfig cfg;
  cfg.seed = 21;
  const MaximizeResult r = maximize_formula(rv({1, -1, 0}), identity_channel(2), {}, cfg);
  CHECK(r.value == Catch::Approx(oracle).margin(1e-3));

  // The reported argmax reproduces the reported value.
  const LinearEntropyFunctional f = alpha_to_formula(AlphaSpace(0), rv({1, -1, 0}));
  const double replay = f.evaluate(entropy_vector_as(r.output, formula_context(0)));
  CHECK(replay == Catch::Approx(r.value).margin(1e-9));
}

TEST_CASE("completely coherent information of the qubit identity channel") {
  // With a trivial environment H(VB) - H(VE) = H(B|V); the classical-quantum
  // sweep with a two-valued V bounds it by the mixture of binary entropies.
  double oracle = 0.0;
  for (int ip = 0; ip <= 32; ++ip)
    for (int i1 = 0; i1 <= 32; ++i1)
      for (int i2 = 0; i2 <= 32; ++i2) {
        const double p = static_cast<double>(ip) / 32.0;
        oracle = std::max(oracle, p * hbin(static_cast<double>(i1) / 32.0) +
                                      (1.0 - p) * hbin(static_cast<double>(i2) / 32.0));
      }
  REQUIRE(oracle == Catch::Approx(1.0).margin(1e-12));

  OptimizerConfig cfg;
  cfg.seed = 22;
  const RatVec alpha = rv({0, 0, 0, 0, 1, -1, 0});  // H(VB) - H(VE)
  const MaximizeResult r = maximize_formula(alpha, identity_channel(2), {2}, cfg);
  CHECK(r.value == Catch::Approx(oracle).margin(1e-3));
}

TEST_CASE("coherent information vanishes on the symmetric erasure channel") {
  OptimizerConfig cfg;
  cfg.seed = 23;
  const MaximizeResult r = maximize_formula(rv({1, -1, 0}), erasure_channel(2, 0.5), {}, cfg);
  CHECK(std::fabs(r.value) < 1e-9);
}

TEST_CASE("auxiliary-space guard rails") {
  OptimizerConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(maximize_formula(rv({1, -1, 0}), identity_channel(2), {}, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(maximize_formula(RatVec(7, Rational(0)), identity_channel(2), {17, 17}),
                  std::invalid_argument);
}

TEST_CASE("identity channel shows no informational degradability violation") {
  OptimizerConfig cfg;
  cfg.seed = 31;
  const DegradabilityReport rep = informational_degradability_check(identity_channel(2), 3, cfg);
  CHECK(!rep.violated);
  CHECK(rep.worst_margin >= -1e-6);
  CHECK(rep.verdict == "no violation found");
}

TEST_CASE("copy channel sits exactly on the degradability boundary") {
  OptimizerConfig cfg;
  cfg.seed = 32;
  const DegradabilityReport rep = informational_degradability_check(dephasing_channel(2), 3, cfg);
  CHECK(!rep.violated);
  CHECK(std::fabs(rep.worst_margin) <= 1e-6);
}

TEST_CASE("swap-to-environment channel is refuted with an explicit witness") {
  OptimizerConfig cfg;
  cfg.seed = 33;
  const IsometryChannel ch = swap_to_environment_channel(2);
  const DegradabilityReport rep = informational_degradability_check(ch, 3, cfg);
  REQUIRE(rep.violated);
  CHECK(rep.worst_margin < -1.0);
  REQUIRE(!rep.witness.empty());

  // Replay the witness through the margin functional.
  const SystemContext fctx = formula_context(1);
  const LinearEntropyFunctional margin =
      LinearEntropyFunctional::cmi(fctx, fctx.mask_of({"V"}), fctx.mask_of({"B"}), 0) -
      LinearEntropyFunctional::cmi(fctx, fctx.mask_of({"V"}), fctx.mask_of({"E"}), 0);
  const DensityMatrix rho = channel_output_state(ch, rep.witness, 1, {rep.d_v});
  const double replay = margin.evaluate(entropy_vector_as(rho, fctx));
  CHECK(replay == Catch::Approx(rep.worst_margin).margin(1e-9));
  CHECK(replay < -1e-6);
}

TEST_CASE("classical-quantum criterion accepts a correlated register state") {
  DensityMatrix rho({"R1", "R2", "R3", "A"}, {2, 2, 2, 2});
  rho.m.at(0, 0) = 0.7;    // |0000>
  rho.m.at(15, 15) = 0.3;  // |1111>
  REQUIRE(rho.valid(1e-12));
  const CqReport rep = cq_criterion_check(rho);
  CHECK(rep.conditions_hold);
  CHECK(rep.cq_confirmed);
  CHECK(rep.dephasing_distance <= 1e-9);
  CHECK(rep.conditions.size() == 9);
  for (const auto& [name, v] : rep.conditions) {
    INFO(name);
    CHECK(std::fabs(v) <= 1e-9);
  }
}

TEST_CASE("classical-quantum criterion accepts the uniform copied bit") {
  DensityMatrix rho({"R1", "R2", "R3", "A"}, {2, 2, 2, 2});
  rho.m.at(0, 0) = 0.5;
  rho.m.at(15, 15) = 0.5;
  const CqReport rep = cq_criterion_check(rho);
  CHECK(rep.conditions_hold);
  CHECK(rep.cq_confirmed);
}

TEST_CASE("classical-quantum criterion rejects an entangled register pair") {
  std::vector<cplx> bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  const DensityMatrix rho = pure_state({"R1", "R2", "R3", "A"}, {2, 2, 1, 1}, bell);
  const CqReport rep = cq_criterion_check(rho);
  CHECK(!rep.conditions_hold);
  CHECK(!rep.cq_confirmed);
  bool saw_negative = false;
  for (const auto& [name, v] : rep.conditions)
    if (v < -0.9) saw_negative = true;
  CHECK(saw_negative);
}

TEST_CASE("sampled defects stay nonnegative for an additive direction") {
  // H(BV) - H(EV) embedded in the (3,1) slot block, a certified ray.
  const RatVec alpha = rv({0, 0, 0, 1, 0, -1, 0});
  DeltaCheckDims dims;
  dims.aux = {2};
  const double mc = numeric_delta_check(alpha, one_var_code(3, 1), 15, dims, 41,
                                        SampleKind::Classical);
  CHECK(mc >= -1e-8);
  const double mq = numeric_delta_check(alpha, one_var_code(3, 1), 2, dims, 42,
                                        SampleKind::Quantum);
  CHECK(mq >= -1e-8);
  DeltaCheckDims bad;
  CHECK_THROWS_AS(numeric_delta_check(alpha, one_var_code(3, 1), 1, bad, 1), std::invalid_argument);
}

TEST_CASE("coherent information is additive for a pair of identity channels") {
  OptimizerConfig cfg;
  cfg.seed = 51;
  const SpotCheckResult r = additivity_spot_check(identity_channel(2), identity_channel(2),
                                                  rv({1, -1, 0}), {}, cfg);
  CHECK(r.single_value_1 == Catch::Approx(1.0).margin(1e-3));
  CHECK(r.single_value_2 == Catch::Approx(1.0).margin(1e-3));
  CHECK(r.joint_value == Catch::Approx(2.0).margin(1e-3));
  CHECK(std::fabs(r.gap) <= 1e-3);
  CHECK(!r.telescoping_checked);
}

TEST_CASE("output entropy is additive for a pair of identity channels") {
  OptimizerConfig cfg;
  cfg.seed = 52;
  const SpotCheckResult r = additivity_spot_check(identity_channel(2), identity_channel(2),
                                                  rv({1, 0, 0}), {}, cfg);
  CHECK(r.joint_value == Catch::Approx(2.0).margin(1e-3));
  CHECK(std::fabs(r.gap) <= 1e-3);
}

TEST_CASE("copy channels satisfy the telescoping chain at the joint optimum") {
  OptimizerConfig cfg;
  cfg.seed = 53;
  const SpotCheckResult r = additivity_spot_check(dephasing_channel(2), dephasing_channel(2),
                                                  rv({1, -1, 0}), {}, cfg, true);
  CHECK(std::fabs(r.gap) <= 1e-3);
  REQUIRE(r.telescoping_checked);
  CHECK(r.telescoping_slack >= -1e-6);
}
