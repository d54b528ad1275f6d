#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "addicone/additivity.hpp"
#include "addicone/entropy.hpp"
#include "addicone/json_io.hpp"
#include "addicone/numlab.hpp"
#include "addicone/rng.hpp"

namespace addicone {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
  json counterexample;  // first failing object, serialized for the CLI
};

struct VerifySummary {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }

  json to_json() const {
    json j;
    j["suite"] = suite;
    j["passed"] = passed();
    j["checks"] = json::array();
    for (const auto& c : checks) {
      json jc;
      jc["name"] = c.name;
      jc["passed"] = c.passed;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      if (!c.passed && !c.counterexample.is_null()) jc["counterexample"] = c.counterexample;
      j["checks"].push_back(std::move(jc));
    }
    return j;
  }
};

namespace detail {

inline std::vector<DecouplingCode> all_block_codes() {
  std::vector<DecouplingCode> out{DecouplingCode{}};
  for (const auto& c : enumerate_standard(1)) out.push_back(c);
  return out;
}

/// Random integer coefficient vector on the boundedness subspace.
inline RatVec random_bounded_alpha(const AlphaSpace& sp, Rng& rng) {
  RatVec alpha(sp.dim(), Rational(0));
  for (std::size_t i = 0; i < sp.dim(); ++i)
    alpha[i] = Rational(static_cast<long>(rng.uniform_int(7)) - 3);
  for (Mask t = 1; t < sp.aux_blocks(); ++t) {
    Rational sum(0);
    for (Mask s = 0; s < 3; ++s) sum += alpha[sp.index(t, s)];
    alpha[sp.index(t, 3)] = -sum;
  }
  return alpha;
}

inline bool recheck_certificate(const Certificate& cert, const std::vector<RatVec>& tails,
                                const RatVec& target_tail) {
  if (!cert.member) return false;
  if (cert.multipliers.size() != tails.size()) return false;
  RatVec acc(target_tail.size(), Rational(0));
  for (std::size_t i = 0; i < tails.size(); ++i) {
    if (cert.multipliers[i].sign() < 0) return false;
    if (cert.multipliers[i].is_zero()) continue;
    acc = axpy(std::move(acc), cert.multipliers[i], tails[i]);
  }
  return acc == target_tail;
}

inline RatVec block_delta_tail(const DecouplingCode& code, const RatVec& block) {
  const AlphaSpace sp(code.n_aux());
  const RatVec alpha = code.n_aux() == 0 ? block : embed_block_vector(sp, 1, block);
  return delta_functional(code, alpha).coeffs_tail();
}

}  // namespace detail

/// Witness suite: every library state compiles to a valid distribution whose
/// sampled entropies match its exact integer table, the symbolic defect form
/// agrees with the defect evaluated on the compiled state, and each form is a
/// valid outer inequality of its block cone (nonnegative on rays, zero on
/// lineality, tight on at least one facet). Lifts are rechecked symbolically.
inline VerifySummary verify_witnesses() {
  VerifySummary sum;
  sum.suite = "witnesses";

  for (const auto& w : witness_library()) {
    const SystemContext ctx = w.context();
    const RatVec table = exact_entropy_table(w);
    const ClassicalDistribution d = compile_witness(w);

    CheckResult compile{"compile:" + w.name};
    if (!d.valid(1e-12)) {
      compile.passed = false;
      compile.detail = "compiled distribution is not normalized";
      compile.counterexample = to_json(d);
    } else {
      double worst = 0.0;
      Mask worst_mask = 0;
      for (Mask m = 1; m <= ctx.full_mask(); ++m) {
        const double diff = std::fabs(shannon_entropy(d, m) - table[m].to_double());
        if (diff > worst) { worst = diff; worst_mask = m; }
      }
      if (worst > 1e-9) {
        compile.passed = false;
        compile.detail = "entropy mismatch on " + ctx.label(worst_mask);
        compile.counterexample = {{"witness", w.name}, {"subset", ctx.label(worst_mask)},
                                  {"difference", worst}};
      }
    }
    sum.checks.push_back(std::move(compile));

    CheckResult dual{"dual-route:" + w.name};
    const RatVec form = witness_delta_form(w);
    const EntropyVector hv = entropy_vector(d);
    Rng rng(0x5eedULL + form.size());
    const AlphaSpace sp(w.code.n_aux());
    for (int trial = 0; trial < 5 && dual.passed; ++trial) {
      const RatVec alpha = detail::random_bounded_alpha(sp, rng);
      const double exact = dot(form, alpha).to_double();
      const double sampled = delta_functional(w.code, alpha).evaluate(hv);
      if (std::fabs(exact - sampled) > 1e-9) {
        dual.passed = false;
        dual.detail = "symbolic and state-evaluated defects disagree";
        dual.counterexample = {{"witness", w.name}, {"alpha", ratvec_to_json(alpha)},
                               {"symbolic", exact}, {"evaluated", sampled}};
      }
    }
    sum.checks.push_back(std::move(dual));

    CheckResult expect{"expected-form:" + w.name};
    if (form != w.expected_delta) {
      expect.passed = false;
      expect.detail = "compiled defect form differs from the declared one";
      expect.counterexample = {{"witness", w.name}, {"compiled", ratvec_to_json(form)},
                               {"declared", ratvec_to_json(w.expected_delta)}};
    }
    sum.checks.push_back(std::move(expect));
  }

  for (const auto& code : detail::all_block_codes()) {
    const BlockCone& b = detail::cached_block_cone(code);
    const std::string tag = code.n_aux() == 0 ? "()" : code.str();

    CheckResult outer{"outer-face:" + tag};
    for (const auto& rec : b.witnesses) {
      for (const auto& r : b.rays)
        if (dot(rec.form, r.vector).sign() < 0) {
          outer.passed = false;
          outer.detail = rec.spec.name + " negative on an extreme ray";
          outer.counterexample = {{"witness", rec.spec.name}, {"ray", ratvec_to_json(r.vector)}};
        }
      for (const auto& l : b.lineality)
        if (!dot(rec.form, l.vector).is_zero()) {
          outer.passed = false;
          outer.detail = rec.spec.name + " not constant along the lineality space";
          outer.counterexample = {{"witness", rec.spec.name}, {"direction", ratvec_to_json(l.vector)}};
        }
    }
    sum.checks.push_back(std::move(outer));

    CheckResult cover{"facet-coverage:" + tag};
    std::vector<bool> covered(b.hrep.ineqs.size(), false);
    for (const auto& rec : b.witnesses)
      for (std::size_t i : rec.tight_facets) covered[i] = true;
    for (std::size_t i = 0; i < covered.size(); ++i)
      if (!covered[i]) {
        cover.passed = false;
        cover.detail = "facet without a tight witness";
        cover.counterexample = {{"facet", ratvec_to_json(b.hrep.ineqs[i])}};
      }
    sum.checks.push_back(std::move(cover));

    CheckResult expect{"expected-form:" + tag};
    for (const auto& rec : b.witnesses) {
      if (rec.spec.expected_delta.empty()) {
        expect.passed = false;
        expect.detail = rec.spec.name + " has no declared defect form";
        expect.counterexample = {{"witness", rec.spec.name}};
      } else if (witness_delta_form(rec.spec) != rec.spec.expected_delta) {
        expect.passed = false;
        expect.detail = rec.spec.name + " compiled defect form differs from the declared one";
        expect.counterexample = {{"witness", rec.spec.name},
                                 {"declared", ratvec_to_json(rec.spec.expected_delta)}};
      }
    }
    sum.checks.push_back(std::move(expect));
  }

  // Lift identity: the lifted witness's defect form on the full space equals
  // the block form pulled back through the block extraction, on the
  // boundedness subspace.
  std::vector<DecouplingCode> lift_targets;
  {
    DecouplingCode c1;
    c1.slots = {{3, 3}, {1, 1}};
    DecouplingCode c2;
    c2.slots = {{1, 2}, {3, 0}, {0, 0}};
    lift_targets = {c1, c2};
  }
  for (const auto& code : lift_targets) {
    const int n = code.n_aux();
    const AlphaSpace sp(n);
    Rng rng(0xf17eULL + static_cast<std::uint64_t>(n));
    for (Mask t = 0; t < (Mask{1} << n); ++t) {
      const DecouplingCode block = induced_block_code(code, t);
      CheckResult lift{"lift:" + code.str() + ":t=" + std::to_string(t)};
      for (const auto& w : witnesses_for(block)) {
        const WitnessSpec lifted = lift_witness(w, code, t);
        const RatVec lifted_form = witness_delta_form(lifted);
        const RatVec block_form = witness_delta_form(w);
        for (int trial = 0; trial < 4 && lift.passed; ++trial) {
          const RatVec alpha = detail::random_bounded_alpha(sp, rng);
          const Rational full_val = dot(lifted_form, alpha);
          const RatVec at = extract_block_vector(sp, t, alpha);
          const Rational block_val =
              dot(block_form, t == 0 ? at : embed_block_vector(AlphaSpace(1), 1, at));
          if (full_val != block_val) {
            lift.passed = false;
            lift.detail = lifted.name + " does not reduce to its block defect";
            lift.counterexample = {{"witness", lifted.name}, {"alpha", ratvec_to_json(alpha)},
                                   {"full", full_val.str()}, {"block", block_val.str()}};
          }
        }
      }
      sum.checks.push_back(std::move(lift));
    }
  }
  return sum;
}

/// Certificate suite: rebuilds every block cone and replays each stored conic
/// decomposition exactly (multipliers nonnegative, combination reproduces the
/// target functional), both directions for lineality; rays must satisfy the
/// facet system they were derived from.
inline VerifySummary verify_certificates() {
  VerifySummary sum;
  sum.suite = "certificates";

  for (const auto& code : detail::all_block_codes()) {
    const BlockCone& b = detail::cached_block_cone(code);
    const std::string tag = code.n_aux() == 0 ? "()" : code.str();
    const auto& tails = detail::basic_generator_tails(code.n_aux());

    CheckResult rays{"ray-certificates:" + tag};
    for (const auto& r : b.rays) {
      const RatVec target = detail::block_delta_tail(code, r.vector);
      if (!detail::recheck_certificate(r.certificate, tails, target)) {
        rays.passed = false;
        rays.detail = "decomposition of " + r.formula + " failed exact replay";
        rays.counterexample = {{"ray", ratvec_to_json(r.vector)}, {"formula", r.formula}};
      }
    }
    sum.checks.push_back(std::move(rays));

    CheckResult lines{"lineality-certificates:" + tag};
    for (const auto& l : b.lineality) {
      const RatVec fwd = detail::block_delta_tail(code, l.vector);
      const RatVec bwd = detail::block_delta_tail(code, scaled(l.vector, Rational(-1)));
      if (!detail::recheck_certificate(l.certificate, tails, fwd) ||
          !detail::recheck_certificate(l.certificate_reverse, tails, bwd)) {
        lines.passed = false;
        lines.detail = "bidirectional decomposition of " + l.formula + " failed exact replay";
        lines.counterexample = {{"direction", ratvec_to_json(l.vector)}, {"formula", l.formula}};
      }
    }
    sum.checks.push_back(std::move(lines));

    CheckResult geom{"geometry:" + tag};
    for (const auto& r : b.vrep.rays)
      if (!cone_contains(b.hrep, r)) {
        geom.passed = false;
        geom.detail = "extreme ray escapes the facet system";
        geom.counterexample = {{"ray", ratvec_to_json(r)}};
      }
    for (const auto& l : b.vrep.lineality) {
      if (!cone_contains(b.hrep, l) || !cone_contains(b.hrep, scaled(l, Rational(-1)))) {
        geom.passed = false;
        geom.detail = "lineality direction escapes the facet system";
        geom.counterexample = {{"direction", ratvec_to_json(l)}};
      }
    }
    sum.checks.push_back(std::move(geom));
  }
  return sum;
}

/// Numeric suite: every certified extreme direction of every block cone is
/// re-tested against freshly sampled classical and quantum states; the
/// sampled defect may not dip below -1e-8.
inline VerifySummary verify_numeric(int samples, std::uint64_t seed) {
  VerifySummary sum;
  sum.suite = "numeric";
  const int quantum_samples = samples >= 10 ? samples / 5 : 2;

  for (const auto& code : detail::all_block_codes()) {
    const BlockCone& b = detail::cached_block_cone(code);
    const std::string tag = code.n_aux() == 0 ? "()" : code.str();
    const AlphaSpace sp(code.n_aux());
    DeltaCheckDims dims;
    if (code.n_aux() == 1) dims.aux = {2};

    CheckResult check{"sampled-defect:" + tag};
    std::vector<std::pair<RatVec, std::string>> dirs;
    for (const auto& r : b.rays) dirs.emplace_back(r.vector, r.formula);
    for (const auto& l : b.lineality) {
      dirs.emplace_back(l.vector, l.formula);
      dirs.emplace_back(scaled(l.vector, Rational(-1)), "-(" + l.formula + ")");
    }
    for (const auto& [v, formula] : dirs) {
      const RatVec alpha = code.n_aux() == 0 ? v : embed_block_vector(sp, 1, v);
      const double c_min = numeric_delta_check(alpha, code, samples, dims, seed, SampleKind::Classical);
      const double q_min =
          numeric_delta_check(alpha, code, quantum_samples, dims, seed + 1, SampleKind::Quantum);
      if (c_min < -1e-8 || q_min < -1e-8) {
        check.passed = false;
        check.detail = "sampled defect negative along " + formula;
        check.counterexample = {{"direction", ratvec_to_json(v)}, {"formula", formula},
                                {"classical_min", c_min}, {"quantum_min", q_min}};
        break;
      }
    }
    sum.checks.push_back(std::move(check));
  }
  return sum;
}

/// Coincidence suite: for the variable-free block and all one-slot codes, the
/// extreme directions certify against the classical elemental set as well, so
/// the classical and quantum additive cones agree block by block.
inline VerifySummary verify_coincidence() {
  VerifySummary sum;
  sum.suite = "coincidence";
  for (const auto& code : detail::all_block_codes()) {
    const std::string tag = code.n_aux() == 0 ? "()" : code.str();
    const CoincidenceReport rep = coincidence_check(code);
    const auto& tails = detail::classical_generator_tails(code.n_aux());

    CheckResult check{"coincidence:" + tag};
    if (!rep.coincide) {
      check.passed = false;
      check.detail = "a direction failed classical certification";
    }
    for (const auto& r : rep.rays) {
      const RatVec target = detail::block_delta_tail(code, r.vector);
      if (!detail::recheck_certificate(r.certificate, tails, target)) {
        check.passed = false;
        check.detail = "classical decomposition of " + r.formula + " failed exact replay";
        check.counterexample = {{"ray", ratvec_to_json(r.vector)}};
      }
    }
    for (const auto& l : rep.lineality) {
      const RatVec fwd = detail::block_delta_tail(code, l.vector);
      const RatVec bwd = detail::block_delta_tail(code, scaled(l.vector, Rational(-1)));
      if (!detail::recheck_certificate(l.certificate, tails, fwd) ||
          !detail::recheck_certificate(l.certificate_reverse, tails, bwd)) {
        check.passed = false;
        check.detail = "classical decomposition of " + l.formula + " failed exact replay";
        check.counterexample = {{"direction", ratvec_to_json(l.vector)}};
      }
    }
    sum.checks.push_back(std::move(check));
  }
  return sum;
}

inline std::vector<VerifySummary> verify_all(int samples, std::uint64_t seed) {
  return {verify_witnesses(), verify_certificates(), verify_numeric(samples, seed),
          verify_coincidence()};
}

}  // namespace addicone
