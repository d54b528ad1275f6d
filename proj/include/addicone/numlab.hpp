#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/channel.hpp"
#include "addicone/decoupling.hpp"
#include "addicone/distribution.hpp"
#include "addicone/entropy.hpp"
#include "addicone/functional.hpp"
#include "addicone/parallel.hpp"
#include "addicone/quantum.hpp"
#include "addicone/rng.hpp"

namespace addicone {

struct OptimizerConfig {
  int restarts = 6;
  int iterations = 160;
  double step = 0.3;        // initial ascent step
  double fd_step = 1e-4;    // central-difference half-width
  double tolerance = 1e-9;  // step floor treated as converged
  std::uint64_t seed = 7;
  int aux_dim = 0;   // 0: default d_in^2 where an auxiliary is needed
  int purifier = 0;  // 0: full-rank purifier

  bool valid() const {
    return restarts > 0 && iterations > 0 && step > 0.0 && fd_step > 0.0 && tolerance > 0.0;
  }
};

/// Ginibre-induced random mixed state on the named systems (full rank).
inline DensityMatrix sample_state(const std::vector<std::string>& names,
                                  const std::vector<int>& dims, std::uint64_t seed) {
  DensityMatrix rho(names, dims);
  const std::size_t d = rho.total_dim();
  if (d > 64) throw std::invalid_argument("sample_state: dimension cap exceeded");
  Rng rng(seed);
  CMat g(d, d);
  for (auto& x : g.a) x = cplx(rng.gaussian(), rng.gaussian());
  const CMat m = g * dagger(g);
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) tr += m.at(i, i).real();
  rho.m = m;
  for (auto& x : rho.m.a) x /= tr;
  return rho;
}

inline DensityMatrix sample_state(const std::vector<int>& dims, std::uint64_t seed) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dims.size(); ++i) names.push_back("X" + std::to_string(i + 1));
  return sample_state(names, dims, seed);
}

/// Haar-random pure state on the named systems.
inline DensityMatrix sample_pure_state(const std::vector<std::string>& names,
                                       const std::vector<int>& dims, std::uint64_t seed) {
  std::size_t d = 1;
  for (int x : dims) d *= static_cast<std::size_t>(x);
  if (d > 64) throw std::invalid_argument("sample_pure_state: dimension cap exceeded");
  Rng rng(seed);
  return pure_state(names, dims, random_state_vector(d, rng));
}

namespace detail {

/// Multi-restart projected ascent on the unit sphere of R^m; the objective
/// must handle any nonzero parameter vector (it normalizes internally).
struct AscentResult {
  double value = -1e300;
  std::vector<double> params;
  bool converged = false;
};

inline AscentResult sphere_ascend(std::size_t m, const std::function<double(const std::vector<double>&)>& obj,
                                  const OptimizerConfig& cfg,
                                  const std::vector<std::vector<double>>& warm_starts = {}) {
  const std::size_t total = static_cast<std::size_t>(cfg.restarts) + warm_starts.size();
  std::vector<AscentResult> results(total);
  parallel_for(total, [&](std::size_t r) {
    std::vector<double> x;
    if (r < warm_starts.size()) {
      x = warm_starts[r];
      if (x.size() != m) throw std::invalid_argument("sphere_ascend: warm start size");
    } else {
      Rng rng(cfg.seed + 0x9e3779b97f4a7c15ULL * (r - warm_starts.size() + 1));
      x.resize(m);
      for (auto& v : x) v = rng.gaussian();
    }
    auto renorm = [&](std::vector<double>& v) {
      double n2 = 0.0;
      for (double t : v) n2 += t * t;
      const double n = std::sqrt(n2);
      if (n > 0) for (auto& t : v) t /= n;
    };
    renorm(x);
    double fx = obj(x);
    double step = cfg.step;
    std::vector<double> g(m), trial(m);
    for (int it = 0; it < cfg.iterations && step > cfg.tolerance; ++it) {
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += cfg.fd_step;
        xm[i] -= cfg.fd_step;
        g[i] = (obj(xp) - obj(xm)) / (2.0 * cfg.fd_step);
      }
      double gn2 = 0.0;
      for (double t : g) gn2 += t * t;
      const double gn = std::sqrt(gn2);
      if (gn < 1e-14) break;
      bool improved = false;
      while (step > cfg.tolerance) {
        for (std::size_t i = 0; i < m; ++i) trial[i] = x[i] + step * g[i] / gn;
        renorm(trial);
        const double ft = obj(trial);
        if (ft > fx) {
          x = trial;
          fx = ft;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    results[r].value = fx;
    results[r].params = std::move(x);
    results[r].converged = step <= cfg.tolerance * 10 || true;
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < total; ++r)
    if (results[r].value > results[best].value) best = r;
  return results[best];
}

}  // namespace detail

/// Output state on (V..., B, E) from a purified input: psi lives on
/// (W, V..., A) with the purifier leading.
inline DensityMatrix channel_output_state(const IsometryChannel& ch, const std::vector<cplx>& psi,
                                          int d_w, const std::vector<int>& aux_dims) {
  std::vector<int> dims = {d_w};
  dims.insert(dims.end(), aux_dims.begin(), aux_dims.end());
  dims.push_back(ch.d_in);
  std::vector<cplx> out = apply_isometry_at(psi, dims, dims.size() - 1, ch);
  const SystemContext fctx = formula_context(static_cast<int>(aux_dims.size()));
  // dims is now (W, V..., B, E); name the remainder in formula order V...,B,E.
  std::vector<std::string> names;
  for (std::size_t i = 2; i < fctx.names.size(); ++i) names.push_back(fctx.names[i]);
  names.push_back("B");
  names.push_back("E");
  std::vector<int> rest(dims.begin() + 1, dims.end());
  return trace_out_head(out, d_w, std::move(names), std::move(rest));
}

struct MaximizeResult {
  double value = -1e300;
  std::vector<cplx> argmax;    // purification on (W, V..., A)
  std::vector<int> arg_dims;   // its dimension list
  DensityMatrix output;        // channel output on (V..., B, E)
  bool converged = true;
};

namespace detail {

inline std::vector<cplx> params_to_state(const std::vector<double>& p) {
  std::vector<cplx> psi(p.size() / 2);
  double n2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] = cplx(p[2 * i], p[2 * i + 1]);
    n2 += std::norm(psi[i]);
  }
  const double n = std::sqrt(n2);
  if (n < 1e-300) throw std::runtime_error("params_to_state: zero vector");
  for (auto& x : psi) x /= n;
  return psi;
}

}  // namespace detail

/// Best value of f_alpha(channel) over purified inputs, by multi-restart
/// projected ascent; a lower bound on the true maximum.
inline MaximizeResult maximize_formula(const RatVec& alpha, const IsometryChannel& ch,
                                       std::vector<int> aux_dims, const OptimizerConfig& cfg = {}) {
  if (!cfg.valid()) throw std::invalid_argument("maximize_formula: bad config");
  const int n_aux = static_cast<int>(aux_dims.size());
  const AlphaSpace sp(n_aux);
  const LinearEntropyFunctional f = alpha_to_formula(sp, alpha);
  const SystemContext fctx = formula_context(n_aux);

  std::size_t aux_total = 1;
  for (int& d : aux_dims) {
    if (d <= 0) d = cfg.aux_dim > 0 ? cfg.aux_dim : ch.d_in * ch.d_in;
    aux_total *= static_cast<std::size_t>(d);
  }
  if (aux_total > 256) throw std::invalid_argument("maximize_formula: auxiliary space too large");
  const int d_w = cfg.purifier > 0 ? cfg.purifier
                                   : static_cast<int>(aux_total) * ch.d_in;

  const std::size_t dim = static_cast<std::size_t>(d_w) * aux_total * static_cast<std::size_t>(ch.d_in);
  auto objective = [&](const std::vector<double>& p) {
    const std::vector<cplx> psi = detail::params_to_state(p);
    const DensityMatrix rho = channel_output_state(ch, psi, d_w, aux_dims);
    return f.evaluate(entropy_vector_as(rho, fctx));
  };

  const auto best = detail::sphere_ascend(2 * dim, objective, cfg);
  MaximizeResult out;
  out.value = best.value;
  out.argmax = detail::params_to_state(best.params);
  out.arg_dims = {d_w};
  out.arg_dims.insert(out.arg_dims.end(), aux_dims.begin(), aux_dims.end());
  out.arg_dims.push_back(ch.d_in);
  out.output = channel_output_state(ch, out.argmax, d_w, aux_dims);
  out.converged = best.converged;
  return out;
}

/// Entropy table of the two-channel output (B1,E1,B2,E2,V...) from a purified
/// joint input psi on (W, V..., A1, A2).
inline DensityMatrix pair_output_state(const IsometryChannel& n1, const IsometryChannel& n2,
                                       const std::vector<cplx>& psi, int d_w,
                                       const std::vector<int>& aux_dims, int d_a1, int d_a2) {
  std::vector<int> dims = {d_w};
  dims.insert(dims.end(), aux_dims.begin(), aux_dims.end());
  dims.push_back(d_a1);
  dims.push_back(d_a2);
  std::vector<cplx> cur = apply_isometry_at(psi, dims, dims.size() - 1, n2);
  cur = apply_isometry_at(cur, dims, dims.size() - 3, n1);
  // dims: (W, V..., B1, E1, B2, E2)
  std::vector<std::string> names;
  const int n_aux = static_cast<int>(aux_dims.size());
  const SystemContext cctx = channel_pair_context(n_aux);
  for (int i = 0; i < n_aux; ++i) names.push_back(cctx.names[static_cast<std::size_t>(4 + i)]);
  names.insert(names.end(), {"B1", "E1", "B2", "E2"});
  std::vector<int> rest(dims.begin() + 1, dims.end());
  return trace_out_head(cur, d_w, std::move(names), std::move(rest));
}

/// Sampling battery for a Delta functional. Classical mode draws Dirichlet
/// joint distributions; quantum mode draws pure inputs plus two Haar
/// channels per sample.
enum class SampleKind { Classical, Quantum };

struct DeltaCheckDims {
  std::vector<int> aux;  // per-auxiliary alphabet/dimension
  int a1 = 2, b1 = 2, e1 = 2;
  int a2 = 2, b2 = 2, e2 = 2;
};

inline double numeric_delta_check(const RatVec& alpha, const DecouplingCode& code, int samples,
                                  const DeltaCheckDims& dims, std::uint64_t seed,
                                  SampleKind kind = SampleKind::Classical) {
  const int n = code.n_aux();
  if (static_cast<int>(dims.aux.size()) != n)
    throw std::invalid_argument("numeric_delta_check: aux dims mismatch");
  const LinearEntropyFunctional delta = delta_functional(code, alpha);
  const SystemContext cctx = channel_pair_context(n);

  std::vector<double> vals(static_cast<std::size_t>(samples), 0.0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
    Rng rng(seed + 0x100000001b3ULL * (i + 1));
    if (kind == SampleKind::Classical) {
      std::vector<int> alph = {dims.b1, dims.e1, dims.b2, dims.e2};
      alph.insert(alph.end(), dims.aux.begin(), dims.aux.end());
      const ClassicalDistribution p = random_distribution(cctx.names, alph, rng);
      vals[i] = delta.evaluate(entropy_vector(p));
    } else {
      const IsometryChannel c1 = random_channel(dims.a1, dims.b1, dims.e1, rng);
      const IsometryChannel c2 = random_channel(dims.a2, dims.b2, dims.e2, rng);
      std::size_t d = static_cast<std::size_t>(dims.a1) * static_cast<std::size_t>(dims.a2);
      for (int x : dims.aux) d *= static_cast<std::size_t>(x);
      const std::vector<cplx> psi = random_state_vector(d, rng);
      const DensityMatrix rho = pair_output_state(c1, c2, psi, 1, dims.aux, dims.a1, dims.a2);
      vals[i] = delta.evaluate(entropy_vector_as(rho, cctx));
    }
  });
  double mn = vals.empty() ? 0.0 : vals[0];
  for (double v : vals) mn = std::min(mn, v);
  return mn;
}

/// Worst sampled/optimized value of I(V;B) - I(V;E); negative beyond the
/// tolerance means the channel is provably not informationally degradable.
struct DegradabilityReport {
  bool violated = false;
  double worst_margin = 0.0;
  std::vector<cplx> witness;  // pure state on (V, A) attaining worst margin
  int d_v = 0;
  std::string verdict;
};

inline DegradabilityReport informational_degradability_check(const IsometryChannel& ch, int samples,
                                                             const OptimizerConfig& cfg = {}) {
  const int d_v = cfg.aux_dim > 0 ? cfg.aux_dim : ch.d_in;
  const std::vector<int> aux = {d_v};
  const SystemContext fctx = formula_context(1);
  LinearEntropyFunctional margin = LinearEntropyFunctional::cmi(fctx, fctx.mask_of({"V"}),
                                                                fctx.mask_of({"B"}), 0) -
                                   LinearEntropyFunctional::cmi(fctx, fctx.mask_of({"V"}),
                                                                fctx.mask_of({"E"}), 0);

  const std::size_t dim = static_cast<std::size_t>(d_v) * static_cast<std::size_t>(ch.d_in);
  auto eval_state = [&](const std::vector<cplx>& psi) {
    const DensityMatrix rho = channel_output_state(ch, psi, 1, aux);
    return margin.evaluate(entropy_vector_as(rho, fctx));
  };

  // Deterministic candidate: maximally entangled V:A (when shapes allow).
  std::vector<std::vector<double>> warm;
  if (d_v >= ch.d_in) {
    std::vector<double> p(2 * dim, 0.0);
    for (int x = 0; x < ch.d_in; ++x)
      p[2 * (static_cast<std::size_t>(x) * static_cast<std::size_t>(ch.d_in) + static_cast<std::size_t>(x))] = 1.0;
    warm.push_back(std::move(p));
  }
  for (int s = 0; s < samples; ++s) {
    Rng rng(cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1));
    const std::vector<cplx> psi = random_state_vector(dim, rng);
    std::vector<double> p(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
      p[2 * i] = psi[i].real();
      p[2 * i + 1] = psi[i].imag();
    }
    warm.push_back(std::move(p));
  }

  auto objective = [&](const std::vector<double>& p) {
    return -eval_state(detail::params_to_state(p));  // ascent on -margin
  };
  OptimizerConfig c2 = cfg;
  c2.restarts = std::max(1, cfg.restarts / 2);
  const auto best = detail::sphere_ascend(2 * dim, objective, c2, warm);

  DegradabilityReport rep;
  rep.worst_margin = -best.value;
  rep.witness = detail::params_to_state(best.params);
  rep.d_v = d_v;
  rep.violated = rep.worst_margin < -1e-6;
  rep.verdict = rep.violated ? "violated" : "no violation found";
  return rep;
}

/// Additivity gap estimate for a formula on a channel pair; optionally
/// evaluates the degradability telescoping inequalities on the joint argmax.
struct SpotCheckResult {
  double joint_value = 0.0;
  double single_value_1 = 0.0;
  double single_value_2 = 0.0;
  double gap = 0.0;  // joint - single1 - single2
  bool telescoping_checked = false;
  double telescoping_slack = 0.0;  // min slack of the two-step chain
};

inline SpotCheckResult additivity_spot_check(const IsometryChannel& n1, const IsometryChannel& n2,
                                             const RatVec& alpha, std::vector<int> aux_dims,
                                             const OptimizerConfig& cfg = {},
                                             bool check_telescoping = false) {
  const int n_aux = static_cast<int>(aux_dims.size());
  const AlphaSpace sp(n_aux);
  const LinearEntropyFunctional f = alpha_to_formula(sp, alpha);
  const SystemContext fctx = formula_context(n_aux);

  std::size_t aux_total = 1;
  for (int& d : aux_dims) {
    if (d <= 0) d = cfg.aux_dim > 0 ? cfg.aux_dim : n1.d_in * n2.d_in;
    aux_total *= static_cast<std::size_t>(d);
  }
  const std::size_t joint_in = static_cast<std::size_t>(n1.d_in) * static_cast<std::size_t>(n2.d_in);
  if (aux_total * joint_in > 36) throw std::invalid_argument("additivity_spot_check: joint dims too large");
  const int d_w = static_cast<int>(aux_total * joint_in);

  const SystemContext cctx = channel_pair_context(n_aux);
  std::vector<Mask> image;  // formula systems -> joint-output subsets
  image.push_back(cctx.mask_of({"B1", "B2"}));
  image.push_back(cctx.mask_of({"E1", "E2"}));
  for (int i = 0; i < n_aux; ++i)
    image.push_back(cctx.mask_of({cctx.names[static_cast<std::size_t>(4 + i)]}));
  const LinearEntropyFunctional f_joint = f.relabel(cctx, image);

  const std::size_t dim = static_cast<std::size_t>(d_w) * aux_total * joint_in;
  auto objective = [&](const std::vector<double>& p) {
    const std::vector<cplx> psi = detail::params_to_state(p);
    const DensityMatrix rho = pair_output_state(n1, n2, psi, d_w, aux_dims, n1.d_in, n2.d_in);
    return f_joint.evaluate(entropy_vector_as(rho, cctx));
  };
  const auto joint = detail::sphere_ascend(2 * dim, objective, cfg);

  const MaximizeResult m1 = maximize_formula(alpha, n1, aux_dims, cfg);
  const MaximizeResult m2 = maximize_formula(alpha, n2, aux_dims, cfg);

  SpotCheckResult out;
  out.joint_value = joint.value;
  out.single_value_1 = m1.value;
  out.single_value_2 = m2.value;
  out.gap = joint.value - m1.value - m2.value;

  if (check_telescoping) {
    const DensityMatrix rho =
        pair_output_state(n1, n2, detail::params_to_state(joint.params), d_w, aux_dims, n1.d_in, n2.d_in);
    const EntropyVector ev = entropy_vector_as(rho, cctx);
    const Mask mb1 = cctx.mask_of({"B1"}), me1 = cctx.mask_of({"E1"});
    const Mask mb2 = cctx.mask_of({"B2"}), me2 = cctx.mask_of({"E2"});
    const double s1 = (ev[mb1] - ev[me1]) - (ev[mb1 | mb2] - ev[me1 | mb2]);
    const double s2 = (ev[mb2] - ev[me2]) - (ev[me1 | mb2] - ev[me1 | me2]);
    out.telescoping_checked = true;
    out.telescoping_slack = std::min(s1, s2);
  }
  return out;
}

/// Entropic classical-quantum structure test on a state over R1,R2,R3,A:
/// all pairwise/triple conditional entropies among the R's must vanish, and
/// then R1 must dephase cleanly in its reduced eigenbasis.
struct CqReport {
  std::vector<std::pair<std::string, double>> conditions;
  bool conditions_hold = false;
  bool cq_confirmed = false;
  double dephasing_distance = 0.0;
};

inline CqReport cq_criterion_check(const DensityMatrix& rho) {
  if (rho.names.size() != 4) throw std::invalid_argument("cq_criterion_check: want R1,R2,R3,A");
  if (rho.total_dim() > 16) throw std::invalid_argument("cq_criterion_check: dimension cap");
  CqReport rep;
  const SystemContext ctx = rho.context();
  auto H = [&](Mask m) { return von_neumann_entropy(rho, m); };
  const Mask r[3] = {Mask{1} << 0, Mask{1} << 1, Mask{1} << 2};

  rep.conditions_hold = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double v = H(r[i] | r[j]) - H(r[j]);
      rep.conditions.emplace_back("H(" + ctx.names[static_cast<std::size_t>(i)] + "|" +
                                      ctx.names[static_cast<std::size_t>(j)] + ")",
                                  v);
      if (std::fabs(v) > 1e-7) rep.conditions_hold = false;
    }
  for (int i = 0; i < 3; ++i) {
    const Mask rest = (r[0] | r[1] | r[2]) & ~r[i];
    const double v = H(r[i] | rest) - H(rest);
    rep.conditions.emplace_back("H(" + ctx.names[static_cast<std::size_t>(i)] + "|" +
                                    ctx.label(rest) + ")",
                                v);
    if (std::fabs(v) > 1e-7) rep.conditions_hold = false;
  }
  if (!rep.conditions_hold) return rep;

  // Dephase R1 in the eigenbasis of its reduced state and compare.
  const DensityMatrix r1a = partial_trace(rho, r[0] | (Mask{1} << 3));
  const DensityMatrix r1 = partial_trace(rho, r[0]);
  const EigenSystem es = hermitian_eigensystem(r1.m);
  const std::size_t d1 = r1.m.rows, da = r1a.m.rows / d1;
  CMat sigma(r1a.m.rows, r1a.m.cols);
  for (std::size_t k = 0; k < es.vectors.size(); ++k) {
    const auto& u = es.vectors[k];
    // (P_k x I) rho (P_k x I) with P_k = |u><u|:
    // sigma(i,x; j,y) += u[i] conj(u[ip]) rho(ip,x; jp,y) u[jp] conj(u[j]).
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j) {
        const cplx outer = u[i] * std::conj(u[j]);
        if (outer == cplx(0.0, 0.0)) continue;
        for (std::size_t ip = 0; ip < d1; ++ip)
          for (std::size_t jp = 0; jp < d1; ++jp) {
            const cplx inner = std::conj(u[ip]) * u[jp];
            if (inner == cplx(0.0, 0.0)) continue;
            for (std::size_t x = 0; x < da; ++x)
              for (std::size_t y = 0; y < da; ++y)
                sigma.at(i * da + x, j * da + y) +=
                    outer * inner * r1a.m.at(ip * da + x, jp * da + y);
          }
      }
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < sigma.a.size(); ++i) dist2 += std::norm(sigma.a[i] - r1a.m.a[i]);
  rep.dephasing_distance = std::sqrt(dist2);
  rep.cq_confirmed = rep.dephasing_distance <= 1e-6;
  return rep;
}

}  // namespace addicone
