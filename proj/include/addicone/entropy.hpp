#pragma once

#include <cmath>

#include "addicone/distribution.hpp"
#include "addicone/functional.hpp"
#include "addicone/quantum.hpp"

namespace addicone {

/// -sum p log2 p over a probability table; entries below 1e-12 contribute 0.
inline double entropy_of_table(const std::vector<double>& tab) {
  double s = 0.0;
  for (double x : tab)
    if (x > 1e-12) s -= x * std::log2(x);
  return s;
}

inline double shannon_entropy(const ClassicalDistribution& d, Mask subset) {
  if (subset == 0) return 0.0;
  return entropy_of_table(d.marginal(subset));
}

/// Von Neumann entropy in bits; eigenvalues below 1e-12 are treated as 0.
inline double von_neumann_entropy(const CMat& rho) {
  double s = 0.0;
  for (double lam : hermitian_eigenvalues(rho))
    if (lam > 1e-12) s -= lam * std::log2(lam);
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho, Mask subset) {
  if (subset == 0) return 0.0;
  if (subset == rho.context().full_mask()) return von_neumann_entropy(rho.m);
  return von_neumann_entropy(partial_trace(rho, subset).m);
}

inline EntropyVector entropy_vector(const ClassicalDistribution& d) {
  EntropyVector v(d.context());
  for (Mask m = 1; m <= d.context().full_mask(); ++m) v[m] = shannon_entropy(d, m);
  return v;
}

inline EntropyVector entropy_vector(const DensityMatrix& rho) {
  EntropyVector v(rho.context());
  for (Mask m = 1; m <= rho.context().full_mask(); ++m) v[m] = von_neumann_entropy(rho, m);
  return v;
}

inline double evaluate_functional(const LinearEntropyFunctional& f, const EntropyVector& v) {
  return f.evaluate(v);
}

/// Entropy vector with respect to an external context; subsets are matched to
/// the density's own systems by name.
inline EntropyVector entropy_vector_as(const DensityMatrix& rho, const SystemContext& ctx) {
  EntropyVector v(ctx);
  const SystemContext own = rho.context();
  for (Mask m = 1; m <= ctx.full_mask(); ++m)
    v[m] = von_neumann_entropy(rho, own.mask_of(ctx.subset_names(m)));
  return v;
}

inline EntropyVector entropy_vector_as(const ClassicalDistribution& d, const SystemContext& ctx) {
  EntropyVector v(ctx);
  const SystemContext own = d.context();
  for (Mask m = 1; m <= ctx.full_mask(); ++m)
    v[m] = shannon_entropy(d, own.mask_of(ctx.subset_names(m)));
  return v;
}

/// Diagonal embedding of a classical pmf as a density matrix.
inline DensityMatrix embed_classical(const ClassicalDistribution& d) {
  DensityMatrix rho(d.names, d.alphabet);
  for (std::size_t i = 0; i < d.p.size(); ++i) rho.m.at(i, i) = d.p[i];
  return rho;
}

}  // namespace addicone
