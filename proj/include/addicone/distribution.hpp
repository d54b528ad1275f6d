#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/context.hpp"
#include "addicone/rng.hpp"

namespace addicone {

/// Joint probability mass function over named finite-alphabet variables.
/// Outcomes index a dense table in mixed radix with the first variable most
/// significant (matching the tensor-product convention on the quantum side).
struct ClassicalDistribution {
  std::vector<std::string> names;
  std::vector<int> alphabet;
  std::vector<double> p;

  ClassicalDistribution() = default;
  ClassicalDistribution(std::vector<std::string> nm, std::vector<int> al)
      : names(std::move(nm)), alphabet(std::move(al)) {
    if (names.size() != alphabet.size())
      throw std::invalid_argument("ClassicalDistribution: name/alphabet size mismatch");
    std::size_t total = 1;
    for (int a : alphabet) {
      if (a < 1) throw std::invalid_argument("ClassicalDistribution: empty alphabet");
      total *= static_cast<std::size_t>(a);
    }
    p.assign(total, 0.0);
  }

  SystemContext context() const { return SystemContext(names); }
  std::size_t n_vars() const { return names.size(); }
  std::size_t table_size() const { return p.size(); }

  std::size_t index_of_outcome(const std::vector<int>& outcome) const {
    if (outcome.size() != names.size())
      throw std::invalid_argument("ClassicalDistribution: outcome arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < outcome.size(); ++i) {
      if (outcome[i] < 0 || outcome[i] >= alphabet[i])
        throw std::out_of_range("ClassicalDistribution: outcome symbol out of range");
      idx = idx * static_cast<std::size_t>(alphabet[i]) + static_cast<std::size_t>(outcome[i]);
    }
    return idx;
  }

  std::vector<int> outcome_of_index(std::size_t idx) const {
    std::vector<int> out(names.size());
    for (std::size_t i = names.size(); i-- > 0;) {
      out[i] = static_cast<int>(idx % static_cast<std::size_t>(alphabet[i]));
      idx /= static_cast<std::size_t>(alphabet[i]);
    }
    return out;
  }

  double& at(const std::vector<int>& outcome) { return p[index_of_outcome(outcome)]; }
  double at(const std::vector<int>& outcome) const { return p[index_of_outcome(outcome)]; }

  /// Probabilities must be nonnegative and sum to 1 within 1e-12.
  bool valid(double tol = 1e-12) const {
    double s = 0.0;
    for (double x : p) {
      if (x < -tol || !(x == x)) return false;
      s += x;
    }
    return std::fabs(s - 1.0) <= tol;
  }

  /// Marginal table over the variables in `m` (context order preserved).
  std::vector<double> marginal(Mask m) const {
    std::vector<std::size_t> kept;
    std::size_t msize = 1;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (m & (Mask{1} << i)) {
        kept.push_back(i);
        msize *= static_cast<std::size_t>(alphabet[i]);
      }
    std::vector<double> out(msize, 0.0);
    std::vector<int> outcome(names.size());
    for (std::size_t idx = 0; idx < p.size(); ++idx) {
      if (p[idx] == 0.0) continue;
      std::size_t rem = idx;
      for (std::size_t i = names.size(); i-- > 0;) {
        outcome[i] = static_cast<int>(rem % static_cast<std::size_t>(alphabet[i]));
        rem /= static_cast<std::size_t>(alphabet[i]);
      }
      std::size_t midx = 0;
      for (std::size_t k : kept) midx = midx * static_cast<std::size_t>(alphabet[k]) + static_cast<std::size_t>(outcome[k]);
      out[midx] += p[idx];
    }
    return out;
  }
};

/// Dirichlet(1,...,1) sample: uniform over the probability simplex.
inline ClassicalDistribution random_distribution(std::vector<std::string> names, std::vector<int> alphabet, Rng& rng) {
  ClassicalDistribution d(std::move(names), std::move(alphabet));
  double sum = 0.0;
  for (auto& x : d.p) {
    double u = rng.uniform01();
    while (u <= 0.0) u = rng.uniform01();
    x = -std::log(u);
    sum += x;
  }
  for (auto& x : d.p) x /= sum;
  return d;
}

}  // namespace addicone
