#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "addicone/quantum.hpp"

namespace addicone {

/// Quantum channel in Stinespring form: an isometry from the input register
/// into the output-environment product B x E.
struct IsometryChannel {
  int d_in = 0, d_b = 0, d_e = 0;
  CMat u;  // (d_b * d_e) rows, d_in columns

  IsometryChannel() = default;
  IsometryChannel(int din, int db, int de, CMat m) : d_in(din), d_b(db), d_e(de), u(std::move(m)) {
    if (d_in <= 0 || d_b <= 0 || d_e <= 0)
      throw std::invalid_argument("IsometryChannel: nonpositive dimension");
    if (u.rows != static_cast<std::size_t>(d_b) * static_cast<std::size_t>(d_e) ||
        u.cols != static_cast<std::size_t>(d_in))
      throw std::invalid_argument("IsometryChannel: matrix shape mismatch");
  }

  /// U†U = I within tolerance.
  bool valid(double tol = 1e-10) const {
    if (u.rows < u.cols) return false;
    const CMat g = dagger(u) * u;
    for (std::size_t i = 0; i < g.rows; ++i)
      for (std::size_t j = 0; j < g.cols; ++j) {
        const cplx want = i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        if (std::abs(g.at(i, j) - want) > tol) return false;
      }
    return true;
  }
};

inline IsometryChannel identity_channel(int d) {
  return IsometryChannel(d, d, 1, CMat::identity(static_cast<std::size_t>(d)));
}

/// B is trivial; the whole input appears in the environment.
inline IsometryChannel swap_to_environment_channel(int d) {
  return IsometryChannel(d, 1, d, CMat::identity(static_cast<std::size_t>(d)));
}

/// Copy isometry |x> -> |x>_B |x>_E.
inline IsometryChannel dephasing_channel(int d) {
  CMat u(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (int x = 0; x < d; ++x)
    u.at(static_cast<std::size_t>(x) * static_cast<std::size_t>(d) + static_cast<std::size_t>(x),
         static_cast<std::size_t>(x)) = 1.0;
  return IsometryChannel(d, d, d, std::move(u));
}

/// Erasure with probability p; both outputs carry a flag state at index d.
inline IsometryChannel erasure_channel(int d, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erasure_channel: bad probability");
  const int dd = d + 1;
  CMat u(static_cast<std::size_t>(dd) * static_cast<std::size_t>(dd), static_cast<std::size_t>(d));
  const double keep = std::sqrt(1.0 - p), lose = std::sqrt(p);
  for (int x = 0; x < d; ++x) {
    u.at(static_cast<std::size_t>(x * dd + d), static_cast<std::size_t>(x)) = keep;
    u.at(static_cast<std::size_t>(d * dd + x), static_cast<std::size_t>(x)) = lose;
  }
  return IsometryChannel(d, dd, dd, std::move(u));
}

inline IsometryChannel random_channel(int d_in, int d_b, int d_e, Rng& rng) {
  const std::size_t rows = static_cast<std::size_t>(d_b) * static_cast<std::size_t>(d_e);
  if (rows < static_cast<std::size_t>(d_in))
    throw std::invalid_argument("random_channel: output space too small");
  return IsometryChannel(d_in, d_b, d_e, random_isometry(rows, static_cast<std::size_t>(d_in), rng));
}

/// Stinespring dilation of a Kraus list: the environment records which
/// operator acted. Kraus operators are d_b x d_in.
inline IsometryChannel channel_from_kraus(const std::vector<CMat>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel_from_kraus: empty list");
  const std::size_t db = kraus[0].rows, din = kraus[0].cols, de = kraus.size();
  CMat u(db * de, din);
  for (std::size_t k = 0; k < de; ++k) {
    if (kraus[k].rows != db || kraus[k].cols != din)
      throw std::invalid_argument("channel_from_kraus: inconsistent shapes");
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a = 0; a < din; ++a) u.at(b * de + k, a) = kraus[k].at(b, a);
  }
  return IsometryChannel(static_cast<int>(din), static_cast<int>(db), static_cast<int>(de),
                         std::move(u));
}

/// Applies an isometry to subsystem `target` of a pure state; dims[target]
/// is replaced in place by the pair (d_b, d_e).
inline std::vector<cplx> apply_isometry_at(const std::vector<cplx>& psi, std::vector<int>& dims,
                                           std::size_t target, const IsometryChannel& ch) {
  if (target >= dims.size()) throw std::invalid_argument("apply_isometry_at: bad target");
  if (dims[target] != ch.d_in) throw std::invalid_argument("apply_isometry_at: input dim mismatch");
  std::size_t pre = 1, post = 1;
  for (std::size_t i = 0; i < target; ++i) pre *= static_cast<std::size_t>(dims[i]);
  for (std::size_t i = target + 1; i < dims.size(); ++i) post *= static_cast<std::size_t>(dims[i]);
  const std::size_t din = static_cast<std::size_t>(ch.d_in);
  const std::size_t dout = static_cast<std::size_t>(ch.d_b) * static_cast<std::size_t>(ch.d_e);
  if (psi.size() != pre * din * post) throw std::invalid_argument("apply_isometry_at: state size");

  std::vector<cplx> out(pre * dout * post, cplx(0.0, 0.0));
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t x = 0; x < din; ++x)
      for (std::size_t q = 0; q < post; ++q) {
        const cplx v = psi[(p * din + x) * post + q];
        if (v == cplx(0.0, 0.0)) continue;
        for (std::size_t y = 0; y < dout; ++y) {
          const cplx w = ch.u.at(y, x);
          if (w == cplx(0.0, 0.0)) continue;
          out[(p * dout + y) * post + q] += w * v;
        }
      }

  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(target));
  dims.insert(dims.begin() + static_cast<std::ptrdiff_t>(target), {ch.d_b, ch.d_e});
  return out;
}

/// Reduced density matrix after tracing out the leading subsystem of a pure
/// state: psi lives on (head, rest...) and the head is dropped.
inline DensityMatrix trace_out_head(const std::vector<cplx>& psi, int d_head,
                                    std::vector<std::string> names, std::vector<int> dims) {
  std::size_t rest = 1;
  for (int d : dims) rest *= static_cast<std::size_t>(d);
  if (psi.size() != static_cast<std::size_t>(d_head) * rest)
    throw std::invalid_argument("trace_out_head: dimension mismatch");
  DensityMatrix rho(std::move(names), std::move(dims));
  for (std::size_t w = 0; w < static_cast<std::size_t>(d_head); ++w)
    for (std::size_t i = 0; i < rest; ++i) {
      const cplx v = psi[w * rest + i];
      if (v == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < rest; ++j) rho.m.at(i, j) += v * std::conj(psi[w * rest + j]);
    }
  return rho;
}

}  // namespace addicone
