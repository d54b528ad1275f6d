#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "addicone/context.hpp"
#include "addicone/rng.hpp"

namespace addicone {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
struct CMat {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> a;

  CMat() = default;
  CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0.0, 0.0)) {}

  cplx& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static CMat identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline CMat operator*(const CMat& x, const CMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("CMat: shape mismatch in product");
  CMat z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const cplx v = x.at(i, k);
      if (v == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

inline CMat dagger(const CMat& x) {
  CMat z(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) z.at(j, i) = std::conj(x.at(i, j));
  return z;
}

/// Kronecker product; the left factor is the most significant index.
inline CMat kron(const CMat& x, const CMat& y) {
  CMat z(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const cplx v = x.at(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < y.rows; ++k)
        for (std::size_t l = 0; l < y.cols; ++l)
          z.at(i * y.rows + k, j * y.cols + l) = v * y.at(k, l);
    }
  return z;
}

namespace detail {

/// Cyclic Jacobi diagonalization of a real symmetric matrix (in place).
/// Returns eigenvalues; if `vecs` is non-null it receives the orthogonal
/// eigenvector matrix, column k matching eigenvalue k.
inline std::vector<double> jacobi_symmetric(std::vector<double>& m, std::size_t n,
                                            std::vector<double>* vecs = nullptr) {
  auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };
  if (vecs) {
    vecs->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*vecs)[idx(i, i)] = 1.0;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(m[idx(i, i)]));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) scale = std::max(scale, std::fabs(m[idx(i, j)]));
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m[idx(i, j)] * m[idx(i, j)];
    if (std::sqrt(off) <= 1e-14 * scale * static_cast<double>(n)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[idx(p, q)];
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = m[idx(p, p)], aqq = m[idx(q, q)];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m[idx(k, p)], akq = m[idx(k, q)];
          m[idx(k, p)] = c * akp - s * akq;
          m[idx(k, q)] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m[idx(p, k)], aqk = m[idx(q, k)];
          m[idx(p, k)] = c * apk - s * aqk;
          m[idx(q, k)] = s * apk + c * aqk;
        }
        if (vecs)
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = (*vecs)[idx(k, p)], vkq = (*vecs)[idx(k, q)];
            (*vecs)[idx(k, p)] = c * vkp - s * vkq;
            (*vecs)[idx(k, q)] = s * vkp + c * vkq;
          }
      }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m[idx(i, i)];
  return eig;
}

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix;
/// its spectrum is that of the Hermitian matrix with every multiplicity
/// doubled.
inline std::vector<double> hermitian_embedding(const CMat& h) {
  const std::size_t n = h.rows;
  std::vector<double> m(4 * n * n, 0.0);
  const std::size_t N = 2 * n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = h.at(i, j).real(), im = h.at(i, j).imag();
      m[i * N + j] = re;
      m[(i + n) * N + (j + n)] = re;
      m[i * N + (j + n)] = -im;
      m[(i + n) * N + j] = im;
    }
  return m;
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix, doubled multiplicities resolved by
/// sorting the embedded spectrum and keeping every other entry. Ascending.
inline std::vector<double> hermitian_eigenvalues(const CMat& h) {
  if (h.rows != h.cols) throw std::invalid_argument("hermitian_eigenvalues: not square");
  auto m = detail::hermitian_embedding(h);
  auto eig = detail::jacobi_symmetric(m, 2 * h.rows);
  std::sort(eig.begin(), eig.end());
  std::vector<double> out(h.rows);
  for (std::size_t i = 0; i < h.rows; ++i) out[i] = 0.5 * (eig[2 * i] + eig[2 * i + 1]);
  return out;
}

struct EigenSystem {
  std::vector<double> values;       // ascending
  std::vector<std::vector<cplx>> vectors;  // orthonormal, vectors[k] matches values[k]
};

/// Full eigensystem of a Hermitian matrix via the real embedding. Each
/// embedded eigenvector (x; y) maps to the complex vector x + iy; a
/// Gram-Schmidt pass picks one representative per doubled eigenvalue.
inline EigenSystem hermitian_eigensystem(const CMat& h) {
  const std::size_t n = h.rows;
  auto m = detail::hermitian_embedding(h);
  std::vector<double> vecs;
  auto eig = detail::jacobi_symmetric(m, 2 * n, &vecs);
  std::vector<std::size_t> order(2 * n);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eig[a] < eig[b]; });

  EigenSystem out;
  const std::size_t N = 2 * n;
  for (std::size_t oi = 0; oi < order.size() && out.values.size() < n; ++oi) {
    const std::size_t k = order[oi];
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx(vecs[i * N + k], vecs[(i + n) * N + k]);
    for (const auto& u : out.vectors) {
      cplx ip(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) ip += std::conj(u[i]) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= ip * u[i];
    }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) continue;
    for (auto& x : v) x /= nrm;
    out.values.push_back(eig[k]);
    out.vectors.push_back(std::move(v));
  }
  if (out.values.size() != n) throw std::runtime_error("hermitian_eigensystem: basis extraction failed");
  return out;
}

/// Density matrix on a tensor product of named subsystems; first subsystem
/// is the most significant index.
struct DensityMatrix {
  std::vector<std::string> names;
  std::vector<int> dims;
  CMat m;

  DensityMatrix() = default;
  DensityMatrix(std::vector<std::string> nm, std::vector<int> d)
      : names(std::move(nm)), dims(std::move(d)) {
    if (names.size() != dims.size()) throw std::invalid_argument("DensityMatrix: name/dim mismatch");
    m = CMat(total_dim(), total_dim());
  }

  std::size_t total_dim() const {
    std::size_t t = 1;
    for (int d : dims) t *= static_cast<std::size_t>(d);
    return t;
  }

  SystemContext context() const { return SystemContext(names); }

  bool valid(double tol = 1e-9) const {
    if (m.rows != m.cols || m.rows != total_dim()) return false;
    double tr = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
      tr += m.at(i, i).real();
      if (std::fabs(m.at(i, i).imag()) > tol) return false;
      for (std::size_t j = 0; j < m.cols; ++j)
        if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) return false;
    }
    if (std::fabs(tr - 1.0) > tol) return false;
    auto eig = hermitian_eigenvalues(m);
    return eig.front() > -1e-9;
  }
};

/// Traces out the complement of `keep` (subsystem order preserved).
inline DensityMatrix partial_trace(const DensityMatrix& rho, Mask keep) {
  std::vector<std::string> knames;
  std::vector<int> kdims;
  std::vector<std::size_t> kidx, tidx;
  for (std::size_t i = 0; i < rho.names.size(); ++i) {
    if (keep & (Mask{1} << i)) {
      knames.push_back(rho.names[i]);
      kdims.push_back(rho.dims[i]);
      kidx.push_back(i);
    } else {
      tidx.push_back(i);
    }
  }
  DensityMatrix out(knames, kdims);
  const std::size_t D = rho.total_dim();
  std::vector<int> xi(rho.dims.size()), xj(rho.dims.size());
  for (std::size_t i = 0; i < D; ++i) {
    std::size_t rem = i;
    for (std::size_t k = rho.dims.size(); k-- > 0;) {
      xi[k] = static_cast<int>(rem % static_cast<std::size_t>(rho.dims[k]));
      rem /= static_cast<std::size_t>(rho.dims[k]);
    }
    for (std::size_t j = 0; j < D; ++j) {
      const cplx v = rho.m.at(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      rem = j;
      for (std::size_t k = rho.dims.size(); k-- > 0;) {
        xj[k] = static_cast<int>(rem % static_cast<std::size_t>(rho.dims[k]));
        rem /= static_cast<std::size_t>(rho.dims[k]);
      }
      bool diag = true;
      for (std::size_t k : tidx)
        if (xi[k] != xj[k]) { diag = false; break; }
      if (!diag) continue;
      std::size_t oi = 0, oj = 0;
      for (std::size_t k : kidx) {
        oi = oi * static_cast<std::size_t>(rho.dims[k]) + static_cast<std::size_t>(xi[k]);
        oj = oj * static_cast<std::size_t>(rho.dims[k]) + static_cast<std::size_t>(xj[k]);
      }
      out.m.at(oi, oj) += v;
    }
  }
  return out;
}

/// Density matrix of a pure state vector on the given subsystems.
inline DensityMatrix pure_state(std::vector<std::string> names, std::vector<int> dims,
                                const std::vector<cplx>& psi) {
  DensityMatrix rho(std::move(names), std::move(dims));
  if (psi.size() != rho.total_dim()) throw std::invalid_argument("pure_state: dimension mismatch");
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) rho.m.at(i, j) = psi[i] * std::conj(psi[j]);
  return rho;
}

/// Normalized Gaussian random vector in C^n.
inline std::vector<cplx> random_state_vector(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  double nrm = 0.0;
  for (auto& x : v) {
    x = cplx(rng.gaussian(), rng.gaussian());
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  return v;
}

/// Haar-distributed isometry from C^cols into C^rows (cols <= rows) via
/// Gram-Schmidt on a Ginibre ensemble.
inline CMat random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw std::invalid_argument("random_isometry: cols > rows");
  CMat w(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<cplx> v(rows);
    for (auto& x : v) x = cplx(rng.gaussian(), rng.gaussian());
    for (std::size_t jj = 0; jj < j; ++jj) {
      cplx ip(0.0, 0.0);
      for (std::size_t i = 0; i < rows; ++i) ip += std::conj(w.at(i, jj)) * v[i];
      for (std::size_t i = 0; i < rows; ++i) v[i] -= ip * w.at(i, jj);
    }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) return random_isometry(rows, cols, rng);
    for (std::size_t i = 0; i < rows; ++i) w.at(i, j) = v[i] / nrm;
  }
  return w;
}

}  // namespace addicone
