#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/context.hpp"
#include "addicone/linalg_exact.hpp"
#include "addicone/rational.hpp"

namespace addicone {

/// Joint-entropy table for all subsets of a context; h[mask] is in bits,
/// h[0] == 0.
struct EntropyVector {
  SystemContext ctx;
  std::vector<double> h;

  EntropyVector() = default;
  explicit EntropyVector(SystemContext c) : ctx(std::move(c)), h(std::size_t{1} << ctx.n(), 0.0) {}

  double operator[](Mask m) const { return h[m]; }
  double& operator[](Mask m) { return h[m]; }
};

/// Formal rational linear combination of subset entropies over a context.
class LinearEntropyFunctional {
 public:
  LinearEntropyFunctional() = default;
  explicit LinearEntropyFunctional(SystemContext ctx)
      : ctx_(std::move(ctx)), c_(std::size_t{1} << ctx_.n(), Rational(0)) {}

  static LinearEntropyFunctional entropy(const SystemContext& ctx, Mask m) {
    LinearEntropyFunctional f(ctx);
    if (m != 0) f.c_[m] += Rational(1);
    return f;
  }

  /// H(S|T) = H(S u T) - H(T); S and T must be disjoint. Terms on the empty
  /// subset are dropped (H(empty) = 0).
  static LinearEntropyFunctional conditional(const SystemContext& ctx, Mask s, Mask t) {
    if (s & t) throw std::invalid_argument("conditional: overlapping subsets");
    LinearEntropyFunctional f(ctx);
    if (s | t) f.add(s | t, Rational(1));
    if (t) f.add(t, Rational(-1));
    return f;
  }

  /// I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C); A, B, C pairwise disjoint.
  /// Terms on the empty subset are dropped (H(empty) = 0).
  static LinearEntropyFunctional cmi(const SystemContext& ctx, Mask a, Mask b, Mask c) {
    if ((a & b) || (a & c) || (b & c)) throw std::invalid_argument("cmi: overlapping subsets");
    LinearEntropyFunctional f(ctx);
    if (a | c) f.add(a | c, Rational(1));
    if (b | c) f.add(b | c, Rational(1));
    if (a | b | c) f.add(a | b | c, Rational(-1));
    if (c) f.add(c, Rational(-1));
    return f;
  }

  const SystemContext& ctx() const { return ctx_; }
  const Rational& coeff(Mask m) const { return c_.at(m); }
  void add(Mask m, const Rational& r) {
    if (m == 0) {
      if (!r.is_zero()) throw std::invalid_argument("functional: H(empty) term");
      return;
    }
    c_.at(m) += r;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  /// Coefficients for subset masks 1..2^n-1 (the constant slot is dropped).
  RatVec coeffs_tail() const { return RatVec(c_.begin() + 1, c_.end()); }

  LinearEntropyFunctional& operator+=(const LinearEntropyFunctional& o) {
    require_same_ctx(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  LinearEntropyFunctional& operator-=(const LinearEntropyFunctional& o) {
    require_same_ctx(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  LinearEntropyFunctional& operator*=(const Rational& r) {
    for (auto& x : c_) x *= r;
    return *this;
  }
  friend LinearEntropyFunctional operator+(LinearEntropyFunctional a, const LinearEntropyFunctional& b) { return a += b; }
  friend LinearEntropyFunctional operator-(LinearEntropyFunctional a, const LinearEntropyFunctional& b) { return a -= b; }
  friend LinearEntropyFunctional operator*(const Rational& r, LinearEntropyFunctional f) { return f *= r; }

  bool operator==(const LinearEntropyFunctional& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }

  /// Transports the functional to `target`, sending source system i to the
  /// (possibly composite) subsystem image[i]. Distinct source subsets may
  /// collide; their coefficients accumulate.
  LinearEntropyFunctional relabel(const SystemContext& target, const std::vector<Mask>& image) const {
    if (image.size() != ctx_.n()) throw std::invalid_argument("relabel: image size mismatch");
    LinearEntropyFunctional out(target);
    for (Mask m = 1; m < c_.size(); ++m) {
      if (c_[m].is_zero()) continue;
      Mask tm = 0;
      for (std::size_t i = 0; i < image.size(); ++i)
        if (m & (Mask{1} << i)) tm |= image[i];
      out.add(tm, c_[m]);
    }
    return out;
  }

  LinearEntropyFunctional relabel_by_name(const SystemContext& target,
                                          const std::vector<std::vector<std::string>>& image_names) const {
    std::vector<Mask> image;
    image.reserve(image_names.size());
    for (const auto& group : image_names) image.push_back(target.mask_of(group));
    return relabel(target, image);
  }

  double evaluate(const EntropyVector& v) const {
    if (!(v.ctx == ctx_)) throw std::invalid_argument("evaluate: context mismatch");
    double s = 0.0;
    for (Mask m = 1; m < c_.size(); ++m)
      if (!c_[m].is_zero()) s += c_[m].to_double() * v.h[m];
    return s;
  }

  /// Exact evaluation against rational subset entropies indexed by mask.
  Rational evaluate_exact(const RatVec& h) const {
    Rational s;
    for (Mask m = 1; m < c_.size(); ++m)
      if (!c_[m].is_zero()) s += c_[m] * h.at(m);
    return s;
  }

  /// Canonical plain rendering, e.g. "H(B1E2V) - H(B1B2V)".
  std::string render_plain() const {
    std::ostringstream os;
    bool first = true;
    for (Mask m = 1; m < c_.size(); ++m) {
      if (c_[m].is_zero()) continue;
      const Rational& r = c_[m];
      if (first) {
        if (r == Rational(1)) {
        } else if (r == Rational(-1)) {
          os << "-";
        } else {
          os << r.str() << " ";
        }
        first = false;
      } else {
        if (r.sign() > 0) {
          os << " + ";
          if (r != Rational(1)) os << r.str() << " ";
        } else {
          os << " - ";
          if (r != Rational(-1)) os << (-r).str() << " ";
        }
      }
      os << "H(" << ctx_.label(m) << ")";
    }
    if (first) return "0";
    return os.str();
  }

 private:
  void require_same_ctx(const LinearEntropyFunctional& o) const {
    if (!(ctx_ == o.ctx_)) throw std::invalid_argument("functional: context mismatch");
  }

  SystemContext ctx_;
  std::vector<Rational> c_;
};

/// Interprets an alpha coefficient vector as the formula
/// f_alpha = sum_(t,s) alpha_(t,s) H(s, V_t) over the single-channel context.
inline LinearEntropyFunctional alpha_to_formula(const AlphaSpace& sp, const RatVec& alpha) {
  if (alpha.size() != sp.dim()) throw std::invalid_argument("alpha_to_formula: dimension mismatch");
  SystemContext ctx = formula_context(sp.n_aux);
  LinearEntropyFunctional f(ctx);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].is_zero()) continue;
    auto [t, s] = sp.coord(i);
    Mask m = 0;
    if (s & 1u) m |= ctx.mask_of({"B"});
    if (s & 2u) m |= ctx.mask_of({"E"});
    m |= static_cast<Mask>(t) << 2;  // aux systems sit after B, E
    f.add(m, alpha[i]);
  }
  return f;
}

}  // namespace addicone
