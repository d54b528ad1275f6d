#pragma once

#include <string>
#include <vector>

#include "addicone/functional.hpp"

namespace addicone {

enum class InequalityFamily {
  NonNegativity,        // H(A) >= 0
  StrongSubadditivity,  // I(A;B|C) >= 0, C nonempty
  WeakMonotonicity,     // H(C|A) + H(C|B) >= 0
  Subadditivity,        // I(A;B) >= 0
  ArakiLieb,            // H(AB) + H(A) - H(B) >= 0
  ClassicalConditional, // H(X_i | rest) >= 0
  ClassicalCMI          // I(X_i; X_j | K) >= 0
};

inline const char* family_name(InequalityFamily f) {
  switch (f) {
    case InequalityFamily::NonNegativity: return "nonnegativity";
    case InequalityFamily::StrongSubadditivity: return "strong-subadditivity";
    case InequalityFamily::WeakMonotonicity: return "weak-monotonicity";
    case InequalityFamily::Subadditivity: return "subadditivity";
    case InequalityFamily::ArakiLieb: return "araki-lieb";
    case InequalityFamily::ClassicalConditional: return "conditional-entropy";
    case InequalityFamily::ClassicalCMI: return "conditional-mutual-information";
  }
  return "?";
}

/// One instance "functional >= 0" of an inequality family.
struct InequalityInstance {
  InequalityFamily family;
  std::string name;
  LinearEntropyFunctional f;
};

namespace detail {

inline std::string paren_label(const SystemContext& ctx, Mask a, Mask b, Mask c) {
  std::string s = "I(" + ctx.label(a) + ";" + ctx.label(b);
  if (c) s += "|" + ctx.label(c);
  return s + ")";
}

}  // namespace detail

/// The standard inner-approximating inequality set for von Neumann entropy:
/// nonnegativity, strong subadditivity, weak monotonicity, subadditivity and
/// the triangle inequality, instantiated on every admissible subset tuple.
/// Deliberately redundant; consumers treat it as an LP generator list.
inline std::vector<InequalityInstance> quantum_basic_set(const SystemContext& ctx) {
  if (ctx.n() > 8) throw std::invalid_argument("quantum_basic_set: more than 8 systems");
  const Mask full = ctx.full_mask();
  std::vector<InequalityInstance> out;

  for (Mask a = 1; a <= full; ++a)
    out.push_back({InequalityFamily::NonNegativity, "H(" + ctx.label(a) + ")",
                   LinearEntropyFunctional::entropy(ctx, a)});

  for (Mask a = 1; a <= full; ++a)
    for (Mask b = a + 1; b <= full; ++b) {
      if (a & b) continue;
      const Mask rest = full & ~(a | b);
      // C runs over nonempty subsets of the complement of A and B.
      for (Mask c = rest; c; c = (c - 1) & rest)
        out.push_back({InequalityFamily::StrongSubadditivity, detail::paren_label(ctx, a, b, c),
                       LinearEntropyFunctional::cmi(ctx, a, b, c)});
    }

  for (Mask a = 1; a <= full; ++a)
    for (Mask b = a + 1; b <= full; ++b) {
      if (a & b) continue;
      const Mask rest = full & ~(a | b);
      for (Mask c = rest; c; c = (c - 1) & rest) {
        LinearEntropyFunctional f = LinearEntropyFunctional::conditional(ctx, c, a) +
                                    LinearEntropyFunctional::conditional(ctx, c, b);
        out.push_back({InequalityFamily::WeakMonotonicity,
                       "H(" + ctx.label(c) + "|" + ctx.label(a) + ")+H(" + ctx.label(c) + "|" +
                           ctx.label(b) + ")",
                       std::move(f)});
      }
    }

  for (Mask a = 1; a <= full; ++a)
    for (Mask b = a + 1; b <= full; ++b) {
      if (a & b) continue;
      out.push_back({InequalityFamily::Subadditivity, detail::paren_label(ctx, a, b, 0),
                     LinearEntropyFunctional::cmi(ctx, a, b, 0)});
    }

  for (Mask a = 1; a <= full; ++a)
    for (Mask b = 1; b <= full; ++b) {
      if ((a & b) || a == b) continue;
      LinearEntropyFunctional f =
          LinearEntropyFunctional::entropy(ctx, a | b) + LinearEntropyFunctional::entropy(ctx, a) -
          LinearEntropyFunctional::entropy(ctx, b);
      out.push_back({InequalityFamily::ArakiLieb,
                     "H(" + ctx.label(a | b) + ")+H(" + ctx.label(a) + ")-H(" + ctx.label(b) + ")",
                     std::move(f)});
    }

  return out;
}

/// Elemental generating set of the Shannon cone:
/// H(X_i | rest) >= 0 and I(X_i; X_j | K) >= 0 over all K.
/// Instance count is n + C(n,2) * 2^(n-2).
inline std::vector<InequalityInstance> classical_elemental_set(const SystemContext& ctx) {
  if (ctx.n() > 8) throw std::invalid_argument("classical_elemental_set: more than 8 systems");
  const Mask full = ctx.full_mask();
  std::vector<InequalityInstance> out;

  for (std::size_t i = 0; i < ctx.n(); ++i) {
    const Mask a = Mask{1} << i;
    out.push_back({InequalityFamily::ClassicalConditional,
                   "H(" + ctx.label(a) + "|" + ctx.label(full & ~a) + ")",
                   LinearEntropyFunctional::conditional(ctx, a, full & ~a)});
  }

  for (std::size_t i = 0; i < ctx.n(); ++i)
    for (std::size_t j = i + 1; j < ctx.n(); ++j) {
      const Mask a = Mask{1} << i, b = Mask{1} << j;
      const Mask rest = full & ~(a | b);
      Mask k = 0;
      while (true) {
        out.push_back({InequalityFamily::ClassicalCMI, detail::paren_label(ctx, a, b, k),
                       LinearEntropyFunctional::cmi(ctx, a, b, k)});
        if (k == rest) break;
        k = (k - rest) & rest;  // next subset of rest
      }
    }

  return out;
}

}  // namespace addicone
