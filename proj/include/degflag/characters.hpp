#pragma once

// PBW-graded characters via torus localization.  A fixed point of the
// resolution is an admissible collection S; its contribution to the graded
// character of the highest-weight module is
//
//     e^{gamma_lambda(S)} / prod_{slots} (1 - e^{gamma(S'_{i,j}) - gamma(S_{i,j})}),
//
// where S'_{i,j} swaps the chosen candidate of the slot for the rejected one.
// The exact path sums the 2^M contributions by telescoping pairs of sibling
// collections in reverse beta order: every intermediate value is the
// character of the remaining fiber tower and hence a Laurent polynomial, so
// each step is one exact division by a binomial.  The evaluation path sums
// the same terms pointwise over exact rationals for ranks where the exact
// expansion is off the table.

#include <vector>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "weights.hpp"

namespace degflag {

/// Extended weight of the fixed point of Gr(i, W_{i,j}) labeled by S:
/// sum over l in S of (omega_l - omega_{l-1}) plus #{l in S : l > i} d,
/// with omega_0 = omega_n = 0.
inline ExtendedWeight gamma(const IndexSet& S, RootIndex slot) {
  int n = S.n;
  ExtendedWeight w(n - 1);
  for (int l : S.elements()) {
    if (l <= n - 1) w.fundamental[l - 1] += 1;
    if (l - 1 >= 1) w.fundamental[l - 2] -= 1;
    if (l > slot.i) w.degree += 1;
  }
  return w;
}

/// Weight of the image of the fixed point in P(V_lambda^a); depends only on
/// the diagonal entries.
inline ExtendedWeight gamma_lambda(const Collection& c, const DominantWeight& lam) {
  if (lam.rank() != c.n - 1) throw structural_error("weight rank mismatch");
  SlotTable t(c.n);
  ExtendedWeight w(c.n - 1);
  for (int i = 1; i <= c.n - 1; ++i) {
    if (lam.ell[i - 1] == 0) continue;
    w += gamma(c.at(t, i, i), {i, i}) * lam.ell[i - 1];
  }
  return w;
}

/// One localization summand: a monomial numerator over a product of
/// (1 - monomial) factors, one per slot.
struct RationalTerm {
  LaurentMonomial numerator;
  std::vector<LaurentMonomial> denominator_factors;  // sorted, as a multiset
};

inline RationalTerm abl_term(const Collection& c, const DominantWeight& lam) {
  SlotTable t(c.n);
  if (!is_admissible(c)) throw precondition_error("collection is not admissible");
  RationalTerm term;
  term.numerator = LaurentMonomial::exp(gamma_lambda(c, lam));
  for (int id = 0; id < t.size(); ++id) {
    RootIndex slot = t.slot(id);
    ABPair ab = ab_pair(c, t, slot);
    const IndexSet& s = c.sets[id];
    IndexSet swapped(c.n, (s.bits & ~(std::uint64_t{1} << (ab.a - 1))) |
                              (std::uint64_t{1} << (ab.b - 1)));
    term.denominator_factors.push_back(
        LaurentMonomial::exp(gamma(swapped, slot) - gamma(s, slot)));
  }
  std::sort(term.denominator_factors.begin(), term.denominator_factors.end());
  return term;
}

/// Graded character as a Laurent polynomial: positive integer coefficients,
/// nonnegative q exponents, and q^0 part equal to e^lambda.
struct QCharacter {
  LaurentPolynomial polynomial;

  void validate(const DominantWeight& lam) const {
    LaurentMonomial top(lam.rank());
    top.z = lam.ell;
    bool saw_top = false;
    for (const auto& [m, c] : polynomial.terms()) {
      if (m.q < 0) throw consistency_error("negative q exponent in a graded character");
      if (c <= 0 || c.get_den() != 1)
        throw consistency_error("non positive-integer coefficient in a graded character");
      if (m.q == 0) {
        if (m != top || c != 1) throw consistency_error("q^0 part is not e^lambda");
        saw_top = true;
      }
    }
    if (!saw_top) throw consistency_error("missing highest-weight term");
  }
};

namespace detail {

struct AblContext {
  int n;
  SlotTable table;
  DominantWeight lam;
  Collection c;

  AblContext(int n_, const DominantWeight& lam_) : n(n_), table(n_), lam(lam_), c(n_) {
    if (n_ < 2) throw precondition_error("rank must be at least 2");
    if (lam_.rank() != n_ - 1) throw structural_error("lambda must have n-1 coordinates");
  }

  std::pair<IndexSet, IndexSet> choices(int id) const {
    auto [i, j] = table.slot(id);
    std::uint64_t base = i > 1 ? c.sets[table.id(i - 1, j)].bits : 0;
    std::uint64_t cand = candidate_mask(c, table, id);
    std::uint64_t lo = cand & -cand;
    return {IndexSet(n, base | lo), IndexSet(n, base | (cand ^ lo))};
  }
};

inline LaurentPolynomial abl_sum_exact(AblContext& ctx, int id) {
  if (id == ctx.table.size())
    return LaurentPolynomial::monomial(LaurentMonomial::exp(gamma_lambda(ctx.c, ctx.lam)));
  RootIndex slot = ctx.table.slot(id);
  auto [first, second] = ctx.choices(id);

  ctx.c.sets[id] = first;
  ctx.c.present[id] = 1;
  LaurentPolynomial g_first = abl_sum_exact(ctx, id + 1);
  ctx.c.sets[id] = second;
  LaurentPolynomial g_second = abl_sum_exact(ctx, id + 1);
  ctx.c.present[id] = 0;

  // Tangent character of the first branch; the sibling's is its inverse.
  LaurentMonomial f = LaurentMonomial::exp(gamma(second, slot) - gamma(first, slot));
  return (g_first - g_second.times(f)).divide_by_one_minus(f);
}

inline void abl_sum_eval(AblContext& ctx, int id, const std::vector<Rational>& zs,
                         const Rational& qv, const Rational& inv_denominator, Rational& total) {
  if (id == ctx.table.size()) {
    total += LaurentMonomial::exp(gamma_lambda(ctx.c, ctx.lam)).evaluate(zs, qv) *
             inv_denominator;
    return;
  }
  RootIndex slot = ctx.table.slot(id);
  auto [first, second] = ctx.choices(id);
  LaurentMonomial f = LaurentMonomial::exp(gamma(second, slot) - gamma(first, slot));
  Rational fv = f.evaluate(zs, qv);
  if (fv == 1) throw resample_required("tangent character evaluates to 1 at the chosen point");

  ctx.c.present[id] = 1;
  ctx.c.sets[id] = first;
  abl_sum_eval(ctx, id + 1, zs, qv, inv_denominator / (1 - fv), total);
  ctx.c.sets[id] = second;
  abl_sum_eval(ctx, id + 1, zs, qv, inv_denominator / (1 - 1 / fv), total);
  ctx.c.present[id] = 0;
}

}  // namespace detail

/// Exact localization sum over all 2^M fixed points, reduced to a Laurent
/// polynomial.  Guarded: the expansion is exponential in M, so ranks above
/// the cap must go through abl_character_eval.
inline QCharacter abl_character_exact(int n, const DominantWeight& lam, int exact_rank_cap = 5) {
  if (n > exact_rank_cap)
    throw capacity_error("exact path is capped at n <= " + std::to_string(exact_rank_cap) +
                         "; use the evaluation path");
  detail::AblContext ctx(n, lam);
  QCharacter ch{detail::abl_sum_exact(ctx, 0)};
  ch.validate(lam);
  return ch;
}

/// Exact rational value of the localization sum at a point (z_1..z_{n-1}, q).
/// Throws resample_required when some denominator factor vanishes there.
inline Rational abl_character_eval(int n, const DominantWeight& lam,
                                   const std::vector<Rational>& zs, const Rational& qv) {
  detail::AblContext ctx(n, lam);
  if (static_cast<int>(zs.size()) != n - 1)
    throw structural_error("evaluation point has wrong arity");
  Rational total(0);
  detail::abl_sum_eval(ctx, 0, zs, qv, Rational(1), total);
  return total;
}

/// q = 1 specialization: the classical character of V_lambda.
inline LaurentPolynomial specialize_q1(const QCharacter& ch) {
  LaurentPolynomial out;
  for (const auto& [m, c] : ch.polynomial.terms()) {
    LaurentMonomial zm = m;
    zm.q = 0;
    out.add_term(zm, c);
  }
  return out;
}

/// Dimensions of the graded pieces: coefficient sums per q power.
inline std::vector<std::uint64_t> graded_dimensions(const QCharacter& ch) {
  std::vector<std::uint64_t> dims;
  for (const auto& [m, c] : ch.polynomial.terms()) {
    if (m.q < 0) throw consistency_error("negative q exponent");
    if (static_cast<int>(dims.size()) <= m.q) dims.resize(m.q + 1, 0);
    dims[m.q] += c.get_num().get_ui();
  }
  return dims;
}

}  // namespace degflag
