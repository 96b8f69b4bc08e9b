#pragma once

// Extended weights of sl_n + the grading operator d, and their exponential
// images: Laurent monomials/polynomials in z_1..z_{n-1}, q over exact
// rationals.  The polynomial ring is a plain ordered map from exponent
// vectors to coefficients; the only nontrivial operation is exact division
// by a binomial 1 - f, done coset-by-coset along the direction of f.

#include <compare>
#include <map>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace degflag {

/// Weight in the basis (omega_1 .. omega_{n-1}, d).
struct ExtendedWeight {
  std::vector<int> fundamental;  // coefficients of omega_1..omega_{n-1}
  int degree = 0;                // coefficient of d

  ExtendedWeight() = default;
  explicit ExtendedWeight(int rank) : fundamental(rank, 0) {}

  ExtendedWeight& operator+=(const ExtendedWeight& o) {
    if (fundamental.size() != o.fundamental.size()) throw structural_error("rank mismatch");
    for (std::size_t t = 0; t < fundamental.size(); ++t) fundamental[t] += o.fundamental[t];
    degree += o.degree;
    return *this;
  }
  ExtendedWeight& operator-=(const ExtendedWeight& o) {
    if (fundamental.size() != o.fundamental.size()) throw structural_error("rank mismatch");
    for (std::size_t t = 0; t < fundamental.size(); ++t) fundamental[t] -= o.fundamental[t];
    degree -= o.degree;
    return *this;
  }
  friend ExtendedWeight operator+(ExtendedWeight a, const ExtendedWeight& b) { return a += b; }
  friend ExtendedWeight operator-(ExtendedWeight a, const ExtendedWeight& b) { return a -= b; }
  ExtendedWeight operator*(int k) const {
    ExtendedWeight w = *this;
    for (auto& m : w.fundamental) m *= k;
    w.degree *= k;
    return w;
  }
  friend bool operator==(const ExtendedWeight&, const ExtendedWeight&) = default;
};

/// lambda = sum ell_i omega_i with ell_i >= 0.
struct DominantWeight {
  std::vector<int> ell;

  DominantWeight() = default;
  explicit DominantWeight(std::vector<int> e) : ell(std::move(e)) {
    for (int v : ell)
      if (v < 0) throw structural_error("dominant weight has a negative coordinate");
  }
  int rank() const { return static_cast<int>(ell.size()); }
  bool is_zero() const {
    for (int v : ell)
      if (v) return false;
    return true;
  }
};

/// z_1^{e_1} .. z_{n-1}^{e_{n-1}} q^{e_q}.  Ordered lexicographically on
/// (q exponent, z exponents); the order is purely presentational.
struct LaurentMonomial {
  std::vector<int> z;
  int q = 0;

  LaurentMonomial() = default;
  explicit LaurentMonomial(int rank) : z(rank, 0) {}
  LaurentMonomial(std::vector<int> z_, int q_) : z(std::move(z_)), q(q_) {}

  static LaurentMonomial exp(const ExtendedWeight& w) {
    return LaurentMonomial(w.fundamental, w.degree);
  }

  bool is_one() const {
    if (q) return false;
    for (int e : z)
      if (e) return false;
    return true;
  }

  LaurentMonomial operator*(const LaurentMonomial& o) const {
    if (z.size() != o.z.size()) throw structural_error("rank mismatch");
    LaurentMonomial m = *this;
    for (std::size_t t = 0; t < z.size(); ++t) m.z[t] += o.z[t];
    m.q += o.q;
    return m;
  }
  LaurentMonomial inverse() const {
    LaurentMonomial m = *this;
    for (auto& e : m.z) e = -e;
    m.q = -m.q;
    return m;
  }

  friend bool operator==(const LaurentMonomial&, const LaurentMonomial&) = default;
  friend std::strong_ordering operator<=>(const LaurentMonomial& a, const LaurentMonomial& b) {
    if (auto c = a.q <=> b.q; c != 0) return c;
    return a.z <=> b.z;
  }

  /// Value at z_i = zs[i-1], q = qv.  Bases must be nonzero wherever the
  /// exponent is negative.
  Rational evaluate(const std::vector<Rational>& zs, const Rational& qv) const;
};

inline Rational rational_pow(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  Rational b = base;
  if (e < 0) {
    if (b == 0) throw precondition_error("zero base with negative exponent");
    b = 1 / b;
    e = -e;
  }
  Rational out(1);
  while (e) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

inline Rational LaurentMonomial::evaluate(const std::vector<Rational>& zs,
                                          const Rational& qv) const {
  if (zs.size() != z.size()) throw structural_error("evaluation point has wrong arity");
  Rational v = rational_pow(qv, q);
  for (std::size_t t = 0; t < z.size(); ++t) v *= rational_pow(zs[t], z[t]);
  return v;
}

class LaurentPolynomial {
 public:
  using TermMap = std::map<LaurentMonomial, Rational>;

  LaurentPolynomial() = default;
  static LaurentPolynomial monomial(const LaurentMonomial& m, Rational c = Rational(1)) {
    LaurentPolynomial p;
    if (c != 0) p.terms_[m] = std::move(c);
    return p;
  }
  static LaurentPolynomial one(int rank) { return monomial(LaurentMonomial(rank)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const LaurentMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) {
    return a += b;
  }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) {
    return a -= b;
  }
  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

  LaurentPolynomial times(const LaurentMonomial& m, const Rational& c = Rational(1)) const {
    LaurentPolynomial out;
    for (const auto& [mm, cc] : terms_) out.add_term(mm * m, cc * c);
    return out;
  }

  LaurentPolynomial operator*(const LaurentPolynomial& o) const {
    LaurentPolynomial out;
    for (const auto& [m, c] : terms_)
      for (const auto& [mm, cc] : o.terms_) out.add_term(m * mm, c * cc);
    return out;
  }

  Rational evaluate(const std::vector<Rational>& zs, const Rational& qv) const {
    Rational v(0);
    for (const auto& [m, c] : terms_) v += c * m.evaluate(zs, qv);
    return v;
  }

  /// Exact division by (1 - f) for a monomial f != 1.  Groups the support
  /// into cosets of Z*exp(f) and takes prefix sums along each; a coset whose
  /// coefficients do not sum to zero means the division is not exact, which
  /// in this library always signals a bug.
  LaurentPolynomial divide_by_one_minus(const LaurentMonomial& f) const {
    if (f.is_one()) throw precondition_error("division by 1 - 1");
    const std::size_t arity = f.z.size() + 1;
    auto exps = [arity](const LaurentMonomial& m) {
      std::vector<int> e(arity);
      e[0] = m.q;
      for (std::size_t t = 1; t < arity; ++t) e[t] = m.z[t - 1];
      return e;
    };
    std::vector<int> v = exps(f);
    std::size_t i0 = 0;
    while (i0 < arity && v[i0] == 0) ++i0;
    auto floor_div = [](int a, int b) {
      int q = a / b, r = a % b;
      return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
    };

    std::map<std::vector<int>, std::map<int, Rational>> cosets;
    for (const auto& [m, c] : terms_) {
      std::vector<int> e = exps(m);
      int k = floor_div(e[i0], v[i0]);
      for (std::size_t t = 0; t < arity; ++t) e[t] -= k * v[t];
      cosets[std::move(e)][k] = c;
    }

    LaurentPolynomial out;
    for (const auto& [rep, line] : cosets) {
      int kmin = line.begin()->first;
      int kmax = line.rbegin()->first;
      Rational running(0);
      for (int k = kmin; k < kmax; ++k) {
        if (auto it = line.find(k); it != line.end()) running += it->second;
        if (running == 0) continue;
        LaurentMonomial m(static_cast<int>(arity - 1));
        m.q = rep[0] + k * v[0];
        for (std::size_t t = 1; t < arity; ++t) m.z[t - 1] = rep[t] + k * v[t];
        out.add_term(m, running);
      }
      running += line.rbegin()->second;
      if (running != 0)
        throw consistency_error("division by 1 - f left a nonzero remainder");
    }
    return out;
  }

 private:
  TermMap terms_;
};

}  // namespace degflag
