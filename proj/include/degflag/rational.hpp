#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

#include "errors.hpp"

namespace degflag {

/// All arithmetic in the library is exact.  GMP rationals are used throughout;
/// they are always kept in canonical form by gmpxx.
using Rational = mpq_class;

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational rational_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw structural_error("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

/// Deterministic source of small rationals (|num| <= 10, 1 <= den <= 10) used
/// for randomized geometry trials.  Small bounds keep the bit-size of exact
/// row reductions flat across trials.
class SmallRationalSampler {
 public:
  explicit SmallRationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational operator()() {
    std::uniform_int_distribution<int> num(-10, 10);
    std::uniform_int_distribution<int> den(1, 10);
    return Rational(num(rng_), den(rng_));
  }

  Rational nonzero() {
    for (;;) {
      Rational r = (*this)();
      if (r != 0) return r;
    }
  }

  /// Integer in [lo, hi].
  int integer(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace degflag
