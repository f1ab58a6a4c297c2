#pragma once

#include <cstdint>
#include <numeric>

#include "errors.hpp"

namespace symcirc {

// Exact rational on 64-bit components, reduced after every operation.
// Intermediates go through 128-bit arithmetic; desk-scale circuit work never
// approaches the limits, and overflow past int64 after reduction throws.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat() = default;
  Rat(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0)
      throw Error(ErrorCode::Internal, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_integer() const { return den == 1; }

  Rat operator+(const Rat &o) const {
    __int128 n = static_cast<__int128>(num) * o.den +
                 static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw Error(ErrorCode::Internal, "rational overflow");
    Rat r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  bool operator==(const Rat &o) const { return num == o.num && den == o.den; }

  // this >= a/b
  bool ge(std::int64_t a, std::int64_t b) const {
    return static_cast<__int128>(num) * b >= static_cast<__int128>(a) * den;
  }

private:
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

} // namespace symcirc
