#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "torofold/error.hpp"

namespace torofold {

using rat = mpq_class;

inline rat rat_of(long n, long d = 1) {
  rat r(n, d);
  r.canonicalize();
  return r;
}

// Accepts "p", "-p", "p/q".
inline rat parse_rat(const std::string& s) {
  try {
    rat r(s);
    check(r.get_den() != 0, errc::parse_error, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    fail(errc::parse_error, "bad rational literal '" + s + "'");
  }
}

inline std::string rat_str(const rat& r) { return r.get_str(); }

inline bool is_integer(const rat& r) { return r.get_den() == 1; }

inline long to_long(const rat& r) {
  check(is_integer(r), errc::range_error, "expected integer, got " + rat_str(r));
  check(r.get_num().fits_slong_p(), errc::range_error, "integer too large: " + rat_str(r));
  return r.get_num().get_si();
}

inline mpz_class floor_rat(const rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline rat pow_int(const rat& base, long e) {
  if (e == 0) return rat(1);
  check(base != 0 || e > 0, errc::not_a_unit, "0 to a nonpositive power");
  rat b = e > 0 ? base : rat(1) / base;
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  rat acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

// Full trial-division factorization of a positive integer. Scenario constants are
// small; anything with a factor beyond the cap is rejected rather than guessed at.
inline std::vector<std::pair<mpz_class, long>> factor_positive(mpz_class n) {
  check(n > 0, errc::internal, "factor_positive needs a positive argument");
  std::vector<std::pair<mpz_class, long>> out;
  const long cap = 1000000;
  for (long p = 2; mpz_class(p) * p <= n; p == 2 ? p = 3 : p += 2) {
    check(p <= cap, errc::not_representable, "constant too large to factor exactly");
    long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline long lgcd(long a, long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace torofold
