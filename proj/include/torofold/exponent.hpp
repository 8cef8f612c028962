#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "torofold/error.hpp"

namespace torofold {

// Monomial exponent in at most three variables.  Unused variables stay 0.
struct expo {
  std::array<int, 3> e{0, 0, 0};

  int deg() const { return e[0] + e[1] + e[2]; }

  // graded, then lexicographic from the first variable; strict total order
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(deg()) << 36) |
           (static_cast<std::uint64_t>(4095 - e[0]) << 24) |
           (static_cast<std::uint64_t>(4095 - e[1]) << 12) |
           static_cast<std::uint64_t>(4095 - e[2]);
  }

  friend bool operator==(const expo& a, const expo& b) { return a.e == b.e; }
  friend bool operator!=(const expo& a, const expo& b) { return !(a.e == b.e); }
  friend bool operator<(const expo& a, const expo& b) { return a.key() < b.key(); }

  friend expo operator+(const expo& a, const expo& b) {
    expo r;
    for (int i = 0; i < 3; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
  }
  friend expo operator-(const expo& a, const expo& b) {
    expo r;
    for (int i = 0; i < 3; ++i) {
      r.e[i] = a.e[i] - b.e[i];
      check(r.e[i] >= 0, errc::internal, "negative exponent");
    }
    return r;
  }

  bool divides(const expo& b) const {
    for (int i = 0; i < 3; ++i)
      if (e[i] > b.e[i]) return false;
    return true;
  }
};

inline expo exp3(int a, int b, int c) {
  check(a >= 0 && b >= 0 && c >= 0 && a < 4096 && b < 4096 && c < 4096, errc::range_error,
        "exponent out of range");
  return expo{{a, b, c}};
}

inline expo unit_exp(int var) {
  check(var >= 0 && var < 3, errc::range_error, "variable index");
  expo r;
  r.e[var] = 1;
  return r;
}

}  // namespace torofold
