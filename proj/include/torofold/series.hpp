#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "torofold/coeff.hpp"
#include "torofold/exponent.hpp"

namespace torofold {

inline constexpr int default_trunc = 16;

// Order of vanishing, possibly only bounded below when every stored term was
// truncated away: exact=false means "at least v".
struct ordv {
  bool exact = true;
  long v = 0;

  static ordv at_least(long t) { return {false, t}; }
  static ordv of(long n) { return {true, n}; }

  friend bool operator==(const ordv& a, const ordv& b) {
    return a.exact == b.exact && a.v == b.v;
  }
  std::string str() const { return exact ? std::to_string(v) : ">=" + std::to_string(v); }
};

// Truncated power series: the polynomial `ts` (degrees < trunc) plus the
// promise that nothing below degree `trunc` is missing.  Arithmetic keeps the
// weakest truncation of its inputs; differentiation and monomial division
// shift it accordingly.
template <class C>
class series {
 public:
  struct term {
    expo m;
    C c;
  };

  series() : trunc_(default_trunc) {}
  explicit series(int trunc) : trunc_(trunc) {
    check(trunc >= 0, errc::range_error, "negative truncation order");
  }

  static series zero(int t) { return series(t); }
  static series constant(const C& c, int t) {
    series r(t);
    if (!(c == C(0)) && t > 0) r.ts_.push_back({expo{}, c});
    return r;
  }
  static series variable(int i, int t) { return monomial(unit_exp(i), C(1), t); }
  static series monomial(const expo& m, const C& c, int t) {
    series r(t);
    if (!(c == C(0)) && m.deg() < t) r.ts_.push_back({m, c});
    return r;
  }
  // build from a term list in one pass; cheaper than add_term in a loop
  static series collect(std::vector<term> ts, int t) {
    series r(t);
    r.ts_ = std::move(ts);
    std::erase_if(r.ts_, [t](const term& x) { return x.m.deg() >= t; });
    r.canon();
    return r;
  }

  int trunc() const { return trunc_; }
  const std::vector<term>& terms() const { return ts_; }
  bool is_zero() const { return ts_.empty(); }

  C at(const expo& m) const {
    auto it = std::lower_bound(ts_.begin(), ts_.end(), m,
                               [](const term& t, const expo& k) { return t.m < k; });
    if (it != ts_.end() && it->m == m) return it->c;
    return C(0);
  }
  C at0() const { return at(expo{}); }
  bool is_unit() const { return !(at0() == C(0)); }

  void add_term(const expo& m, const C& c) {
    if (c == C(0) || m.deg() >= trunc_) return;
    ts_.push_back({m, c});
    canon();
  }

  ordv ord() const {
    if (ts_.empty()) return ordv::at_least(trunc_);
    long lo = trunc_;
    for (auto& t : ts_) lo = std::min(lo, static_cast<long>(t.m.deg()));
    return ordv::of(lo);
  }

  // smallest exponent of variable i over the support (0 for the zero series)
  int min_exp(int i) const {
    int lo = ts_.empty() ? 0 : ts_[0].m.e[i];
    for (auto& t : ts_) lo = std::min(lo, t.m.e[i]);
    return lo;
  }

  // componentwise minimum of the support: the monomial content
  expo content() const {
    check(!ts_.empty(), errc::precondition_violated, "content of zero series");
    expo r = ts_[0].m;
    for (auto& t : ts_)
      for (int i = 0; i < 3; ++i) r.e[i] = std::min(r.e[i], t.m.e[i]);
    return r;
  }

  series trunc_to(int t) const {
    check(t <= trunc_, errc::precondition_violated, "cannot raise truncation order");
    series r(t);
    for (auto& x : ts_)
      if (x.m.deg() < t) r.ts_.push_back(x);
    return r;
  }

  friend series operator+(const series& a, const series& b) {
    series r(std::min(a.trunc_, b.trunc_));
    r.ts_.reserve(a.ts_.size() + b.ts_.size());
    std::size_t i = 0, j = 0;
    while (i < a.ts_.size() || j < b.ts_.size()) {
      if (j >= b.ts_.size() || (i < a.ts_.size() && a.ts_[i].m < b.ts_[j].m)) {
        r.push_checked(a.ts_[i++]);
      } else if (i >= a.ts_.size() || b.ts_[j].m < a.ts_[i].m) {
        r.push_checked(b.ts_[j++]);
      } else {
        C c = a.ts_[i].c + b.ts_[j].c;
        r.push_checked({a.ts_[i].m, c});
        ++i, ++j;
      }
    }
    return r;
  }
  friend series operator-(const series& a) {
    series r = a;
    for (auto& t : r.ts_) t.c = -t.c;
    return r;
  }
  friend series operator-(const series& a, const series& b) { return a + (-b); }

  friend series operator*(const series& a, const series& b) {
    series r(std::min(a.trunc_, b.trunc_));
    for (auto& x : a.ts_) {
      if (x.m.deg() >= r.trunc_) continue;
      for (auto& y : b.ts_) {
        expo m = x.m + y.m;
        if (m.deg() >= r.trunc_) continue;
        r.ts_.push_back({m, x.c * y.c});
      }
    }
    r.canon();
    return r;
  }

  series scaled(const C& c) const {
    series r(trunc_);
    if (c == C(0)) return r;
    r.ts_ = ts_;
    for (auto& t : r.ts_) t.c = t.c * c;
    r.canon();
    return r;
  }

  series mul_monomial(const expo& m, const C& c) const {
    series r(trunc_);
    if (c == C(0)) return r;
    for (auto& t : ts_) {
      expo k = t.m + m;
      if (k.deg() < trunc_) r.ts_.push_back({k, t.c * c});
    }
    r.canon();
    return r;
  }

  // exact division by a monomial that divides every term
  series div_monomial(const expo& m) const {
    series r(std::max(0, trunc_ - m.deg()));
    for (auto& t : ts_) {
      check(m.divides(t.m), errc::precondition_violated, "monomial does not divide series");
      r.ts_.push_back({t.m - m, t.c});
    }
    r.canon();
    return r;
  }

  series partial(int i) const {
    series r(std::max(0, trunc_ - 1));
    for (auto& t : ts_) {
      if (t.m.e[i] == 0) continue;
      expo m = t.m;
      m.e[i] -= 1;
      if (m.deg() < r.trunc_) r.ts_.push_back({m, t.c * C(t.m.e[i])});
    }
    r.canon();
    return r;
  }

  // set variable i to zero
  series restrict0(int i) const {
    series r(trunc_);
    for (auto& t : ts_)
      if (t.m.e[i] == 0) r.ts_.push_back(t);
    return r;
  }

  // coefficient of (variable i)^k, as a series in the other variables
  series var_coeff(int i, int k) const {
    series r(std::max(0, trunc_ - k));
    for (auto& t : ts_) {
      if (t.m.e[i] != k) continue;
      expo m = t.m;
      m.e[i] = 0;
      if (m.deg() < r.trunc_) r.ts_.push_back({m, t.c});
    }
    r.canon();
    return r;
  }

  int max_var_exp(int i) const {
    int hi = 0;
    for (auto& t : ts_) hi = std::max(hi, t.m.e[i]);
    return hi;
  }

  // f(images[0], images[1], images[2]); truncation is the weakest among this
  // series and every image actually used
  series substitute(const std::array<series, 3>& images) const {
    int t = trunc_;
    for (int i = 0; i < 3; ++i)
      if (max_var_exp(i) > 0) t = std::min(t, images[i].trunc_);
    series r(t);
    std::array<std::vector<series>, 3> pows;
    for (int i = 0; i < 3; ++i) pows[i].push_back(constant(C(1), t));
    auto power = [&](int i, int k) -> const series& {
      while (static_cast<int>(pows[i].size()) <= k)
        pows[i].push_back(pows[i].back() * images[i].trunc_to(std::min(t, images[i].trunc_)));
      return pows[i][k];
    };
    std::vector<series> parts;
    for (auto& x : ts_) {
      series p = constant(x.c, t);
      for (int i = 0; i < 3; ++i)
        if (x.m.e[i] > 0) p = p * power(i, x.m.e[i]);
      parts.push_back(std::move(p));
    }
    // balanced reduction: summing into one accumulator re-merges the long
    // prefix once per term, which gets slow on wide inputs
    while (parts.size() > 1) {
      std::vector<series> next;
      for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
        next.push_back(parts[i] + parts[i + 1]);
      if (parts.size() & 1) next.push_back(std::move(parts.back()));
      parts = std::move(next);
    }
    if (!parts.empty()) r = r + parts[0];
    return r;
  }

  std::string str(const std::array<std::string, 3>& names) const {
    if (ts_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& t : ts_) {
      std::string c = t.c.str();
      std::string mono;
      for (int i = 0; i < 3; ++i) {
        if (t.m.e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[i];
        if (t.m.e[i] > 1) mono += "^" + std::to_string(t.m.e[i]);
      }
      std::string piece;
      if (mono.empty())
        piece = c;
      else if (c == "1")
        piece = mono;
      else if (c == "-1")
        piece = "-" + mono;
      else if (c.find_first_of("+-", 1) != std::string::npos && c[0] != '(')
        piece = "(" + c + ")*" + mono;
      else
        piece = c + "*" + mono;
      if (first) {
        s = piece;
        first = false;
      } else if (piece[0] == '-') {
        s += piece;
      } else {
        s += "+" + piece;
      }
    }
    return s;
  }

 private:
  void push_checked(const term& t) {
    if (!(t.c == C(0)) && t.m.deg() < trunc_) ts_.push_back(t);
  }
  void canon() {
    std::sort(ts_.begin(), ts_.end(),
              [](const term& a, const term& b) { return a.m < b.m; });
    std::vector<term> out;
    out.reserve(ts_.size());
    for (auto& t : ts_) {
      if (t.m.deg() >= trunc_) continue;
      if (!out.empty() && out.back().m == t.m)
        out.back().c = out.back().c + t.c;
      else
        out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const term& t) { return t.c == C(0); }),
              out.end());
    ts_ = std::move(out);
  }

  int trunc_;
  std::vector<term> ts_;
};

// equality of the parts both sides actually know
template <class C>
bool series_equal(const series<C>& a, const series<C>& b) {
  int t = std::min(a.trunc(), b.trunc());
  return (a.trunc_to(t) - b.trunc_to(t)).is_zero();
}

// 1/f for f with invertible constant term, by the geometric series
template <class C>
series<C> invert_unit(const series<C>& f) {
  check(f.is_unit(), errc::not_a_unit, "inverting a non-unit series");
  C c0 = f.at0();
  C c0i = C(1) / c0;
  int t = f.trunc();
  // u = 1 - f/c0 has positive order
  series<C> u = series<C>::constant(C(1), t) - f.scaled(c0i);
  series<C> acc = series<C>::constant(C(1), t);
  series<C> up = series<C>::constant(C(1), t);
  for (int k = 1; k < t; ++k) {
    up = up * u;
    if (up.is_zero()) break;
    acc = acc + up;
  }
  return acc.scaled(c0i);
}

using tseries = series<coeff>;

// f^e for rational e and f a unit: c0^e times the binomial series in u=f/c0-1
inline tseries pow_rational(const tseries& f, const rat& e) {
  check(f.is_unit(), errc::not_a_unit, "rational power of a non-unit series");
  coeff c0 = f.at0();
  int t = f.trunc();
  tseries u = f.scaled(coeff(1) / c0) - tseries::constant(coeff(1), t);
  tseries acc = tseries::constant(coeff(1), t);
  tseries up = tseries::constant(coeff(1), t);
  rat binom(1);
  for (int k = 1; k < t; ++k) {
    up = up * u;
    if (up.is_zero()) break;
    binom *= (e - rat(k - 1)) / rat(k);
    if (binom == 0) break;
    acc = acc + up.scaled(coeff(binom));
  }
  return acc.scaled(c0.pow(e));
}

inline tseries pow_integer(const tseries& f, long n) {
  int t = f.trunc();
  if (n == 0) return tseries::constant(coeff(1), t);
  tseries b = n > 0 ? f : invert_unit(f);
  unsigned long k = static_cast<unsigned long>(n > 0 ? n : -n);
  tseries acc = tseries::constant(coeff(1), t);
  while (k) {
    if (k & 1) acc = acc * b;
    b = b * b;
    k >>= 1;
  }
  return acc;
}

}  // namespace torofold
