#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "torofold/rational.hpp"

namespace torofold {

// ---------------------------------------------------------------------------
// Symbolic constants.
//
// Coefficients live in the field Q(S) generated over Q by a set of named
// indeterminate constants (the "generic" translation constants) together with
// formal rational powers of primes (exact q-th-root markers for rational
// constants that are not perfect powers).  A base is identified by an id:
//   id > 0  : the prime number id itself, carried with a fractional exponent
//             in [0,1) (integer parts fold into the rational coefficient);
//   id < 0  : a named indeterminate, any nonzero rational exponent.
// ---------------------------------------------------------------------------

namespace detail {
struct symtab {
  std::vector<std::string> names;
  std::mutex mu;
  static symtab& get() {
    static symtab t;
    return t;
  }
};
}  // namespace detail

// Always creates a fresh indeterminate; the printed name is exactly `name`.
// Harnesses use chart-local fixed names, so reports stay deterministic.
inline std::int64_t fresh_symbol(const std::string& name) {
  auto& t = detail::symtab::get();
  std::lock_guard<std::mutex> lk(t.mu);
  t.names.push_back(name);
  return -static_cast<std::int64_t>(t.names.size());
}

inline std::string symbol_name(std::int64_t id) {
  if (id > 0) return mpz_class(static_cast<long>(id)).get_str();
  auto& t = detail::symtab::get();
  std::lock_guard<std::mutex> lk(t.mu);
  std::size_t ix = static_cast<std::size_t>(-id) - 1;
  return ix < t.names.size() ? t.names[ix] : "?sym";
}

// Monomial in the symbolic bases: sorted by id, exponents nonzero.
using sym_mono = std::vector<std::pair<std::int64_t, rat>>;

struct sym_term {
  rat c;
  sym_mono m;
};

inline int mono_cmp(const sym_mono& a, const sym_mono& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
    int c = cmp(a[i].second, b[i].second);
    if (c) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Canonicalize one term: fold integer parts of prime-base exponents into c,
// drop zero exponents.  A zero coefficient collapses the whole term.
inline void term_canon(sym_term& t) {
  sym_mono out;
  for (auto& [id, e] : t.m) {
    if (t.c == 0) break;
    rat ee = e;
    if (id > 0) {
      mpz_class fl = floor_rat(ee);
      if (fl != 0) {
        rat scale = pow_int(rat(mpz_class(static_cast<long>(id))), fl.get_si());
        t.c *= scale;
      }
      ee -= rat(fl);
    }
    if (ee != 0) out.emplace_back(id, ee);
  }
  if (t.c == 0) out.clear();
  t.m = std::move(out);
}

// Polynomial: sorted by monomial, combined, no zero coefficients.
struct sym_poly {
  std::vector<sym_term> t;

  bool is_zero() const { return t.empty(); }

  static sym_poly zero() { return {}; }
  static sym_poly constant(const rat& c) {
    sym_poly p;
    if (c != 0) p.t.push_back({c, {}});
    return p;
  }

  void canon() {
    for (auto& x : t) term_canon(x);
    std::sort(t.begin(), t.end(),
              [](const sym_term& a, const sym_term& b) { return mono_cmp(a.m, b.m) < 0; });
    std::vector<sym_term> out;
    for (auto& x : t) {
      if (x.c == 0) continue;
      if (!out.empty() && mono_cmp(out.back().m, x.m) == 0)
        out.back().c += x.c;
      else
        out.push_back(x);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const sym_term& a) { return a.c == 0; }),
              out.end());
    t = std::move(out);
  }
};

inline sym_poly operator+(const sym_poly& a, const sym_poly& b) {
  sym_poly r;
  r.t.reserve(a.t.size() + b.t.size());
  r.t.insert(r.t.end(), a.t.begin(), a.t.end());
  r.t.insert(r.t.end(), b.t.begin(), b.t.end());
  r.canon();
  return r;
}

inline sym_poly operator-(const sym_poly& a) {
  sym_poly r = a;
  for (auto& x : r.t) x.c = -x.c;
  return r;
}

inline sym_poly operator-(const sym_poly& a, const sym_poly& b) { return a + (-b); }

inline sym_mono mono_mul(const sym_mono& a, const sym_mono& b) {
  sym_mono r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i >= a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      rat e = a[i].second + b[j].second;
      if (e != 0) r.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return r;
}

inline sym_poly operator*(const sym_poly& a, const sym_poly& b) {
  sym_poly r;
  r.t.reserve(a.t.size() * b.t.size());
  for (auto& x : a.t)
    for (auto& y : b.t) r.t.push_back({x.c * y.c, mono_mul(x.m, y.m)});
  r.canon();
  return r;
}

inline bool operator==(const sym_poly& a, const sym_poly& b) {
  if (a.t.size() != b.t.size()) return false;
  for (std::size_t i = 0; i < a.t.size(); ++i)
    if (a.t[i].c != b.t[i].c || mono_cmp(a.t[i].m, b.t[i].m) != 0) return false;
  return true;
}

// Fraction of sym_polys.  Kept lightly normalized: zero numerator collapses the
// denominator, single-term denominators are folded into the numerator (so pure
// monomial denominators never accumulate), and equality uses cross products.
struct sym_frac {
  sym_poly num, den;  // den nonzero

  void normalize() {
    if (num.is_zero()) {
      den = sym_poly::constant(rat(1));
      return;
    }
    if (den.t.size() == 1) {
      const sym_term d = den.t[0];
      sym_mono inv;
      for (auto& [id, e] : d.m) inv.emplace_back(id, -e);
      for (auto& x : num.t) {
        x.c /= d.c;
        x.m = mono_mul(x.m, inv);
      }
      num.canon();
      den = sym_poly::constant(rat(1));
    }
  }

  bool is_rat() const {
    return den.t.size() == 1 && den.t[0].m.empty() && den.t[0].c == 1 &&
           (num.is_zero() || (num.t.size() == 1 && num.t[0].m.empty()));
  }
  rat as_rat() const { return num.is_zero() ? rat(0) : num.t[0].c; }
};

// ---------------------------------------------------------------------------
// Coeff: element of the coefficient field.  Fast path is a plain rational;
// symbolic values are shared immutably.
// ---------------------------------------------------------------------------
class coeff {
 public:
  coeff() : q_(0) {}
  coeff(long n) : q_(n) {}
  coeff(const rat& q) : q_(q) {}
  explicit coeff(sym_frac f) {
    f.num.canon();
    f.den.canon();
    check(!f.den.is_zero(), errc::internal, "zero denominator");
    f.normalize();
    if (f.is_rat())
      q_ = f.as_rat();
    else
      s_ = std::make_shared<const sym_frac>(std::move(f));
  }

  // A fresh indeterminate as a field element.
  static coeff symbol(std::int64_t id) {
    sym_frac f;
    f.num.t.push_back({rat(1), {{id, rat(1)}}});
    f.den = sym_poly::constant(rat(1));
    return coeff(std::move(f));
  }

  bool is_rational() const { return !s_; }
  const rat& as_rat() const {
    check(is_rational(), errc::not_representable, "coefficient is symbolic");
    return q_;
  }
  bool is_zero() const { return s_ ? false : q_ == 0; }

  sym_frac frac() const {
    if (s_) return *s_;
    sym_frac f;
    f.num = sym_poly::constant(q_);
    f.den = sym_poly::constant(rat(1));
    return f;
  }

  friend coeff operator+(const coeff& a, const coeff& b) {
    if (!a.s_ && !b.s_) return coeff(a.q_ + b.q_);
    sym_frac x = a.frac(), y = b.frac();
    sym_frac r;
    r.num = x.num * y.den + y.num * x.den;
    r.den = x.den * y.den;
    return coeff(std::move(r));
  }
  friend coeff operator-(const coeff& a, const coeff& b) { return a + (-b); }
  friend coeff operator-(const coeff& a) {
    if (!a.s_) return coeff(-a.q_);
    sym_frac r = *a.s_;
    r.num = -r.num;
    return coeff(std::move(r));
  }
  friend coeff operator*(const coeff& a, const coeff& b) {
    if (!a.s_ && !b.s_) return coeff(a.q_ * b.q_);
    if (a.is_zero() || b.is_zero()) return coeff();
    sym_frac x = a.frac(), y = b.frac();
    sym_frac r;
    r.num = x.num * y.num;
    r.den = x.den * y.den;
    return coeff(std::move(r));
  }
  coeff inv() const {
    check(!is_zero(), errc::not_a_unit, "division by zero coefficient");
    if (!s_) return coeff(rat(1) / q_);
    sym_frac r;
    r.num = s_->den;
    r.den = s_->num;
    return coeff(std::move(r));
  }
  friend coeff operator/(const coeff& a, const coeff& b) { return a * b.inv(); }

  friend bool operator==(const coeff& a, const coeff& b) {
    if (!a.s_ && !b.s_) return a.q_ == b.q_;
    sym_frac x = a.frac(), y = b.frac();
    return x.num * y.den == y.num * x.den;
  }
  friend bool operator!=(const coeff& a, const coeff& b) { return !(a == b); }

  // c^(p/q).  Positive-root convention; fractional powers of primes become
  // root markers, fractional powers of indeterminates scale their exponents.
  coeff pow(const rat& e) const;

  std::string str() const;

 private:
  rat q_;
  std::shared_ptr<const sym_frac> s_;
};

inline coeff coeff::pow(const rat& e) const {
  if (e == 0) {
    check(!is_zero(), errc::not_a_unit, "0^0");
    return coeff(1);
  }
  if (is_zero()) {
    check(e > 0, errc::not_a_unit, "0 to a negative power");
    return coeff();
  }
  if (is_integer(e)) {
    long n = to_long(e);
    coeff b = n > 0 ? *this : this->inv();
    unsigned long k = static_cast<unsigned long>(n > 0 ? n : -n);
    coeff acc(1);
    while (k) {
      if (k & 1) acc = acc * b;
      b = b * b;
      k >>= 1;
    }
    return acc;
  }
  // Fractional exponent: need a single monomial term over a trivial denominator.
  sym_frac f = frac();
  check(f.den.t.size() == 1 && f.den.t[0].m.empty() && f.num.t.size() == 1,
        errc::not_representable, "fractional power of a non-monomial coefficient");
  sym_term t = f.num.t[0];
  rat c = t.c / f.den.t[0].c;
  check(c > 0 || is_integer(e), errc::not_representable,
        "fractional power of a negative constant");
  sym_term out{rat(1), {}};
  for (auto& [id, ex] : t.m) out.m.emplace_back(id, ex * e);
  // c = sign * prod p^k: scale each prime exponent by e.
  for (auto& [p, k] : factor_positive(c.get_num()))
    out.m.emplace_back(p.get_si(), rat(k) * e);
  for (auto& [p, k] : factor_positive(c.get_den()))
    out.m.emplace_back(p.get_si(), rat(-k) * e);
  std::sort(out.m.begin(), out.m.end());
  sym_mono merged;
  for (auto& pr : out.m) {
    if (!merged.empty() && merged.back().first == pr.first)
      merged.back().second += pr.second;
    else
      merged.push_back(pr);
  }
  out.m = std::move(merged);
  sym_frac r;
  r.num.t.push_back(out);
  r.num.canon();
  r.den = sym_poly::constant(rat(1));
  return coeff(std::move(r));
}

inline std::string poly_str(const sym_poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const auto& t = p.t[i];
    std::string piece;
    if (t.m.empty()) {
      piece = rat_str(t.c);
    } else {
      if (t.c != 1) piece = rat_str(t.c) + "*";
      for (std::size_t j = 0; j < t.m.size(); ++j) {
        if (j) piece += "*";
        piece += symbol_name(t.m[j].first);
        if (t.m[j].second != 1) piece += "^(" + rat_str(t.m[j].second) + ")";
      }
    }
    if (i == 0)
      s = piece;
    else if (!piece.empty() && piece[0] == '-')
      s += piece;
    else
      s += "+" + piece;
  }
  return s;
}

inline std::string coeff::str() const {
  if (!s_) return rat_str(q_);
  sym_frac f = *s_;
  if (!(f.den.t.size() == 1 && f.den.t[0].m.empty() && f.den.t[0].c == 1)) {
    // scale so the denominator's first coefficient is 1 (printing only)
    rat lead = f.den.t[0].c;
    for (auto& x : f.num.t) x.c /= lead;
    for (auto& x : f.den.t) x.c /= lead;
    return "(" + poly_str(f.num) + ")/(" + poly_str(f.den) + ")";
  }
  return poly_str(f.num);
}

}  // namespace torofold
