#include "torofold/localform.hpp"

#include <climits>

#include "torofold/toric2d.hpp"

namespace torofold {

namespace {

long gcd2(long a, long b) {
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

void validate(const point_type& pt) {
  check(pt.npt >= 1 && pt.npt <= 3, errc::malformed_form, "point type must be 1, 2, or 3");
  check(pt.l >= 1, errc::malformed_form, "u-exponent multiplier must be positive");
  if (pt.npt == 1) check(pt.l == 1, errc::malformed_form, "a 1-point form carries no multiplier");
  long g = 0;
  for (int i = 0; i < 3; ++i) {
    if (i < pt.npt) {
      check(pt.ue[i] >= 1, errc::malformed_form, "u-exponents must be positive on meeting components");
      g = gcd2(g, pt.ue[i]);
    } else {
      check(pt.ue[i] == 0 && pt.ve[i] == 0, errc::malformed_form,
            "exponents must vanish off the meeting components");
    }
    check(pt.ve[i] >= 0, errc::malformed_form, "v-monomial exponents must be nonnegative");
  }
  if (pt.npt >= 2)
    check(g == 1, errc::malformed_form, "u-exponents must be coprime (common factor goes into l)");
}

// k with m == k*w componentwise, or -1 if m is not a power of w
long multiple_of(const expo& m, const expo& w) {
  long k = -1;
  for (int i = 0; i < 3; ++i) {
    if (w.e[i] == 0) {
      if (m.e[i] != 0) return -1;
      continue;
    }
    if (m.e[i] % w.e[i] != 0) return -1;
    long q = m.e[i] / w.e[i];
    if (k == -1)
      k = q;
    else if (k != q)
      return -1;
  }
  return k;
}

expo v_monomial(const point_type& pt) {
  return exp3(static_cast<int>(pt.ve[0]), static_cast<int>(pt.ve[1]), static_cast<int>(pt.ve[2]));
}

// the argument of P: the curve parameter x at a 1-point form, the full
// distinguished monomial otherwise
expo p_monomial(const point_type& pt) {
  return pt.npt == 1 ? exp3(1, 0, 0) : exp3(static_cast<int>(pt.ue[0]),
                                            static_cast<int>(pt.ue[1]),
                                            static_cast<int>(pt.ue[2]));
}

// monomial multiplication that raises the truncation by the shift degree,
// valid because the product's low part is fully determined by f's low part
tseries mul_monomial_raise(const tseries& f, const expo& m) {
  tseries r(f.trunc() + m.deg());
  for (auto& t : f.terms()) r.add_term(t.m + m, t.c);
  return r;
}

// P(w) as a series in x,y,z
tseries expand_p(const tseries& P, const expo& w, int trunc) {
  tseries r(trunc);
  for (auto& t : P.terms()) {
    check(t.m.e[1] == 0 && t.m.e[2] == 0, errc::malformed_form,
          "P must be univariate in the distinguished monomial");
    long k = t.m.e[0];
    if (k * static_cast<long>(w.deg()) >= trunc) continue;
    r.add_term(exp3(static_cast<int>(k * w.e[0]), static_cast<int>(k * w.e[1]),
                    static_cast<int>(k * w.e[2])),
               t.c);
  }
  return r;
}

// terms of F with z-exponent >= m, shifted down by z^m
tseries z_block(const tseries& F, long m) {
  tseries r(std::max(0, F.trunc() - static_cast<int>(m)));
  for (auto& t : F.terms()) {
    if (t.m.e[2] < m) continue;
    expo e = t.m;
    e.e[2] -= static_cast<int>(m);
    r.add_term(e, t.c);
  }
  return r;
}

expo witness_of(const tseries& A, long zexp) {
  expo e = A.terms().front().m;
  e.e[2] = static_cast<int>(zexp);
  return e;
}

// A = x^r y^s * unit (s stripped only at a 2-point form); nullopt if the
// cofactor is not a unit
std::optional<prep_rung> strip_rung(const tseries& A, int npt) {
  long r = A.min_exp(0);
  long s = npt == 2 ? A.min_exp(1) : 0;
  tseries Q = A.div_monomial(exp3(static_cast<int>(r), static_cast<int>(s), 0));
  if (Q.at0() == coeff(0)) return std::nullopt;
  return prep_rung{Q, r, s};
}

}  // namespace

point_type pt_one(long a) {
  point_type p;
  p.npt = 1;
  p.ue = {a, 0, 0};
  p.l = 1;
  return p;
}

point_type pt_two(long a, long b, long l) {
  point_type p;
  p.npt = 2;
  p.ue = {a, b, 0};
  p.l = l;
  return p;
}

point_type pt_three(long a, long b, long c, long l) {
  point_type p;
  p.npt = 3;
  p.ue = {a, b, c};
  p.l = l;
  return p;
}

expo base_monomial(const point_type& pt) {
  return exp3(static_cast<int>(pt.ue[0]), static_cast<int>(pt.ue[1]),
              static_cast<int>(pt.ue[2]));
}

local_form decompose(const point_type& pt0, const tseries& v) {
  point_type pt = pt0;
  pt.ve = {0, 0, 0};
  validate(pt);
  expo w = p_monomial(pt);
  std::vector<tseries::term> pts, rts;
  for (auto& t : v.terms()) {
    long k = multiple_of(t.m, w);
    if (k >= 0)
      pts.push_back({exp3(static_cast<int>(k), 0, 0), t.c});
    else
      rts.push_back(t);
  }
  tseries P = tseries::collect(std::move(pts), v.trunc());
  tseries rest = tseries::collect(std::move(rts), v.trunc());
  check(!rest.is_zero(), errc::degenerate_v,
        "v is a series in the distinguished monomial up to truncation");
  expo ct = rest.content();
  for (int i = 0; i < pt.npt; ++i) pt.ve[i] = ct.e[i];
  local_form lf;
  lf.pt = pt;
  lf.P = P;
  lf.F = rest.div_monomial(v_monomial(pt));
  lf.trunc = v.trunc();
  return lf;
}

std::pair<tseries, tseries> recompose(const local_form& lf) {
  validate(lf.pt);
  expo ue = exp3(static_cast<int>(lf.pt.ue[0] * lf.pt.l), static_cast<int>(lf.pt.ue[1] * lf.pt.l),
                 static_cast<int>(lf.pt.ue[2] * lf.pt.l));
  tseries u = tseries::monomial(ue, coeff(1), lf.trunc);
  tseries v = expand_p(lf.P, p_monomial(lf.pt), lf.trunc) +
              mul_monomial_raise(lf.F, v_monomial(lf.pt));
  return {u, v};
}

sigval sigma(const local_form& lf) {
  validate(lf.pt);
  const tseries& F = lf.F;
  if (lf.pt.npt == 1) {
    tseries s = F.restrict0(0);
    check(!s.is_zero(), errc::malformed_form, "x divides F in a 1-point form");
    return ordv::of(s.ord().v - 1);
  }
  if (lf.pt.npt == 2) {
    tseries s = F.restrict0(0).restrict0(1);
    if (s.is_zero()) return ordv::at_least(F.trunc() - 1);
    long n = s.ord().v;
    if (n == 0) {
      long det = lf.pt.ue[0] * lf.pt.ve[1] - lf.pt.ue[1] * lf.pt.ve[0];
      check(det != 0, errc::precondition_violated,
            "unit F at a 2-point form requires an independent v-monomial");
      return ordv::of(0);
    }
    return ordv::of(n - 1);
  }
  if (!(F.at0() == coeff(0))) {
    long m01 = lf.pt.ue[0] * lf.pt.ve[1] - lf.pt.ue[1] * lf.pt.ve[0];
    long m02 = lf.pt.ue[0] * lf.pt.ve[2] - lf.pt.ue[2] * lf.pt.ve[0];
    long m12 = lf.pt.ue[1] * lf.pt.ve[2] - lf.pt.ue[2] * lf.pt.ve[1];
    check(m01 != 0 || m02 != 0 || m12 != 0, errc::precondition_violated,
          "unit F at a 3-point form requires an independent v-monomial");
    return ordv::of(0);
  }
  return ordv::at_least(F.trunc());
}

jac_report jacobian_ideal_check(const local_form& lf) {
  validate(lf.pt);
  auto [u, v] = recompose(lf);
  std::array<tseries, 3> du = {u.partial(0), u.partial(1), u.partial(2)};
  std::array<tseries, 3> dv = {v.partial(0), v.partial(1), v.partial(2)};
  auto minor = [&](int i, int j) { return du[i] * dv[j] - du[j] * dv[i]; };

  const tseries& F = lf.F;
  tseries xFx = mul_monomial_raise(F.partial(0), unit_exp(0));
  tseries yFy = mul_monomial_raise(F.partial(1), unit_exp(1));
  tseries zFz = mul_monomial_raise(F.partial(2), unit_exp(2));
  tseries Fy = F.partial(1), Fz = F.partial(2);

  long a = lf.pt.ue[0], b = lf.pt.ue[1], c = lf.pt.ue[2], l = lf.pt.l;
  long d = lf.pt.ve[0], e = lf.pt.ve[1], f = lf.pt.ve[2];

  struct item {
    tseries lhs;
    tseries factor;
    expo shift;
    long scale;
  };
  std::vector<item> items;
  int zt = F.trunc();
  if (lf.pt.npt == 1) {
    items.push_back({minor(0, 1), Fy, exp3(static_cast<int>(a + d - 1), 0, 0), a});
    items.push_back({minor(0, 2), Fz, exp3(static_cast<int>(a + d - 1), 0, 0), a});
    items.push_back({minor(1, 2), tseries::zero(zt), exp3(0, 0, 0), 0});
  } else if (lf.pt.npt == 2) {
    tseries br = F.scaled(coeff(a * e - b * d)) + yFy.scaled(coeff(a)) - xFx.scaled(coeff(b));
    expo sh = exp3(static_cast<int>(a * l + d - 1), static_cast<int>(b * l + e - 1), 0);
    items.push_back({minor(0, 1), br, sh, l});
    items.push_back({minor(0, 2), Fz,
                     exp3(static_cast<int>(a * l + d - 1), static_cast<int>(b * l + e), 0), a * l});
    items.push_back({minor(1, 2), Fz,
                     exp3(static_cast<int>(a * l + d), static_cast<int>(b * l + e - 1), 0), b * l});
  } else {
    tseries br01 = F.scaled(coeff(a * e - b * d)) + yFy.scaled(coeff(a)) - xFx.scaled(coeff(b));
    tseries br02 = F.scaled(coeff(a * f - c * d)) + zFz.scaled(coeff(a)) - xFx.scaled(coeff(c));
    tseries br12 = F.scaled(coeff(b * f - c * e)) + zFz.scaled(coeff(b)) - yFy.scaled(coeff(c));
    items.push_back({minor(0, 1), br01,
                     exp3(static_cast<int>(a * l + d - 1), static_cast<int>(b * l + e - 1),
                          static_cast<int>(c * l + f)),
                     l});
    items.push_back({minor(0, 2), br02,
                     exp3(static_cast<int>(a * l + d - 1), static_cast<int>(b * l + e),
                          static_cast<int>(c * l + f - 1)),
                     l});
    items.push_back({minor(1, 2), br12,
                     exp3(static_cast<int>(a * l + d), static_cast<int>(b * l + e - 1),
                          static_cast<int>(c * l + f - 1)),
                     l});
  }

  jac_report rep;
  rep.pass = true;
  int ct = INT_MAX;
  for (std::size_t i = 0; i < items.size(); ++i) {
    tseries rhs = mul_monomial_raise(items[i].factor.scaled(coeff(items[i].scale)), items[i].shift);
    int mint = std::min(items[i].lhs.trunc(), rhs.trunc());
    check(rhs.is_zero() || !rhs.trunc_to(mint).is_zero(), errc::inconclusive,
          "truncation too low to decide the minor identity");
    bool ok = series_equal(items[i].lhs, rhs);
    rep.minor_ok[i] = ok;
    rep.pass = rep.pass && ok;
    ct = std::min(ct, mint);
  }
  rep.compare_trunc = ct;
  if (lf.pt.npt == 1) {
    rep.detail = "minors factor through x^" + std::to_string(a + d - 1) +
                 "; residually (F_y, F_z) modulo (x)";
  } else if (lf.pt.npt == 2) {
    rep.detail = "minors factor through x^" + std::to_string(a * l + d - 1) + "*y^" +
                 std::to_string(b * l + e - 1) +
                 "; residually (" + std::to_string(a * e - b * d) +
                 "*F + a*y*F_y - b*x*F_x, F_z) modulo (x, y)";
  } else {
    rep.detail = "minors factor through the full v-monomial; residual brackets carry det "
                 "coefficients " +
                 std::to_string(a * e - b * d) + ", " + std::to_string(a * f - c * d) + ", " +
                 std::to_string(b * f - c * e);
  }
  return rep;
}

tsch_result normalize_tschirnhaus(const local_form& lf) {
  validate(lf.pt);
  check(lf.pt.npt != 3, errc::not_applicable, "z-translation unavailable at a 3-point form");
  const tseries& F = lf.F;
  tseries s = F.restrict0(0).restrict0(1);
  check(!s.is_zero(), errc::inconclusive, "order of F in z meets or exceeds the truncation order");
  long m = s.ord().v;
  check(m >= 2, errc::not_applicable, "order of F in z is below 2");
  check(F.trunc() >= 2 * m, errc::inconclusive,
        "truncation too low to certify the translation result");

  tseries H = F;
  for (long j = 0; j + 1 < m; ++j) H = H.partial(2);
  int tw = H.trunc();
  tseries X = tseries::variable(0, tw), Y = tseries::variable(1, tw);
  tseries Hz = H.partial(2);
  tseries phi = tseries::zero(tw);
  for (int it = 0;; ++it) {
    check(it < 64, errc::internal, "translation iteration failed to converge");
    tseries hv = H.substitute({X, Y, phi});
    if (hv.is_zero()) break;
    tseries step = hv * invert_unit(Hz.substitute({X, Y, phi}));
    tseries next = phi - step;
    bool fixed = series_equal(next, phi);
    phi = next;
    if (fixed) break;
  }
  check(H.substitute({X, Y, phi}).is_zero(), errc::internal,
        "translation does not annihilate the derivative");

  int ft = F.trunc();
  tseries fn = F.substitute(
      {tseries::variable(0, ft), tseries::variable(1, ft), tseries::variable(2, ft) + phi});
  tseries vn = expand_p(lf.P, p_monomial(lf.pt), lf.trunc) +
               mul_monomial_raise(fn, v_monomial(lf.pt));
  tsch_result out{decompose(lf.pt, vn), phi, m};

  check(out.form.F.var_coeff(2, static_cast<int>(m) - 1).is_zero(), errc::internal,
        "z^(m-1) coefficient survives the translation");
  tseries am = out.form.F.var_coeff(2, static_cast<int>(m));
  if (static_cast<long>(out.form.F.trunc()) > m)
    check(!(am.at0() == coeff(0)), errc::internal, "leading z-coefficient lost its unit");
  bool low = !out.form.F.var_coeff(2, 1).is_zero() || !out.form.F.var_coeff(2, 0).is_zero();
  check(low, errc::inconclusive,
        "z^1 and z^0 coefficients both vanish through the truncation order");
  return out;
}

classify_result classify_3prepared(const local_form& lf) {
  validate(lf.pt);
  sigval sg = sigma(lf);
  check(sg.exact, errc::inconclusive, "sigma is undetermined at this truncation");
  prep_form pf;
  pf.m = sg.v + 1;
  if (sg.v <= 0) {
    pf.k = prep_form::kind::prepared0;
    return pf;
  }
  check(lf.pt.npt != 3, errc::internal, "exact positive sigma at a 3-point form");

  long m = sg.v + 1;
  const tseries& F = lf.F;
  pf.tau0 = z_block(F, m);
  if (pf.tau0.at0() == coeff(0))
    return not_prepared{exp3(0, 0, static_cast<int>(m)), "coefficient of z^m is not a unit"};
  pf.rungs.assign(static_cast<std::size_t>(std::max<long>(m - 2, 0)), std::nullopt);

  tseries am1 = F.var_coeff(2, static_cast<int>(m) - 1);
  std::vector<tseries> as;  // coefficient of z^(m-i) for i = 2..m-1
  for (long i = 2; i <= m - 1; ++i) as.push_back(F.var_coeff(2, static_cast<int>(m - i)));
  tseries a0 = F.var_coeff(2, 0);

  if (lf.pt.npt == 2) {
    if (!am1.is_zero())
      return not_prepared{witness_of(am1, m - 1), "z^(m-1) coefficient present"};
    for (long i = 2; i <= m - 1; ++i) {
      const tseries& A = as[static_cast<std::size_t>(i - 2)];
      if (A.is_zero()) continue;
      auto rg = strip_rung(A, 2);
      if (!rg || rg->r + rg->s == 0)
        return not_prepared{witness_of(A, m - i),
                            "coefficient of z^" + std::to_string(m - i) +
                                " is not a proper monomial times a unit"};
      pf.rungs[static_cast<std::size_t>(i - 2)] = rg;
    }
    if (!a0.is_zero()) {
      auto tm = strip_rung(a0, 2);
      if (!tm || tm->r + tm->s == 0)
        return not_prepared{witness_of(a0, 0),
                            "z^0 coefficient is not a proper monomial times a unit"};
      long det = (tm->r + lf.pt.ve[0]) * lf.pt.ue[1] - (tm->s + lf.pt.ve[1]) * lf.pt.ue[0];
      if (det == 0)
        return not_prepared{exp3(static_cast<int>(tm->r), static_cast<int>(tm->s), 0),
                            "z^0 monomial is dependent on the u-monomial"};
      pf.taum = tm;
    }
    bool tm1 = m >= 3 && pf.rungs[static_cast<std::size_t>(m - 3)].has_value();
    if (!tm1 && !pf.taum)
      return not_prepared{exp3(0, 0, 1), "z^1 and z^0 coefficients both vanish"};
    pf.k = prep_form::kind::eq2;
    return pf;
  }

  // 1-point: template without the tail first, then with it
  auto try_plain = [&]() -> classify_result {
    prep_form out = pf;
    if (!am1.is_zero())
      return not_prepared{witness_of(am1, m - 1), "z^(m-1) coefficient present"};
    for (long i = 2; i <= m - 1; ++i) {
      const tseries& A = as[static_cast<std::size_t>(i - 2)];
      if (A.is_zero()) continue;
      auto rg = strip_rung(A, 1);
      if (!rg || rg->r == 0)
        return not_prepared{witness_of(A, m - i),
                            "coefficient of z^" + std::to_string(m - i) +
                                " is not a positive power of x times a unit"};
      out.rungs[static_cast<std::size_t>(i - 2)] = rg;
    }
    if (!a0.is_zero()) {
      long r = a0.min_exp(0);
      if (r == 0)
        return not_prepared{witness_of(a0, 0), "z^0 coefficient has an x-free term"};
      tseries tm = a0.div_monomial(exp3(static_cast<int>(r), 0, 0));
      ordv o = tm.restrict0(0).ord();
      if (!(o.exact && o.v == 1))
        return not_prepared{witness_of(a0, 0),
                            "z^0 cofactor does not vanish to order exactly 1 at x=0"};
      out.taum = prep_rung{tm, r, 0};
    }
    bool tm1 = m >= 3 && out.rungs[static_cast<std::size_t>(m - 3)].has_value();
    if (!tm1 && !out.taum)
      return not_prepared{exp3(0, 0, 1), "z^1 and z^0 coefficients both vanish"};
    out.k = prep_form::kind::eq3;
    return out;
  };

  auto try_tail = [&]() -> classify_result {
    if (m < 3) return not_prepared{exp3(0, 0, 0), "tail template needs m >= 3"};
    prep_form out = pf;
    std::vector<std::optional<prep_rung>> strippable(out.rungs.size());
    for (long i = 2; i <= m - 1; ++i) {
      const tseries& A = as[static_cast<std::size_t>(i - 2)];
      if (A.is_zero()) continue;
      auto rg = strip_rung(A, 1);
      if (rg && rg->r > 0) strippable[static_cast<std::size_t>(i - 2)] = rg;
    }
    long t0 = LONG_MAX;  // min x-order over the parts the tail must cover
    auto fold = [&](const tseries& A) {
      if (!A.is_zero()) t0 = std::min(t0, static_cast<long>(A.min_exp(0)));
    };
    fold(a0);
    fold(am1);
    for (long i = 2; i <= m - 1; ++i)
      if (!strippable[static_cast<std::size_t>(i - 2)])
        fold(as[static_cast<std::size_t>(i - 2)]);
    std::vector<long> rlist(out.rungs.size(), 0);
    for (long i = 2; i <= m - 1; ++i) {
      auto& rg = strippable[static_cast<std::size_t>(i - 2)];
      if (rg && rg->r < t0) {
        out.rungs[static_cast<std::size_t>(i - 2)] = rg;
        rlist[static_cast<std::size_t>(i - 2)] = rg->r;
      }
    }
    if (!out.rungs[static_cast<std::size_t>(m - 3)])
      return not_prepared{exp3(0, 0, 1), "z^1 coefficient missing or inseparable from the tail"};
    long bound = omega(m, rlist);
    if (t0 <= bound)
      return not_prepared{exp3(static_cast<int>(t0), 0, 0),
                          "tail order " + std::to_string(t0) +
                              " does not exceed the required bound " + std::to_string(bound)};
    long t = t0 == LONG_MAX ? bound + 1 : t0;
    tseries resid(F.trunc());
    for (auto& term : F.terms()) {
      long ze = term.m.e[2];
      if (ze >= m) continue;
      long i = m - ze;
      if (i >= 2 && i <= m - 1 && out.rungs[static_cast<std::size_t>(i - 2)]) continue;
      resid.add_term(term.m, term.c);
    }
    out.k = prep_form::kind::eq4;
    out.t = t;
    out.omega_bound = bound;
    out.omega_tail = resid.is_zero()
                         ? tseries::zero(static_cast<int>(std::max<long>(0, F.trunc() - t)))
                         : resid.div_monomial(exp3(static_cast<int>(t), 0, 0));
    return out;
  };

  classify_result r3 = try_plain();
  if (std::holds_alternative<prep_form>(r3)) return r3;
  classify_result r4 = try_tail();
  if (std::holds_alternative<prep_form>(r4)) return r4;
  auto& n3 = std::get<not_prepared>(r3);
  auto& n4 = std::get<not_prepared>(r4);
  return not_prepared{n3.witness,
                      "no ladder template matches: " + n3.reason + "; with tail: " + n4.reason};
}

}  // namespace torofold
