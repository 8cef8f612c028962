#include "torofold/blowup.hpp"

#include <algorithm>
#include <utility>

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

bool plain(const chart_map& ch, int j) { return ch.c[j].is_zero(); }

// exponent the u-monomial picks up on each new-variable factor
std::array<rat, 3> u_pullback(const point_type& pt, const chart_map& ch) {
  std::array<rat, 3> n{rat(0), rat(0), rat(0)};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) n[j] += rat(pt.ue[i] * pt.l) * ch.a[i][j];
  return n;
}

void validate_chart(const chart_map& ch) {
  for (int j = 0; j < 3; ++j) {
    if (!plain(ch, j)) continue;
    for (int i = 0; i < 3; ++i)
      check(is_integer(ch.a[i][j]) && ch.a[i][j] >= 0, errc::malformed_chart,
            "plain factors need nonnegative integer exponents");
  }
  // every image must vanish at the new origin, otherwise the substituted
  // truncation promise would be dishonest
  for (int i = 0; i < 3; ++i) {
    bool covered = false;
    for (int j = 0; j < 3; ++j)
      if (plain(ch, j) && ch.a[i][j] > 0) covered = true;
    check(covered, errc::malformed_chart, "chart does not lie over the origin");
  }
}

tseries sum_parts(std::vector<tseries> parts, int t) {
  if (parts.empty()) return tseries::zero(t);
  while (parts.size() > 1) {
    std::vector<tseries> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() & 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts[0];
}

// image of v under the chart, term by term: plain columns contribute a
// monomial, translated columns one binomial series cut at the leftover window
tseries chart_image(const tseries& v, const chart_map& ch, int T) {
  std::vector<tseries> parts;
  for (auto& t : v.terms()) {
    expo base = exp3(0, 0, 0);
    std::array<rat, 3> q{rat(0), rat(0), rat(0)};
    for (int j = 0; j < 3; ++j) {
      rat fj(0);
      for (int i = 0; i < 3; ++i) fj += rat(t.m.e[i]) * ch.a[i][j];
      if (plain(ch, j))
        base.e[j] = static_cast<int>(to_long(fj));
      else
        q[j] = fj;
    }
    if (base.deg() >= T) continue;
    tseries img = tseries::monomial(base, t.c, T);
    for (int j = 0; j < 3; ++j) {
      if (plain(ch, j) || q[j] == 0) continue;
      // (u_j + c_j)^q around the constant: C(q,k) c_j^(q-k) u_j^k
      std::vector<tseries> fac;
      coeff cp = ch.c[j].pow(q[j]);
      coeff cinv = coeff(1) / ch.c[j];
      rat binom(1);
      for (int k = 0; base.deg() + k < T; ++k) {
        if (k > 0) {
          binom *= (q[j] - rat(k - 1)) / rat(k);
          if (binom == 0) break;
          cp = cp * cinv;
        }
        expo uk = exp3(0, 0, 0);
        uk.e[j] = k;
        fac.push_back(tseries::monomial(uk, coeff(binom) * cp, T));
      }
      img = img * sum_parts(std::move(fac), T);
    }
    if (!img.is_zero()) parts.push_back(img);
  }
  return sum_parts(std::move(parts), T);
}

std::string factor_str(const std::string& base, const rat& e, bool wrap) {
  std::string b = wrap ? "(" + base + ")" : base;
  if (e == 1) return b;
  if (is_integer(e)) return b + "^" + rat_str(e);
  return b + "^(" + rat_str(e) + ")";
}

const std::array<std::string, 3> old_names{"x", "y", "z"};
const std::array<std::string, 3> new_names{"x1", "y1", "z1"};

}  // namespace

std::string chart_map::str() const {
  std::string s;
  for (int i = 0; i < 3; ++i) {
    std::string rhs;
    for (int j = 0; j < 3; ++j) {
      if (a[i][j] == 0) continue;
      if (!rhs.empty()) rhs += "*";
      if (c[j].is_zero())
        rhs += factor_str(new_names[j], a[i][j], false);
      else
        rhs += factor_str(new_names[j] + "+" + c[j].str(), a[i][j], true);
    }
    if (rhs.empty()) rhs = "1";
    if (!s.empty()) s += "; ";
    s += old_names[i] + " -> " + rhs;
  }
  return s;
}

chart_map chart_monomial(const std::array<std::array<long, 3>, 3>& e) {
  chart_map ch;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ch.a[i][j] = rat(e[i][j]);
  return ch;
}

chart_map chart_translated(const std::array<std::array<long, 3>, 3>& e,
                           const std::array<coeff, 3>& c) {
  chart_map ch = chart_monomial(e);
  ch.c = c;
  return ch;
}

chart_map chart_2curve(long a11, long a12, long a21, long a22, const coeff& al) {
  return chart_translated({{{a11, a12, 0}, {a21, a22, 0}, {0, 0, 1}}},
                          {coeff(0), al, coeff(0)});
}

rat chart_det(const chart_map& ch) {
  const auto& a = ch.a;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

chart_map chart_compose(const chart_map& first, const chart_map& second) {
  for (int j = 0; j < 3; ++j)
    check(first.c[j].is_zero(), errc::malformed_chart,
          "composition closes only over a translation-free first chart");
  chart_map out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      rat s(0);
      for (int k = 0; k < 3; ++k) s += first.a[i][k] * second.a[k][j];
      out.a[i][j] = s;
    }
  out.c = second.c;
  return out;
}

chart_map twist_for_u(const point_type& pt, const chart_map& ch) {
  auto n = u_pullback(pt, ch);
  int pivot = -1;
  for (int j = 0; j < 3 && pivot < 0; ++j)
    if (plain(ch, j) && n[j] > 0) pivot = j;
  check(pivot >= 0, errc::malformed_chart, "no plain factor receives the u-monomial");
  chart_map out = ch;
  for (int j = 0; j < 3; ++j) {
    if (plain(ch, j) || n[j] == 0) continue;
    rat lam = n[j] / n[pivot];
    for (int i = 0; i < 3; ++i) out.a[i][j] -= lam * out.a[i][pivot];
  }
  return out;
}

chart_result apply_chart(const local_form& lf, const chart_map& ch) {
  validate_chart(ch);
  auto n = u_pullback(lf.pt, ch);
  for (int j = 0; j < 3; ++j)
    if (!plain(ch, j))
      check(n[j] == 0, errc::malformed_chart,
            "u pulls back onto a translated factor; clear it with twist_for_u");

  int T = lf.trunc;
  tseries vv = chart_image(recompose(lf).second, ch, T);

  // relabel so the components of the new divisor come first
  std::array<int, 3> pos{0, 0, 0};
  int npt1 = 0;
  for (int j = 0; j < 3; ++j)
    if (n[j] > 0) ++npt1;
  check(npt1 >= 1, errc::internal, "u pulls back to a constant");
  int dslot = 0, oslot = npt1;
  std::array<long, 3> ns{0, 0, 0};
  for (int j = 0; j < 3; ++j) {
    if (n[j] > 0) {
      ns[dslot] = to_long(n[j]);
      pos[j] = dslot++;
    } else {
      pos[j] = oslot++;
    }
  }
  bool relabel = !(pos[0] == 0 && pos[1] == 1 && pos[2] == 2);
  if (relabel) {
    int t = vv.trunc();
    vv = vv.substitute({tseries::variable(pos[0], t), tseries::variable(pos[1], t),
                        tseries::variable(pos[2], t)});
  }

  point_type pt1;
  if (npt1 == 1) {
    pt1 = pt_one(ns[0]);
  } else if (npt1 == 2) {
    long g = gcd2(ns[0], ns[1]);
    pt1 = pt_two(ns[0] / g, ns[1] / g, g);
  } else {
    long g = gcd2(gcd2(ns[0], ns[1]), ns[2]);
    pt1 = pt_three(ns[0] / g, ns[1] / g, ns[2] / g, g);
  }

  chart_result out;
  out.chart = ch;
  out.sigma_before = sigma(lf);
  try {
    out.form = decompose(pt1, vv);
  } catch (const error& e) {
    check(e.code != errc::degenerate_v, errc::inconclusive,
          "chart image collapses onto powers of the base monomial within the "
          "truncation order");
    throw;
  }
  out.sigma_after = sigma(out.form);
  out.note = std::to_string(npt1) + "-point chart" +
             (relabel ? ", variables relabeled" : "");
  return out;
}

chart_result transform_2curve_chart(const local_form& lf, const chart_map& ch) {
  check(lf.pt.npt == 2, errc::precondition_violated,
        "2-curve charts act on 2-point forms");
  check(ch.a[2][0] == 0 && ch.a[2][1] == 0 && ch.a[2][2] == 1 && ch.a[0][2] == 0 &&
            ch.a[1][2] == 0,
        errc::malformed_chart, "2-curve charts mix x and y and fix z");
  check(ch.c[0].is_zero() && ch.c[2].is_zero(), errc::malformed_chart,
        "a 2-curve chart translates the second factor only");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      check(is_integer(ch.a[i][j]) && ch.a[i][j] >= 0, errc::malformed_chart,
            "2-curve chart exponents must be nonnegative integers");
  rat det = ch.a[0][0] * ch.a[1][1] - ch.a[0][1] * ch.a[1][0];
  check(det == 1 || det == -1, errc::malformed_chart, "chart block is not unimodular");
  chart_map use = ch.c[1].is_zero() ? ch : twist_for_u(lf.pt, ch);
  return apply_chart(lf, use);
}

chart_result transform_3point_chart(const local_form& lf, const chart_map& ch) {
  check(lf.pt.npt == 3, errc::precondition_violated,
        "3-point charts act on 3-point forms");
  sigval s = sigma(lf);
  check(s.exact && s.v == 0, errc::not_applicable,
        "3-point transport needs a prepared form; principalize the support first");
  int zeros = 0;
  for (int j = 0; j < 3; ++j) zeros += ch.c[j].is_zero() ? 1 : 0;
  check(zeros >= 1, errc::malformed_chart,
        "at least one translation constant must vanish");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      check(is_integer(ch.a[i][j]) && ch.a[i][j] >= 0, errc::malformed_chart,
            "3-point chart exponents must be nonnegative integers");
  rat det = chart_det(ch);
  check(det == 1 || det == -1, errc::malformed_chart, "chart matrix is not unimodular");
  return apply_chart(lf, twist_for_u(lf.pt, ch));
}

namespace {

long rval3(const expo& g, const ray3& r) {
  return g.e[0] * r.v[0] + g.e[1] * r.v[1] + g.e[2] * r.v[2];
}

std::vector<expo> antichain3(const std::vector<expo>& gens) {
  std::vector<expo> s = gens;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<expo> out;
  for (auto& g : s) {
    bool dominated = false;
    for (auto& h : s)
      if (h != g && h.divides(g)) dominated = true;
    if (!dominated) out.push_back(g);
  }
  return out;
}

// generator indices attaining the minimal value along a ray
std::vector<int> minset3(const std::vector<expo>& gens, const ray3& r) {
  long best = rval3(gens[0], r);
  for (auto& g : gens) best = std::min(best, rval3(g, r));
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (rval3(gens[i], r) == best) out.push_back(i);
  return out;
}

std::vector<int> intersect3(const std::vector<int>& a, const std::vector<int>& b,
                            const std::vector<int>& c) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end() &&
        std::find(c.begin(), c.end(), x) != c.end())
      out.push_back(x);
  return out;
}

}  // namespace

fan3 principalize_fan3(const std::vector<expo>& gens, int cap) {
  std::vector<expo> gs = antichain3(gens);
  check(!gs.empty(), errc::inconclusive, "empty support");
  fan3 f;
  f.rays = {ray3{{1, 0, 0}}, ray3{{0, 1, 0}}, ray3{{0, 0, 1}}};
  f.cones = {cone3{{0, 1, 2}}};
  // make every pair of generators comparable on every cone, one pair at a
  // time; comparability survives later subdivisions, so one sweep suffices
  int step = 0;
  for (std::size_t a = 0; a < gs.size(); ++a)
    for (std::size_t b = a + 1; b < gs.size(); ++b)
      for (;;) {
        int ra = -1, rb = -1;
        for (const cone3& c : f.cones) {
          // leftover exponents of each generator against the other, written
          // in the coordinates of this cone
          long qa[3], qb[3];
          for (int k = 0; k < 3; ++k) {
            long d = rval3(gs[a], f.rays[c.r[k]]) - rval3(gs[b], f.rays[c.r[k]]);
            qa[k] = std::max(d, 0L);
            qb[k] = std::max(-d, 0L);
          }
          int ia = -1, ib = -1;
          for (int k = 0; k < 3; ++k) {
            if (qa[k] > (ia < 0 ? 0 : qa[ia])) ia = k;
            if (qb[k] > (ib < 0 ? 0 : qb[ib])) ib = k;
          }
          if (ia < 0 || ib < 0) continue;  // one divides the other here
          ra = c.r[ia];
          rb = c.r[ib];
          break;
        }
        if (ra < 0) break;
        check(step++ < cap, errc::inconclusive, "subdivision cap exceeded");
        // blow up the 2-curve of the offending face across the whole fan;
        // the new value is the signed sum, so the mismatch shrinks
        ray3 nu;
        for (int i = 0; i < 3; ++i) nu.v[i] = f.rays[ra].v[i] + f.rays[rb].v[i];
        int ni = static_cast<int>(f.rays.size());
        f.rays.push_back(nu);
        f.insertions.push_back(nu);
        std::vector<cone3> next;
        for (const cone3& cc : f.cones) {
          int ka = -1, kb = -1;
          for (int k = 0; k < 3; ++k) {
            if (cc.r[k] == ra) ka = k;
            if (cc.r[k] == rb) kb = k;
          }
          if (ka < 0 || kb < 0) {
            next.push_back(cc);
            continue;
          }
          cone3 c1 = cc, c2 = cc;
          c1.r[ka] = ni;
          c2.r[kb] = ni;
          next.push_back(c1);
          next.push_back(c2);
        }
        f.cones = next;
      }
  for (const cone3& c : f.cones)
    check(!intersect3(minset3(gs, f.rays[c.r[0]]), minset3(gs, f.rays[c.r[1]]),
                      minset3(gs, f.rays[c.r[2]]))
               .empty(),
          errc::internal, "subdivision left a non-principal cone");
  return f;
}

std::vector<chart_result> principalize_3point(const local_form& lf) {
  check(lf.pt.npt == 3, errc::precondition_violated, "expects a 3-point form");
  check(!lf.F.is_zero(), errc::inconclusive,
        "residual series vanishes to the truncation order");
  if (lf.F.is_unit()) return {};
  std::vector<expo> gens;
  for (auto& t : lf.F.terms()) gens.push_back(t.m);
  fan3 fn = principalize_fan3(gens);
  std::vector<chart_result> out;
  for (auto& c : fn.cones) {
    chart_map ch;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) ch.a[i][k] = rat(fn.rays[c.r[k]].v[i]);
    out.push_back(apply_chart(lf, ch));
  }
  return out;
}

std::vector<chart_result> principalize_2point_coeffs(const local_form& lf) {
  check(lf.pt.npt == 2, errc::precondition_violated, "expects a 2-point form");
  check(!lf.F.is_zero(), errc::inconclusive,
        "residual series vanishes to the truncation order");
  if (!lf.F.restrict0(0).restrict0(1).is_zero()) return {};  // sigma already finite
  std::vector<lpt> gens;
  for (auto& t : lf.F.terms()) gens.push_back(lpt{t.m.e[0], t.m.e[1]});
  fan2 fn = minimal_principalizing_fan(make_ideal2(gens));
  std::vector<chart_result> out;
  for (std::size_t k = 0; k + 1 < fn.rays.size(); ++k) {
    const ray2 &v = fn.rays[k], &w = fn.rays[k + 1];
    out.push_back(apply_chart(
        lf, chart_monomial({{{v.p, w.p, 0}, {v.q, w.q, 0}, {0, 0, 1}}})));
  }
  return out;
}

std::vector<chart_result> blowup_point(const local_form& lf) {
  std::vector<chart_result> out;
  for (int k = 0; k < 3; ++k) {
    int o1 = k == 0 ? 1 : 0;
    int o2 = k == 2 ? 1 : 2;
    std::array<std::array<long, 3>, 3> e{};
    e[k][k] = 1;
    e[o1][k] = 1;
    e[o1][o1] = 1;
    e[o2][k] = 1;
    e[o2][o2] = 1;
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        std::array<coeff, 3> c{};
        if (s1) c[o1] = coeff::symbol(fresh_symbol("al"));
        if (s2) c[o2] = coeff::symbol(fresh_symbol("be"));
        chart_map ch = chart_translated(e, c);
        out.push_back(apply_chart(lf, twist_for_u(lf.pt, ch)));
      }
  }
  return out;
}

namespace {

void expect_residual_z(const local_form& lf) {
  check(series_equal(lf.F, tseries::variable(2, lf.F.trunc())),
        errc::precondition_violated, "this catalog variant expects F = z");
}

void expect_prepared(const local_form& lf) {
  sigval s = sigma(lf);
  check(s.exact && s.v == 0, errc::precondition_violated,
        "curve blow-ups apply at prepared points only");
}

}  // namespace

std::vector<chart_result> blowup_permissible_curve(const local_form& lf, int variant) {
  check(variant >= 1 && variant <= 6, errc::malformed_form,
        "catalog variants are numbered 1 through 6");
  check(variant == 1 || variant == 4 || variant == 6, errc::not_applicable,
        "variants 2, 3 and 5 need further preparation before blowing up");
  expect_prepared(lf);
  std::vector<chart_result> out;
  auto run = [&](const std::array<std::array<long, 3>, 3>& e,
                 const std::array<coeff, 3>& c) {
    out.push_back(apply_chart(lf, twist_for_u(lf.pt, chart_translated(e, c))));
  };
  if (variant == 1) {
    check(lf.pt.npt == 1, errc::precondition_violated, "variant 1 sits at a 1-point");
    expect_residual_z(lf);
    // centre x = y = 0
    std::array<std::array<long, 3>, 3> ex{{{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}};
    run(ex, {});
    run(ex, {coeff(0), coeff::symbol(fresh_symbol("al")), coeff(0)});
    run({{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}}, {});
    return out;
  }
  check(lf.pt.npt == 2, errc::precondition_violated,
        "variants 4 and 6 sit at a 2-point");
  if (variant == 4) expect_residual_z(lf);
  if (variant == 6)
    check(lf.F.is_unit(), errc::precondition_violated, "variant 6 expects a unit F");
  // centre x = z = 0
  std::array<std::array<long, 3>, 3> ex{{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}}};
  run(ex, {});
  run(ex, {coeff(0), coeff(0), coeff::symbol(fresh_symbol("ga"))});
  run({{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}}, {});
  return out;
}

curve_germ classify_curve_form(const local_form& lf, const tseries& g) {
  expect_prepared(lf);
  check(lf.pt.npt <= 2, errc::not_applicable,
        "the catalog covers curves through 1- and 2-points");
  check(g.max_var_exp(0) == 0, errc::malformed_form,
        "curve equations are x = 0 and g(y, z) = 0");
  check(!g.is_zero(), errc::malformed_form, "the second curve equation vanishes");
  check(g.at0() == coeff(0), errc::malformed_form,
        "the curve must pass through the point");
  coeff gy = g.at(exp3(0, 1, 0)), gz = g.at(exp3(0, 0, 1));
  check(gy != coeff(0) || gz != coeff(0), errc::malformed_form,
        "the curve is singular at the point");

  if (lf.pt.npt == 1) {
    expect_residual_z(lf);
    if (gy != coeff(0))
      return {1, 0, "transversal section: equations normalize to x = y = 0"};
    if (g.restrict0(2).is_zero()) return {2, 0, "equations normalize to x = z = 0"};
    // solve g(y, psi(y)) = 0 by Newton and read off the contact order
    int t = g.trunc();
    tseries gdz = g.partial(2);
    tseries psi = tseries::zero(t - 1);
    for (int it = 0; it < t + 2; ++it) {
      std::array<tseries, 3> at{tseries::zero(t), tseries::variable(1, t), psi};
      tseries val = g.substitute(at);
      if (val.is_zero()) break;
      psi = psi - val * invert_unit(gdz.substitute(at));
    }
    check(!psi.is_zero(), errc::inconclusive,
          "contact order exceeds the truncation order");
    ordv r = psi.ord();
    check(r.exact, errc::inconclusive, "contact order exceeds the truncation order");
    check(r.v >= 2, errc::internal, "contact order below 2 despite dg/dy = 0");
    return {3, r.v, "tangential section: equations normalize to x = z + y^r s(y) = 0"};
  }

  // 2-point: y is a divisor variable, so the curve x = y = 0 is the 2-curve
  if (g.min_exp(1) >= 1 && !g.div_monomial(unit_exp(1)).at0().is_zero())
    fail(errc::precondition_violated, "the 2-curve itself is outside the catalog");
  if (lf.F.is_unit()) {
    check(g.restrict0(2).is_zero(), errc::inconclusive,
          "no catalog form matches the curve through this point");
    return {6, 0, "curve x = z = 0 through a 2-point with unit residual"};
  }
  expect_residual_z(lf);
  if (g.restrict0(2).is_zero())
    return {4, 0, "curve x = z = 0 through a 2-point with residual z"};
  return {5, 0, "curve x = f(y, z) = 0 with z not dividing f"};
}

}  // namespace torofold
