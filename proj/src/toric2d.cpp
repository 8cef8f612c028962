#include "torofold/toric2d.hpp"

#include <algorithm>
#include <numeric>

#include "torofold/error.hpp"

namespace torofold {

namespace {

long floordiv(long a, long b) {
  check(b > 0, errc::internal, "floordiv by nonpositive");
  long q = a / b, r = a % b;
  return r != 0 && a < 0 ? q - 1 : q;
}

long ceildiv(long a, long b) { return floordiv(a + b - 1, b); }

ray2 primitive(long p, long q) {
  long g = std::gcd(p, q);
  check(g > 0, errc::degenerate_v, "zero direction");
  return {p / g, q / g};
}

// angular comparison in the closed first quadrant: counterclockwise from (1,0)
bool ray_before(const ray2& a, const ray2& b) { return det2(a, b) > 0; }

// extended gcd: returns (g, s, t) with s*a + t*b = g
std::tuple<long, long, long> ext_gcd(long a, long b) {
  if (b == 0) return {a, 1, 0};
  auto [g, s, t] = ext_gcd(b, a % b);
  return {g, t, s - (a / b) * t};
}

// rays strictly between v and w in the minimal smooth subdivision of cone(v,w)
void hj_fill(const ray2& v, const ray2& w, std::vector<ray2>& out) {
  long d = det2(v, w);
  check(d >= 1, errc::internal, "cone not positively oriented");
  if (d == 1) return;
  auto [g, s, t] = ext_gcd(v.p, v.q);
  check(g == 1, errc::internal, "ray not primitive");
  // det(v, u0) = v.p*u0.q - v.q*u0.p = 1 with u0 = (-t, s)
  ray2 u{-t, s};
  long shift = ceildiv(-det2(u, w), d);
  u.p += shift * v.p;
  u.q += shift * v.q;
  check(det2(v, u) == 1 && det2(u, w) > 0 && det2(u, w) < d && u.p >= 0 && u.q >= 0,
        errc::internal, "smoothing step left the cone");
  out.push_back(u);
  hj_fill(u, w, out);
}

// a valid star-subdivision order: repeatedly take the first missing ray that
// is the sum of its angular neighbors among the rays placed so far
std::vector<ray2> insertion_order(const std::vector<ray2>& rays) {
  std::vector<ray2> placed = {rays.front(), rays.back()};
  std::vector<ray2> pending(rays.begin() + 1, rays.end() - 1);
  std::vector<ray2> order;
  while (!pending.empty()) {
    bool advanced = false;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const ray2 r = pending[k];
      auto it = std::lower_bound(placed.begin(), placed.end(), r, ray_before);
      check(it != placed.begin() && it != placed.end(), errc::internal,
            "ray outside placed range");
      ray2 lo = *(it - 1), hi = *it;
      if (lo.p + hi.p == r.p && lo.q + hi.q == r.q) {
        placed.insert(it, r);
        order.push_back(r);
        pending.erase(pending.begin() + k);
        advanced = true;
        break;
      }
    }
    check(advanced, errc::internal, "no legal star subdivision step");
  }
  return order;
}

std::optional<lpt> common_minimizer(const std::vector<lpt>& gens, const ray2& v,
                                    const ray2& w) {
  for (const lpt& g : gens) {
    bool ok = true;
    for (const lpt& h : gens)
      if (rval(g, v) > rval(h, v) || rval(g, w) > rval(h, w)) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return std::nullopt;
}

// mode.r[i-2] < b1*i for some listed generator: the last chart must see some
// ladder generator strictly below the pullback of z^m
bool last_slope_condition(const fan_mode& mode, long b1) {
  for (long i = 2; i < mode.m; ++i) {
    long ri = mode.r[static_cast<std::size_t>(i - 2)];
    if (ri > 0 && ri < b1 * i) return true;
  }
  return false;
}

}  // namespace

ideal2 make_ideal2(std::vector<lpt> gens) {
  check(!gens.empty(), errc::precondition_violated, "empty generating set");
  for (const lpt& g : gens)
    check(g.i >= 0 && g.j >= 0, errc::precondition_violated, "negative exponent");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<lpt> minimal;
  for (const lpt& g : gens) {
    bool dominated = false;
    for (const lpt& h : gens)
      if (!(h == g) && h.i <= g.i && h.j <= g.j) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(g);
  }
  return {minimal};
}

polygon2 newton_polygon(const ideal2& I) {
  check(!I.gens.empty(), errc::precondition_violated, "empty ideal");
  // minimal generators sorted by i; an antichain has strictly decreasing j
  polygon2 P;
  for (const lpt& g : I.gens) {
    while (P.verts.size() >= 2) {
      const lpt& a = P.verts[P.verts.size() - 2];
      const lpt& b = P.verts.back();
      // b is a vertex only if it lies strictly below the segment a--g
      long cross = (g.i - a.i) * (b.j - a.j) - (g.j - a.j) * (b.i - a.i);
      if (cross >= 0)
        P.verts.pop_back();
      else
        break;
    }
    P.verts.push_back(g);
  }
  for (std::size_t k = 0; k + 1 < P.verts.size(); ++k) {
    const lpt& a = P.verts[k];
    const lpt& b = P.verts[k + 1];
    P.normals.push_back(primitive(a.j - b.j, b.i - a.i));
  }
  return P;
}

fan2 minimal_principalizing_fan(const ideal2& I, const fan_mode& mode) {
  polygon2 P = newton_polygon(I);
  std::vector<ray2> keep;
  if (!mode.strict) {
    keep = P.normals;
  } else {
    check(mode.m >= 2 && mode.r.size() + 2 == static_cast<std::size_t>(mode.m),
          errc::precondition_violated, "ladder data inconsistent");
    bool any = false;
    for (long ri : mode.r) any = any || ri > 0;
    check(any, errc::not_applicable, "no ladder generator below z^m");
    long bstar = 1;
    while (!last_slope_condition(mode, bstar)) ++bstar;
    // normals with slope < bstar, then the ray (1, bstar) itself
    for (const ray2& n : P.normals)
      if (n.q < bstar * n.p) keep.push_back(n);
    keep.push_back({1, bstar});
  }
  std::vector<ray2> rays = {{1, 0}};
  for (const ray2& n : keep) rays.push_back(n);
  rays.push_back({0, 1});
  std::sort(rays.begin(), rays.end(), ray_before);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  std::vector<ray2> smooth;
  for (std::size_t k = 0; k < rays.size(); ++k) {
    smooth.push_back(rays[k]);
    if (k + 1 < rays.size()) hj_fill(rays[k], rays[k + 1], smooth);
  }
  fan2 f{smooth, insertion_order(smooth)};

  // the construction's defining properties, re-checked on the result
  for (std::size_t k = 0; k + 1 < f.rays.size(); ++k) {
    check(det2(f.rays[k], f.rays[k + 1]) == 1, errc::internal, "fan not smooth");
    bool last = k + 2 == f.rays.size();
    if (!mode.strict || !last)
      check(common_minimizer(I.gens, f.rays[k], f.rays[k + 1]).has_value(), errc::internal,
            "ideal not principal on a required cone");
  }
  if (mode.strict) {
    long b1 = f.rays[f.rays.size() - 2].q;
    check(f.rays[f.rays.size() - 2].p == 1, errc::internal, "last interior ray not (1,b)");
    check(last_slope_condition(mode, b1), errc::internal, "last slope condition failed");
  }
  return f;
}

std::string chart2::str() const {
  auto n = [](long v) { return std::to_string(v); };
  switch (kind) {
    case chart2_kind::interior_1pt:
      return "x=x1^" + n(a1) + ", z=x1^" + n(b1) + "*(z1+al)";
    case chart2_kind::two_point:
      return "x=x1^" + n(a1) + "*z1^" + n(b1) + ", z=x1^" + n(c1) + "*z1^" + n(d1);
    case chart2_kind::strict_transform:
      return "x=x1, z=x1^" + n(b1) + "*z1";
  }
  return "?";
}

std::vector<chart2> enumerate_charts(const fan2& f) {
  check(f.rays.size() >= 2 && f.rays.front() == ray2{1, 0} && f.rays.back() == ray2{0, 1},
        errc::malformed_chart, "fan does not subdivide the quadrant");
  std::vector<chart2> out;
  for (std::size_t k = 1; k + 1 < f.rays.size(); ++k)
    out.push_back({chart2_kind::interior_1pt, f.rays[k].p, f.rays[k].q, 0, 0});
  for (std::size_t k = 0; k + 2 < f.rays.size(); ++k) {
    const ray2& v = f.rays[k];
    const ray2& w = f.rays[k + 1];
    out.push_back({chart2_kind::two_point, v.p, w.p, v.q, w.q});
  }
  const ray2& v = f.rays[f.rays.size() - 2];
  check(v.p == 1 || v == ray2{1, 0}, errc::internal, "ray next to (0,1) not (1,b)");
  out.push_back({chart2_kind::strict_transform, 0, v.q, 0, 0});
  return out;
}

lpt chart_image(const lpt& g, const chart2& c) {
  switch (c.kind) {
    case chart2_kind::interior_1pt:
      // z1+al is a unit at the point: only the x1 power is the monomial part
      return {g.i * c.a1 + g.j * c.b1, 0};
    case chart2_kind::two_point:
      return {g.i * c.a1 + g.j * c.c1, g.i * c.b1 + g.j * c.d1};
    case chart2_kind::strict_transform:
      return {g.i + g.j * c.b1, g.j};
  }
  fail(errc::internal, "bad chart kind");
}

std::optional<principal_gen> is_principal_in_chart(const ideal2& I, const chart2& c) {
  for (const lpt& g : I.gens) {
    lpt gi = chart_image(g, c);
    bool divides_all = true;
    for (const lpt& h : I.gens) {
      lpt hi = chart_image(h, c);
      if (gi.i > hi.i || gi.j > hi.j) {
        divides_all = false;
        break;
      }
    }
    if (divides_all) return principal_gen{g, gi};
  }
  return std::nullopt;
}

long omega(long m, const std::vector<long>& r) {
  check(m != 2, errc::range_error, "no bound is defined for quadratic ladders");
  check(m >= 3, errc::precondition_violated, "ladder degree must be at least 3");
  check(r.size() + 2 == static_cast<std::size_t>(m), errc::precondition_violated,
        "expected one entry per intermediate level");
  check(r.back() > 0, errc::not_applicable, "level m-1 must be present");
  std::vector<lpt> gens = {{0, m}};
  for (long i = 2; i < m; ++i) {
    long ri = r[static_cast<std::size_t>(i - 2)];
    check(ri >= 0, errc::precondition_violated, "negative exponent in ladder");
    if (ri > 0) gens.push_back({ri, m - i});
  }
  ideal2 I = make_ideal2(gens);
  fan_mode mode{true, m, r};
  fan2 f = minimal_principalizing_fan(I, mode);
  rat M(0);
  auto consider = [&](const rat& q) { M = std::max(M, q); };
  for (const chart2& c : enumerate_charts(f)) {
    std::vector<std::pair<rat, rat>> scales;  // x1-slope, z1-slope per unit of z
    switch (c.kind) {
      case chart2_kind::interior_1pt:
        scales.emplace_back(rat_of(c.b1, c.a1), rat(0));
        consider(rat(m) * rat_of(c.b1, c.a1));
        break;
      case chart2_kind::two_point:
        consider(rat(m) * rat_of(c.c1, c.a1));
        consider(rat(m) * rat_of(c.d1, c.b1));
        scales.emplace_back(rat_of(c.c1, c.a1), rat_of(c.d1, c.b1));
        break;
      case chart2_kind::strict_transform:
        consider(rat(m) * rat(c.b1));
        scales.emplace_back(rat(c.b1), rat(0));
        break;
    }
    for (long i = 2; i < m; ++i) {
      long ri = r[static_cast<std::size_t>(i - 2)];
      if (ri <= 0) continue;
      for (auto& [sx, sz] : scales) {
        consider(rat(ri) + sx * rat(m - i));
        if (c.kind == chart2_kind::two_point) consider(rat(ri) + sz * rat(m - i));
      }
    }
  }
  return to_long(rat(floor_rat(M))) + 1;
}

}  // namespace torofold
