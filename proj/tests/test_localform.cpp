#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <tuple>

#include "doctest.h"
#include "torofold/localform.hpp"

using namespace torofold;

namespace {

tseries mk(std::initializer_list<std::tuple<int, int, int, long>> ts, int t = default_trunc) {
  tseries r(t);
  for (auto& [a, b, c, n] : ts) r.add_term(exp3(a, b, c), coeff(n));
  return r;
}

struct rng64 {
  unsigned long long s;
  explicit rng64(unsigned long long seed) : s(seed) {}
  unsigned long long next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  long pick(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<unsigned long long>(hi - lo + 1));
  }
};

}  // namespace

TEST_CASE("decompose splits v into monomial part and residual") {
  // curve-parameter part goes to P whole, not just powers of x^a
  auto lf = decompose(pt_one(2), mk({{3, 0, 0, 1}, {1, 0, 2, 1}}));
  CHECK(series_equal(lf.P, mk({{3, 0, 0, 1}})));
  CHECK(lf.pt.ve[0] == 1);
  CHECK(series_equal(lf.F, mk({{0, 0, 2, 1}})));

  auto lf2 = decompose(pt_two(1, 1, 1), mk({{1, 1, 0, 1}, {1, 0, 1, 1}}));
  CHECK(series_equal(lf2.P, mk({{1, 0, 0, 1}})));
  CHECK(lf2.pt.ve[0] == 1);
  CHECK(lf2.pt.ve[1] == 0);
  CHECK(series_equal(lf2.F, mk({{0, 0, 1, 1}})));

  CHECK_THROWS_WITH_AS(decompose(pt_one(1), mk({{5, 0, 0, 1}})),
                       doctest::Contains("DegenerateV"), error);
  CHECK_THROWS_WITH_AS(decompose(pt_two(2, 4, 1), mk({{1, 0, 1, 1}})),
                       doctest::Contains("MalformedForm"), error);
  CHECK_THROWS_WITH_AS(decompose(pt_two(0, 1, 1), mk({{1, 0, 1, 1}})),
                       doctest::Contains("MalformedForm"), error);
}

TEST_CASE("recompose inverts decompose") {
  std::vector<std::pair<point_type, tseries>> cases = {
      {pt_one(2), mk({{3, 0, 0, 1}, {1, 0, 2, 1}, {2, 1, 0, -3}})},
      {pt_two(2, 3, 2), mk({{4, 6, 0, 2}, {2, 3, 0, 1}, {1, 0, 1, 5}})},
      {pt_three(1, 1, 2, 1), mk({{1, 1, 2, 1}, {2, 0, 1, -1}, {1, 1, 3, 2}})},
  };
  for (auto& [pt, v] : cases) {
    auto lf = decompose(pt, v);
    CHECK(lf.F.min_exp(0) == 0);
    auto [u, v2] = recompose(lf);
    CHECK(series_equal(v2, v));
    expo ue = exp3(static_cast<int>(pt.ue[0] * pt.l), static_cast<int>(pt.ue[1] * pt.l),
                   static_cast<int>(pt.ue[2] * pt.l));
    CHECK(series_equal(u, tseries::monomial(ue, coeff(1), v.trunc())));
  }
}

TEST_CASE("sigma across the three point counts") {
  // 1-point: order of F(0,y,z) minus one, always exact
  auto lf = decompose(pt_one(1), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));  // F = z^2 + x*y
  CHECK(sigma(lf) == ordv::of(1));
  auto lf1b = decompose(pt_one(1), mk({{1, 3, 0, 1}, {1, 0, 4, 1}}));  // F = y^3 + z^4
  CHECK(sigma(lf1b) == ordv::of(2));

  // 2-point cases
  auto lf2 = decompose(pt_two(1, 1, 1), mk({{1, 0, 2, 1}, {3, 2, 0, 1}}));
  CHECK(sigma(lf2) == ordv::of(1));
  auto lf2u = decompose(pt_two(1, 2, 1), mk({{2, 1, 0, 1}, {3, 1, 0, 1}, {2, 1, 1, 1}}));
  CHECK(sigma(lf2u) == ordv::of(0));  // F is a unit and the v-monomial is independent
  auto lf2a = decompose(pt_two(1, 1, 1), mk({{1, 1, 2, 1}, {2, 0, 1, 1}}));
  CHECK(sigma(lf2a) == ordv::at_least(lf2a.F.trunc() - 1));

  local_form bad2;
  bad2.pt = pt_two(1, 2, 1);
  bad2.pt.ve = {2, 4, 0};
  bad2.P = tseries::zero(default_trunc);
  bad2.F = tseries::constant(coeff(1), default_trunc);
  CHECK_THROWS_WITH_AS(sigma(bad2), doctest::Contains("PreconditionViolated"), error);

  // 3-point cases
  auto lf3 = decompose(pt_three(1, 1, 1, 1), mk({{1, 1, 1, 1}, {2, 0, 1, 1}}));
  CHECK(sigma(lf3) == ordv::of(0));
  auto lf3a = decompose(pt_three(1, 1, 1, 1), mk({{2, 0, 1, 1}, {1, 1, 3, 1}}));
  CHECK(sigma(lf3a) == ordv::at_least(lf3a.F.trunc()));

  local_form bad3;
  bad3.pt = pt_three(1, 1, 1, 1);
  bad3.pt.ve = {2, 2, 2};
  bad3.P = tseries::zero(default_trunc);
  bad3.F = tseries::constant(coeff(1), default_trunc);
  CHECK_THROWS_WITH_AS(sigma(bad3), doctest::Contains("PreconditionViolated"), error);
}

TEST_CASE("sigma is invariant under unit factors absorbed into F") {
  tseries f0 = mk({{0, 0, 2, 1}, {1, 1, 0, 1}});
  tseries unit = mk({{0, 0, 0, 1}, {1, 0, 0, 1}, {0, 0, 1, 2}});
  tseries v1(default_trunc), v2(default_trunc);
  for (auto& t : f0.terms()) v1.add_term(t.m + exp3(1, 0, 0), t.c);
  tseries fu = f0 * unit;
  for (auto& t : fu.terms()) v2.add_term(t.m + exp3(1, 0, 0), t.c);
  auto a = decompose(pt_one(2), v1);
  auto b = decompose(pt_one(2), v2);
  CHECK(sigma(a) == sigma(b));
  CHECK(sigma(a) == ordv::of(1));
}

TEST_CASE("jacobian minors match their closed forms") {
  // u = x^2, v = x*(z^2 + x*y)
  auto lf = decompose(pt_one(2), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  auto rep = jacobian_ideal_check(lf);
  CHECK(rep.pass);
  CHECK(rep.minor_ok[0]);
  CHECK(rep.minor_ok[1]);
  CHECK(rep.minor_ok[2]);

  auto lf2 = decompose(pt_two(2, 1, 1), mk({{1, 0, 2, 1}, {3, 2, 0, 1}}));
  CHECK(jacobian_ideal_check(lf2).pass);

  auto lf2l = decompose(pt_two(1, 2, 2), mk({{1, 0, 1, 1}, {2, 1, 0, 1}}));
  CHECK(jacobian_ideal_check(lf2l).pass);

  auto lf3 = decompose(pt_three(1, 1, 2, 1), mk({{2, 0, 1, 1}, {1, 1, 3, 1}}));
  auto rep3 = jacobian_ideal_check(lf3);
  CHECK(rep3.pass);
}

TEST_CASE("jacobian identities hold on 200 random decomposed forms") {
  const long pairs[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 3}};
  const long triples[5][3] = {{1, 1, 1}, {1, 1, 2}, {1, 2, 3}, {2, 1, 1}, {1, 2, 2}};
  rng64 rng(0x9e3779b97f4a7c15ull);
  int checked = 0, pass = 0;
  while (checked < 200) {
    int npt = static_cast<int>(rng.pick(1, 3));
    point_type pt;
    if (npt == 1) {
      pt = pt_one(rng.pick(1, 3));
    } else if (npt == 2) {
      auto& p = pairs[rng.pick(0, 3)];
      pt = pt_two(p[0], p[1], rng.pick(1, 2));
    } else {
      auto& tr = triples[rng.pick(0, 4)];
      pt = pt_three(tr[0], tr[1], tr[2], rng.pick(1, 2));
    }
    tseries f(12);
    f.add_term(exp3(0, 0, static_cast<int>(rng.pick(1, 2))), coeff(rng.pick(1, 3)));
    for (int k = 0; k < 4; ++k)
      f.add_term(exp3(static_cast<int>(rng.pick(0, 3)), static_cast<int>(rng.pick(0, 3)),
                      static_cast<int>(rng.pick(0, 2))),
                 coeff(rng.pick(-2, 2)));
    expo mo = exp3(static_cast<int>(rng.pick(0, 2)),
                   static_cast<int>(npt >= 2 ? rng.pick(0, 2) : 0),
                   static_cast<int>(npt == 3 ? rng.pick(0, 1) : 0));
    tseries v(12 + mo.deg());
    for (auto& t : f.terms()) v.add_term(t.m + mo, t.c);
    local_form lf;
    jac_report rep;
    try {
      lf = decompose(pt, v);
      rep = jacobian_ideal_check(lf);
    } catch (const error& e) {
      // regenerate when the draw was degenerate or outran the truncation
      if (e.code == errc::degenerate_v || e.code == errc::inconclusive) continue;
      throw;
    }
    if (rep.pass) ++pass;
    ++checked;
  }
  CHECK(pass == 200);
}

TEST_CASE("tschirnhaus translation removes the subleading coefficient") {
  // 2-point form with F = (z-x)^2 + x^3*y
  auto lf = decompose(pt_two(1, 2, 1),
                      mk({{0, 0, 2, 1}, {1, 0, 1, -2}, {2, 0, 0, 1}, {3, 1, 0, 1}}));
  auto ts = normalize_tschirnhaus(lf);
  CHECK(ts.m == 2);
  CHECK(series_equal(ts.phi, mk({{1, 0, 0, 1}})));
  CHECK(series_equal(ts.form.F, mk({{0, 0, 2, 1}, {3, 1, 0, 1}})));
  CHECK(ts.form.F.var_coeff(2, 1).is_zero());

  // 1-point form with F = (z-x*y)^2 + x^3*y
  auto lf1 = decompose(
      pt_one(1), mk({{1, 0, 2, 1}, {2, 1, 1, -2}, {3, 2, 0, 1}, {4, 1, 0, 1}}));
  auto ts1 = normalize_tschirnhaus(lf1);
  CHECK(series_equal(ts1.phi, mk({{1, 1, 0, 1}})));
  CHECK(series_equal(ts1.form.F, mk({{0, 0, 2, 1}, {3, 1, 0, 1}})));

  // already normalized: phi = 0
  auto lf0 = decompose(pt_one(1), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  auto ts0 = normalize_tschirnhaus(lf0);
  CHECK(ts0.phi.is_zero());
  CHECK(series_equal(ts0.form.F, lf0.F));

  // P survives and the translation may only involve y
  auto lfp = decompose(pt_two(1, 1, 1), mk({{1, 1, 0, 1}, {1, 0, 2, 1}, {1, 1, 1, -2},
                                            {1, 2, 0, 1}, {1, 5, 0, 1}}));
  auto tsp = normalize_tschirnhaus(lfp);
  CHECK(series_equal(tsp.phi, mk({{0, 1, 0, 1}})));
  CHECK(series_equal(tsp.form.F, mk({{0, 0, 2, 1}, {0, 5, 0, 1}})));
  CHECK(series_equal(tsp.form.P, mk({{1, 0, 0, 1}})));

  CHECK_THROWS_WITH_AS(normalize_tschirnhaus(decompose(pt_one(1), mk({{1, 0, 1, 1}, {2, 1, 0, 1}}))),
                       doctest::Contains("NotApplicable"), error);
  CHECK_THROWS_WITH_AS(
      normalize_tschirnhaus(decompose(pt_one(1), mk({{1, 1, 2, 1}, {2, 1, 0, 1}}))),
      doctest::Contains("Inconclusive"), error);
  CHECK_THROWS_WITH_AS(
      normalize_tschirnhaus(decompose(pt_three(1, 1, 1, 1), mk({{2, 0, 1, 1}, {1, 1, 3, 1}}))),
      doctest::Contains("NotApplicable"), error);
}

TEST_CASE("ladder classification matches the templates") {
  // 2-point, F = z^2 + x*y
  auto lf2 = decompose(pt_two(1, 1, 1), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  auto r2 = classify_3prepared(lf2);
  REQUIRE(std::holds_alternative<prep_form>(r2));
  auto& p2 = std::get<prep_form>(r2);
  CHECK(p2.k == prep_form::kind::eq2);
  CHECK(p2.m == 2);
  REQUIRE(p2.taum.has_value());
  CHECK(p2.taum->r == 1);
  CHECK(p2.taum->s == 1);
  CHECK(p2.rungs.empty());

  // 1-point, F = z^3 + x^2*z + x*y
  auto lf3 = decompose(pt_one(1), mk({{1, 0, 3, 1}, {3, 0, 1, 1}, {2, 1, 0, 1}}));
  auto r3 = classify_3prepared(lf3);
  REQUIRE(std::holds_alternative<prep_form>(r3));
  auto& p3 = std::get<prep_form>(r3);
  CHECK(p3.k == prep_form::kind::eq3);
  CHECK(p3.m == 3);
  REQUIRE(p3.rungs.size() == 1);
  REQUIRE(p3.rungs[0].has_value());
  CHECK(p3.rungs[0]->r == 2);
  REQUIRE(p3.taum.has_value());
  CHECK(p3.taum->r == 1);
  CHECK(series_equal(p3.taum->tau, mk({{0, 1, 0, 1}}, p3.taum->tau.trunc())));

  // sigma zero is the prepared marker
  auto lf0 = decompose(pt_one(1), mk({{1, 0, 1, 1}, {2, 1, 0, 1}}));
  auto r0 = classify_3prepared(lf0);
  REQUIRE(std::holds_alternative<prep_form>(r0));
  CHECK(std::get<prep_form>(r0).k == prep_form::kind::prepared0);

  // tail template: F = z^3 + x^2*z + x^8*y^2, bound omega(3,[2]) = 7 < 8
  auto lf4 = decompose(pt_one(1), mk({{1, 0, 3, 1}, {3, 0, 1, 1}, {9, 2, 0, 1}}));
  auto r4 = classify_3prepared(lf4);
  REQUIRE(std::holds_alternative<prep_form>(r4));
  auto& p4 = std::get<prep_form>(r4);
  CHECK(p4.k == prep_form::kind::eq4);
  CHECK(p4.t == 8);
  CHECK(p4.omega_bound == 7);
  REQUIRE(p4.rungs[0].has_value());
  CHECK(p4.rungs[0]->r == 2);
  CHECK(series_equal(p4.omega_tail, mk({{0, 2, 0, 1}}, p4.omega_tail.trunc())));

  // same ladder with the tail too low fails both templates
  auto lf4b = decompose(pt_one(1), mk({{1, 0, 3, 1}, {3, 0, 1, 1}, {8, 2, 0, 1}}));
  auto r4b = classify_3prepared(lf4b);
  REQUIRE(std::holds_alternative<not_prepared>(r4b));
  auto& n4 = std::get<not_prepared>(r4b);
  CHECK(n4.witness == exp3(7, 2, 0));
  CHECK(n4.reason.find("does not exceed") != std::string::npos);

  // when both templates match, the one without the tail wins
  auto lf5 = decompose(pt_one(1), mk({{1, 0, 3, 1}, {3, 0, 1, 1}, {9, 1, 0, 1}}));
  auto r5 = classify_3prepared(lf5);
  REQUIRE(std::holds_alternative<prep_form>(r5));
  CHECK(std::get<prep_form>(r5).k == prep_form::kind::eq3);

  // undetermined sigma refuses to classify
  auto lfa = decompose(pt_two(1, 1, 1), mk({{1, 1, 2, 1}, {2, 0, 1, 1}}));
  CHECK_THROWS_WITH_AS(classify_3prepared(lfa), doctest::Contains("Inconclusive"), error);

  // leading z-coefficient must be a unit
  auto lfu = decompose(pt_one(1), mk({{1, 1, 2, 1}, {2, 0, 5, 1}}));
  auto ru = classify_3prepared(lfu);
  REQUIRE(std::holds_alternative<not_prepared>(ru));
  CHECK(std::get<not_prepared>(ru).witness == exp3(0, 0, 3));

  // defensive: dependent z^0 monomial at a hand-built 2-point form
  local_form dep;
  dep.pt = pt_two(1, 1, 1);
  dep.pt.ve = {1, 0, 0};
  dep.P = tseries::zero(default_trunc);
  dep.F = mk({{0, 0, 2, 1}, {0, 1, 0, 1}});
  auto rd = classify_3prepared(dep);
  REQUIRE(std::holds_alternative<not_prepared>(rd));
  CHECK(std::get<not_prepared>(rd).reason.find("dependent") != std::string::npos);

  // 2-point ladder with nothing at z^1 or z^0
  auto rz = classify_3prepared(decompose(pt_two(1, 2, 1), mk({{1, 0, 2, 1}})));
  REQUIRE(std::holds_alternative<not_prepared>(rz));
  CHECK(std::get<not_prepared>(rz).reason.find("both vanish") != std::string::npos);
}
