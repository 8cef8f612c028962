#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "torofold/toric2d.hpp"
#include "torofold/verify.hpp"

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

bool exact_eq(const ordv& s, long v) { return s.exact && s.v == v; }

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

long count_rows(const theorem_report& rep, const std::string& needle) {
  long n = 0;
  for (const chart_evidence& c : rep.charts)
    if (has(c.classification, needle)) ++n;
  return n;
}

}  // namespace

TEST_CASE("quadratic ladder reduction drops the invariant in every chart") {
  // v = x z^2 + x^2 y over u = x^2: ladder ideal (z^2, x)
  auto lf = decompose(pt_one(2), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  theorem_report rep = run_1point_reduction(lf);
  CHECK(rep.theorem == "1point_reduction");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(exact_eq(rep.sigma_before, 1));
  CHECK(exact_eq(rep.gamma_after, 0));
  CHECK(rep.charts.size() == 5);
  CHECK(rep.fan.size() == 4);
  CHECK(rep.omega_used == -1);
  CHECK(count_rows(rep, "not principal") == 0);
  long strict = 0;
  for (const chart_evidence& c : rep.charts) {
    CHECK(c.sigma.exact);
    CHECK(c.sigma.v < 1);
    if (has(c.classification, "strict-transform")) ++strict;
  }
  CHECK(strict == 1);

  // same input, fresh run: the report is byte-identical
  CHECK(run_1point_reduction(lf).to_json() == rep.to_json());
}

TEST_CASE("cubic ladder reduction handles rungs and a bottom coefficient") {
  // F = z^3 + x^2 z + x y: rung at level 2, order-1 bottom at x^1
  auto lf = decompose(pt_one(1), mk({{1, 0, 3, 1}, {3, 0, 1, 1}, {2, 1, 0, 1}}));
  theorem_report rep = run_1point_reduction(lf);
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(exact_eq(rep.sigma_before, 2));
  CHECK(rep.charts.size() == 7);
  CHECK(rep.fan.size() == 5);
  for (const chart_evidence& c : rep.charts) {
    CHECK(c.sigma.exact);
    CHECK(c.sigma.v < 2);
  }
}

TEST_CASE("ladder reduction rejects forms outside its shape") {
  // already prepared: residual has invariant 0
  auto lf0 = decompose(pt_one(2), mk({{1, 1, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_reduction(lf0), doctest::Contains("NotApplicable"), error);

  // z^0 coefficient with an x-free term of higher order
  auto lf1 = decompose(pt_one(1), mk({{1, 0, 2, 1}, {1, 2, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_reduction(lf1),
                       doctest::Contains("PreconditionViolated"), error);

  // dominated tail is the other run's business
  auto lf2 = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}, {6, 2, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_reduction(lf2), doctest::Contains("NotApplicable"), error);

  // 2-point input
  auto lf3 = decompose(pt_two(1, 1, 1), mk({{1, 1, 2, 1}, {2, 1, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_reduction(lf3), doctest::Contains("NotApplicable"), error);
}

TEST_CASE("tail run accepts a tail beyond the bound and keeps the ladder answer") {
  // order-1 bottom x^5 y sits beyond the bound 4 of the ladder (z^3, x z)
  auto lf = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}, {6, 1, 0, 1}}));
  theorem_report rep = run_1point_spec(lf);
  CHECK(rep.theorem == "1point_spec");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(rep.omega_used == 4);
  CHECK(exact_eq(rep.sigma_before, 2));
  CHECK(rep.gamma_after.exact);
  CHECK(rep.gamma_after.v < 2);
  CHECK(count_rows(rep, "tail leaves the ladder analysis unchanged") ==
        static_cast<long>(rep.charts.size()));

  // genuine dominated tail x^5 * y^2 classifies the same way
  auto lf4 = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}, {6, 2, 0, 1}}));
  theorem_report rep4 = run_1point_spec(lf4);
  CHECK(rep4.verdict == verdict_t::pass);
  CHECK(rep4.omega_used == 4);
}

TEST_CASE("tail run rejects a tail at or below the bound") {
  auto lf = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}, {5, 1, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_spec(lf),
                       doctest::Contains("does not exceed the required bound"), error);
}

TEST_CASE("tail run delegates when nothing sits below the ladder") {
  auto lf = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}}));
  theorem_report rep = run_1point_spec(lf);
  CHECK(rep.theorem == "1point_spec");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(has(rep.detail, "tail absent"));
}

TEST_CASE("tail run refuses quadratic ladders") {
  auto lf = decompose(pt_one(2), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  CHECK_THROWS_WITH_AS(run_1point_spec(lf), doctest::Contains("quadratic"), error);
}

TEST_CASE("2-point ladder reduction probes every stratum over the origin") {
  // w = xy, F = z^2 + x
  auto lf = decompose(pt_two(1, 1, 1), mk({{2, 2, 0, 1}, {1, 1, 2, 1}, {2, 1, 0, 1}}));
  theorem_report rep = run_2point_reduction(lf);
  CHECK(rep.theorem == "2point_reduction");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(exact_eq(rep.sigma_before, 1));
  CHECK(rep.fan.size() == 5);
  CHECK(rep.charts.size() == 5);  // 3 corners + 2 edges over the origin
  CHECK(count_rows(rep, "corner chart") == 3);
  CHECK(count_rows(rep, "edge chart") == 2);
  for (const chart_evidence& c : rep.charts) {
    CHECK(c.sigma.exact);
    CHECK(c.sigma.v < 1);
  }
}

TEST_CASE("2-point reduction rejects a dependent bottom monomial") {
  local_form lf;
  lf.pt = pt_two(1, 1, 1);
  lf.pt.ve = {1, 1, 0};
  lf.F = mk({{0, 0, 2, 1}, {1, 1, 0, 1}});
  CHECK_THROWS_WITH_AS(run_2point_reduction(lf),
                       doctest::Contains("PreconditionViolated"), error);

  auto lf0 = decompose(pt_two(1, 1, 1), mk({{1, 1, 1, 1}}));
  CHECK_THROWS_WITH_AS(run_2point_reduction(lf0), doctest::Contains("NotApplicable"), error);
}

TEST_CASE("3-point principalization leaves unit residuals in every cone") {
  // v = w * (x + y) at a 3-point
  auto lf = decompose(pt_three(1, 1, 1), mk({{2, 1, 1, 1}, {1, 2, 1, 1}}));
  CHECK(!sigma(lf).exact);
  theorem_report rep = run_3point_principalization(lf);
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(rep.charts.size() == 2);
  CHECK(rep.fan.size() == 4);
  CHECK(exact_eq(rep.gamma_after, 0));
  for (const chart_evidence& c : rep.charts) CHECK(exact_eq(c.sigma, 0));

  // residual already a unit: nothing to subdivide
  auto lfu = decompose(pt_three(1, 1, 1), mk({{1, 1, 1, 1}, {2, 1, 1, 1}}));
  theorem_report repu = run_3point_principalization(lfu);
  CHECK(repu.verdict == verdict_t::pass);
  CHECK(repu.charts.empty());
  CHECK(has(repu.detail, "unit"));

  CHECK_THROWS_WITH_AS(run_3point_principalization(decompose(pt_one(1), mk({{1, 1, 0, 1}}))),
                       doctest::Contains("NotApplicable"), error);
}

TEST_CASE("2-point coefficient principalization makes the invariant finite") {
  // F = x + y z vanishes on the 2-curve; both cones give finite invariant
  auto lf = decompose(pt_two(1, 1, 1), mk({{2, 1, 0, 1}, {1, 2, 1, 1}}));
  CHECK(!sigma(lf).exact);
  theorem_report rep = run_3point_principalization(lf);
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(rep.charts.size() == 2);
  CHECK(rep.fan.size() == 3);
  for (const chart_evidence& c : rep.charts) CHECK(c.sigma.exact);
}

TEST_CASE("specializing along the 2-curve drops the invariant to zero") {
  auto lf = decompose(pt_two(1, 1, 1), mk({{2, 2, 0, 1}, {1, 1, 2, 1}, {2, 1, 0, 1}}));
  theorem_report rep = specialize_2curve(lf);
  CHECK(rep.theorem == "specialize_2curve");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(exact_eq(rep.sigma_before, 1));
  CHECK(rep.charts.size() == 1);
  CHECK(exact_eq(rep.charts[0].sigma, 0));
  CHECK(exact_eq(rep.gamma_after, 0));

  auto lf3 = decompose(pt_two(1, 1, 1), mk({{1, 1, 3, 1}, {2, 1, 1, 1}}));
  theorem_report rep3 = specialize_2curve(lf3);
  CHECK(rep3.verdict == verdict_t::pass);
  CHECK(exact_eq(rep3.sigma_before, 2));

  auto lf0 = decompose(pt_two(1, 1, 1), mk({{1, 1, 1, 1}}));
  CHECK_THROWS_WITH_AS(specialize_2curve(lf0), doctest::Contains("NotApplicable"), error);
  CHECK_THROWS_WITH_AS(specialize_2curve(decompose(pt_one(1), mk({{1, 1, 0, 1}}))),
                       doctest::Contains("NotApplicable"), error);
}

TEST_CASE("dim2: immediate normal forms need no blow-up") {
  // v = x y^2 over u = x^2
  theorem_report rep = run_dim2({2, 0, 1}, mk({{1, 2, 0, 1}}));
  CHECK(rep.theorem == "dim2");
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(rep.charts.size() == 1);
  CHECK(has(rep.charts[0].classification, "shape 1"));
  CHECK(has(rep.detail, "0 point blow-ups"));

  // v = x + y^3: the pure-x part moves to the curve parameter
  theorem_report rep2 = run_dim2({2, 0, 1}, mk({{1, 0, 0, 1}, {0, 3, 0, 1}}));
  CHECK(rep2.verdict == verdict_t::pass);
  CHECK(rep2.charts.size() == 1);
  CHECK(has(rep2.charts[0].classification, "shape 1"));
}

TEST_CASE("dim2: vanishing jacobian is certified from the support") {
  theorem_report rep = run_dim2({2, 0, 1}, mk({{3, 0, 0, 1}}));
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(has(rep.charts[0].classification, "base monomial"));

  theorem_report rep2 = run_dim2({1, 1, 2}, mk({{2, 2, 0, 1}, {4, 4, 0, 1}}));
  CHECK(rep2.verdict == verdict_t::pass);
  CHECK(has(rep2.charts[0].classification, "base monomial"));
}

TEST_CASE("dim2: one blow-up resolves y^3 + x^2 y with all four leaf kinds") {
  theorem_report rep = run_dim2({2, 0, 1}, mk({{0, 3, 0, 1}, {2, 1, 0, 1}}));
  CHECK(rep.verdict == verdict_t::pass);
  CHECK(has(rep.detail, "1 point blow-ups"));
  CHECK(rep.charts.size() == 4);
  CHECK(count_rows(rep, "shape 1") == 3);  // two charts plus the non-rational certificate
  CHECK(count_rows(rep, "shape 2") == 1);
  CHECK(count_rows(rep, "non-rational intersections") == 1);
  for (const chart_evidence& c : rep.charts) CHECK(c.sigma.exact);
}

TEST_CASE("dim2: precondition and depth failures are loud") {
  CHECK_THROWS_WITH_AS(run_dim2({2, 0, 1}, mk({{0, 3, 0, 1}, {2, 1, 0, 1}}), 0),
                       doctest::Contains("DepthExceeded"), error);
  CHECK_THROWS_WITH_AS(run_dim2({2, 4, 1}, mk({{1, 2, 0, 1}})),
                       doctest::Contains("coprime"), error);
  CHECK_THROWS_WITH_AS(run_dim2({2, 0, 1}, mk({{0, 0, 1, 1}})),
                       doctest::Contains("must not involve z"), error);
  CHECK_THROWS_WITH_AS(run_dim2({2, 0, 1}, mk({})),
                       doctest::Contains("PreconditionViolated"), error);
  CHECK_THROWS_WITH_AS(run_dim2({2, 0, 1}, mk({{0, 0, 0, 1}, {1, 1, 0, 1}})),
                       doctest::Contains("vanish at the origin"), error);
}

TEST_CASE("reports serialize to stable json") {
  auto lf = decompose(pt_one(2), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  theorem_report rep = run_1point_reduction(lf);
  nlohmann::json j = nlohmann::json::parse(rep.to_json());
  CHECK(j["theorem"] == "1point_reduction");
  CHECK(j["verdict"] == "pass");
  CHECK(j["sigma_before"] == "1");
  CHECK(j["gamma_after"] == "0");
  CHECK(j["omega_used"].is_null());
  CHECK(j["charts"].size() == 5);
  for (const auto& row : j["charts"]) {
    CHECK(row.contains("chart"));
    CHECK(row.contains("sigma"));
    CHECK(row.contains("classification"));
  }
  CHECK(j["fan"].size() == 4);

  auto lft = decompose(pt_one(1), mk({{1, 0, 3, 1}, {2, 0, 1, 1}, {6, 1, 0, 1}}));
  nlohmann::json jt = nlohmann::json::parse(run_1point_spec(lft).to_json());
  CHECK(jt["omega_used"] == 4);
}

TEST_CASE("the reduction fan agrees with the fan of the ladder ideal") {
  auto lf = decompose(pt_one(2), mk({{1, 0, 2, 1}, {2, 1, 0, 1}}));
  theorem_report rep = run_1point_reduction(lf);
  fan2 fn = minimal_principalizing_fan(make_ideal2({{0, 2}, {1, 0}}));
  REQUIRE(rep.fan.size() == fn.rays.size());
  for (std::size_t k = 0; k < fn.rays.size(); ++k) {
    std::string s =
        "(" + std::to_string(fn.rays[k].p) + "," + std::to_string(fn.rays[k].q) + ")";
    CHECK(rep.fan[k] == s);
  }
}

TEST_CASE("random ladders always drop the invariant") {
  rng64 rng(20240817);
  for (int it = 0; it < 20; ++it) {
    long m = rng.pick(2, 5);
    long b = rng.pick(1, 2), a = rng.pick(1, 3);
    // wide window: corner charts multiply exponents by the fan ray entries
    tseries v(128);
    v.add_term(exp3(static_cast<int>(b), 0, static_cast<int>(m)), coeff(1));
    bool rung_top = false;
    for (long i = 2; i <= m - 1; ++i)
      if (rng.pick(0, 1)) {
        long r = rng.pick(1, 4);
        v.add_term(exp3(static_cast<int>(b + r), 0, static_cast<int>(m - i)),
                   coeff(rng.pick(1, 3)));
        if (i == m - 1) rung_top = true;
      }
    bool use_taum = m == 2 || !rung_top || rng.pick(0, 1);
    if (use_taum)
      v.add_term(exp3(static_cast<int>(b + rng.pick(1, 5)), 1, 0), coeff(rng.pick(1, 3)));
    theorem_report rep = run_1point_reduction(decompose(pt_one(a), v));
    CHECK(rep.verdict == verdict_t::pass);
    CHECK(exact_eq(rep.sigma_before, m - 1));
    for (const chart_evidence& c : rep.charts) {
      CHECK(c.sigma.exact);
      if (!has(c.classification, "strict-transform")) CHECK(c.sigma.v < m - 1);
    }
  }
}

TEST_CASE("random 2-point ladders always drop the invariant") {
  rng64 rng(911);
  const long pairs[5][2] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 2}};
  int ok = 0;
  for (int it = 0; it < 40 && ok < 12; ++it) {
    const long* ab = pairs[rng.pick(0, 4)];
    long l = rng.pick(1, 2), m = rng.pick(2, 4);
    long cx = rng.pick(1, 2), cy = rng.pick(1, 2);
    // wide window: cone charts multiply exponents by the fan ray entries
    tseries v(96);
    v.add_term(exp3(static_cast<int>(cx), static_cast<int>(cy), static_cast<int>(m)),
               coeff(1));
    for (long i = 2; i <= m - 1; ++i)
      if (rng.pick(0, 1)) {
        long r = rng.pick(0, 2), s = rng.pick(0, 2);
        if (r + s == 0) r = 1;
        v.add_term(exp3(static_cast<int>(cx + r), static_cast<int>(cy + s),
                        static_cast<int>(m - i)),
                   coeff(rng.pick(1, 3)));
      }
    long rm = rng.pick(0, 3), sm = rng.pick(0, 3);
    if (rm + sm == 0) rm = 1;
    v.add_term(exp3(static_cast<int>(cx + rm), static_cast<int>(cy + sm), 0),
               coeff(rng.pick(1, 3)));

    local_form lf;
    try {
      lf = decompose(pt_two(ab[0], ab[1], l), v);
      classify_result cr = classify_3prepared(lf);
      const prep_form* pf = std::get_if<prep_form>(&cr);
      if (!pf || pf->k != prep_form::kind::eq2) continue;
    } catch (const error&) {
      continue;
    }
    theorem_report rep = run_2point_reduction(lf);
    CHECK(rep.verdict == verdict_t::pass);
    for (const chart_evidence& c : rep.charts) CHECK(c.sigma.v < m - 1);
    ++ok;
  }
  CHECK(ok >= 12);
}

TEST_CASE("random base-monomial series always certify") {
  rng64 rng(7);
  for (int it = 0; it < 10; ++it) {
    long a = rng.pick(1, 3), b = rng.pick(0, 2);
    if (b > 0) {
      long g = lgcd(a, b);
      a /= g;
      b /= g;
    }
    long l = rng.pick(1, 2);
    tseries v(default_trunc);
    long nterms = rng.pick(1, 3);
    for (long k = 1; k <= nterms; ++k)
      v.add_term(exp3(static_cast<int>(a * k), static_cast<int>(b * k), 0),
                 coeff(rng.pick(1, 5)));
    theorem_report rep = run_dim2({a, b, l}, v);
    CHECK(rep.verdict == verdict_t::pass);
    CHECK(has(rep.charts[0].classification, "base monomial"));
  }
}
