#pragma once

#include <string>
#include <vector>

#include "torofold/localform.hpp"

namespace torofold {

// Coordinate change: old variable i maps to prod_j (new_j + c[j])^{a[i][j]}.
// A zero constant marks a plain factor, whose exponents must be nonnegative
// integers; a nonzero constant marks a translated unit factor, whose exponents
// may be arbitrary rationals (unit twists).  Constants may be symbolic.
struct chart_map {
  std::array<std::array<rat, 3>, 3> a{{{rat(1), rat(0), rat(0)},
                                       {rat(0), rat(1), rat(0)},
                                       {rat(0), rat(0), rat(1)}}};
  std::array<coeff, 3> c{};

  std::string str() const;
};

chart_map chart_monomial(const std::array<std::array<long, 3>, 3>& e);
chart_map chart_translated(const std::array<std::array<long, 3>, 3>& e,
                           const std::array<coeff, 3>& c);
// 2x2 block on x and y with a translation on the second factor, z fixed
chart_map chart_2curve(long a11, long a12, long a21, long a22, const coeff& al);

rat chart_det(const chart_map& ch);

// first-applied chart composed with a follow-up chart expressing its variables;
// closed only when the first chart carries no translations
chart_map chart_compose(const chart_map& first, const chart_map& second);

// rational-power twist on the first plain factor receiving the u-monomial,
// clearing every translated factor from the pullback of u
chart_map twist_for_u(const point_type& pt, const chart_map& ch);

struct chart_result {
  local_form form;
  sigval sigma_before, sigma_after;
  chart_map chart;
  std::string note;
};

// substitute the chart into (u, v), relabel so the divisor variables come
// first, re-decompose, and report sigma on both sides
chart_result apply_chart(const local_form& lf, const chart_map& ch);

chart_result transform_2curve_chart(const local_form& lf, const chart_map& ch);
chart_result transform_3point_chart(const local_form& lf, const chart_map& ch);

// smooth cone complex refining the positive octant by star subdivisions
struct ray3 {
  std::array<long, 3> v{0, 0, 0};
  friend bool operator==(const ray3& a, const ray3& b) { return a.v == b.v; }
};

struct cone3 {
  std::array<int, 3> r{0, 1, 2};  // indices into fan3::rays
};

struct fan3 {
  std::vector<ray3> rays;  // the three axes first
  std::vector<cone3> cones;
  std::vector<ray3> insertions;  // rays added, in insertion order
};

// subdivide until the monomial ideal spanned by gens is principal on every
// cone; insertions are sums of two rays (2-curve blow-ups) or of a full cone
// (3-point blow-ups)
fan3 principalize_fan3(const std::vector<expo>& gens, int cap = 256);

// monomial charts of the fan principalizing the support ideal of F; empty when
// F is already a unit
std::vector<chart_result> principalize_3point(const local_form& lf);

// 2D fan on (x, y) principalizing the ideal spanned by the z-coefficients of F
std::vector<chart_result> principalize_2point_coeffs(const local_form& lf);

// the three affine charts of the blow-up of the point, each with the other two
// variables optionally translated by a symbolic constant
std::vector<chart_result> blowup_point(const local_form& lf);

// blow-up of the permissible curve of the given catalog variant (1, 4 or 6)
std::vector<chart_result> blowup_permissible_curve(const local_form& lf, int variant);

// match of a permissible curve x = g = 0 against the catalog of curve germs
struct curve_germ {
  int variant = 0;
  long r = 0;  // contact order, variant 3 only
  std::string note;
};

curve_germ classify_curve_form(const local_form& lf, const tseries& g);

}  // namespace torofold
