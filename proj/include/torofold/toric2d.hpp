#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torofold/rational.hpp"

namespace torofold {

// lattice point: exponent pair of a monomial x^i z^j
struct lpt {
  long i = 0, j = 0;
  friend bool operator==(const lpt& a, const lpt& b) { return a.i == b.i && a.j == b.j; }
  friend bool operator<(const lpt& a, const lpt& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  }
};

// primitive ray (p,q) in the closed first quadrant, not both zero
struct ray2 {
  long p = 0, q = 0;
  friend bool operator==(const ray2& a, const ray2& b) { return a.p == b.p && a.q == b.q; }
};

inline long det2(const ray2& a, const ray2& b) { return a.p * b.q - a.q * b.p; }

// value of the monomial valuation attached to a ray
inline long rval(const lpt& g, const ray2& r) { return g.i * r.p + g.j * r.q; }

// monomial ideal in two variables, kept as its minimal (antichain) generators,
// sorted by increasing first exponent
struct ideal2 {
  std::vector<lpt> gens;
};

ideal2 make_ideal2(std::vector<lpt> gens);

struct polygon2 {
  std::vector<lpt> verts;       // hull vertices, first exponent increasing
  std::vector<ray2> normals;    // primitive inner normal per compact edge
};

polygon2 newton_polygon(const ideal2& I);

// smooth fan subdividing the first quadrant
struct fan2 {
  std::vector<ray2> rays;        // angular order, (1,0) first, (0,1) last
  std::vector<ray2> insertions;  // an order realizing the fan by star subdivisions
};

// mode for minimal_principalizing_fan: plain asks for principality in every
// chart; strict asks for it away from the strict transform of z=0 and for the
// last slope to drop some ladder generator strictly below z^m
struct fan_mode {
  bool strict = false;
  long m = 0;
  std::vector<long> r;  // r[k] corresponds to the z^(m-(k+2)) generator
};

fan2 minimal_principalizing_fan(const ideal2& I, const fan_mode& mode = {});

// the three shapes of chart at points of the exceptional fiber
enum class chart2_kind {
  interior_1pt,      // x = x1^a1, z = x1^b1 (z1 + al), al != 0: generic divisor point
  two_point,         // x = x1^a1 z1^b1, z = x1^c1 z1^d1: corner of two divisors
  strict_transform,  // x = x1, z = x1^b1 z1: meeting point with z = 0
};

struct chart2 {
  chart2_kind kind;
  long a1 = 0, b1 = 0, c1 = 0, d1 = 0;
  std::string str() const;
};

std::vector<chart2> enumerate_charts(const fan2& f);

// pullback exponents of one generator through a chart (unit factors dropped)
lpt chart_image(const lpt& g, const chart2& c);

struct principal_gen {
  lpt gen;    // the generator whose pullback divides all others
  lpt image;  // its pullback exponents in the chart variables
};

std::optional<principal_gen> is_principal_in_chart(const ideal2& I, const chart2& c);

// bound used by the invariant-drop argument at 1-points: strictly exceeds the
// worst exponent ratio over all charts of the minimal strict-mode fan of the
// ladder ideal (z^m, x^{r_i} z^{m-i} : r_i > 0)
long omega(long m, const std::vector<long>& r);

}  // namespace torofold
