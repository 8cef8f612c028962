#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "torofold/series.hpp"

namespace torofold {

// A germ of the map (u,v) at a point on 1, 2, or 3 components of the divisor.
// ue/l describe u = (x^ue0 y^ue1 z^ue2)^l; ve is the monomial prefactor of F
// in v = P(w) + x^ve0 y^ve1 z^ve2 * F, filled in by decompose.
struct point_type {
  int npt = 1;
  std::array<long, 3> ue{1, 0, 0};
  long l = 1;
  std::array<long, 3> ve{0, 0, 0};
};

point_type pt_one(long a);
point_type pt_two(long a, long b, long l = 1);
point_type pt_three(long a, long b, long c, long l = 1);

// the exponent vector of the distinguished monomial w = x^ue0 y^ue1 z^ue2
expo base_monomial(const point_type& pt);

struct local_form {
  point_type pt;
  tseries P;  // univariate series in w, stored in variable slot 0
  tseries F;
  int trunc = default_trunc;
};

// v = P(w) + x^c y^d z^e * F with none of the coordinate divisors dividing F
// and the monomial part of v (powers of w) fully absorbed into P
local_form decompose(const point_type& pt, const tseries& v);

// expand back to (u, v)
std::pair<tseries, tseries> recompose(const local_form& lf);

using sigval = ordv;  // Exact(n) or AtLeast(T)

sigval sigma(const local_form& lf);

// checks the closed-form factorizations of the 2x2 Jacobian minors of (u,v)
// and hence the residual ideal identities modulo the coordinate subspace
struct jac_report {
  bool pass = false;
  std::array<bool, 3> minor_ok{false, false, false};
  int compare_trunc = 0;  // truncation at which the identities were compared
  std::string detail;
};

jac_report jacobian_ideal_check(const local_form& lf);

// z-translation z -> z + phi(x,y) killing the z^(m-1) coefficient of F, where
// m = ord F(0,0,z); the result is re-decomposed into a valid local_form
struct tsch_result {
  local_form form;
  tseries phi;
  long m = 0;
};

tsch_result normalize_tschirnhaus(const local_form& lf);

// matched ladder templates for 3-prepared points
struct prep_rung {
  tseries tau;  // unit series in x,y (or the order-1 bottom coefficient)
  long r = 0, s = 0;
};

struct prep_form {
  enum class kind { prepared0, eq2, eq3, eq4 };
  kind k = kind::prepared0;
  long m = 0;
  tseries tau0;                                  // z^m block divided by z^m; unit
  std::vector<std::optional<prep_rung>> rungs;   // index k <-> i = k+2, i = 2..m-1
  std::optional<prep_rung> taum;                 // z^0 rung (eq2/eq3)
  long t = 0;                                    // eq4 tail exponent
  tseries omega_tail;                            // eq4: Omega with F ladder + x^t*Omega
  long omega_bound = 0;                          // eq4: the bound t must exceed
};

struct not_prepared {
  expo witness;
  std::string reason;
};

using classify_result = std::variant<prep_form, not_prepared>;

classify_result classify_3prepared(const local_form& lf);

}  // namespace torofold
