#pragma once

#include <string>
#include <vector>

#include "torofold/blowup.hpp"

namespace torofold {

enum class verdict_t { pass, fail, inconclusive };

std::string verdict_str(verdict_t v);

// one terminal chart of a run: a printable description of the chart, the
// invariant value found there, and what the chart turned out to contain
struct chart_evidence {
  std::string chart;
  sigval sigma;
  std::string classification;
};

// a run laid out as root form, blow-up steps taken, and the resulting leaves
struct chart_tree {
  local_form root;
  std::vector<std::string> steps;
  std::vector<chart_evidence> leaves;
};

struct theorem_report {
  std::string theorem;
  verdict_t verdict = verdict_t::inconclusive;
  sigval sigma_before;
  sigval gamma_after;                 // max invariant over the leaves
  std::vector<chart_evidence> charts;
  std::vector<std::string> fan;       // rays of the fan driving the charts
  long omega_used = -1;               // tail bound when one was involved
  std::string witness;                // failing chart when verdict == fail
  std::string detail;

  std::string to_json() const;
};

// principalize the ladder ideal of a 1-point bottom-rung form and check the
// invariant drops strictly in every principal chart of the minimal fan
theorem_report run_1point_reduction(const local_form& lf);

// 1-point form whose bottom coefficient sits above the omega bound: run the
// strict-mode fan and check the tail never disturbs the ladder analysis
theorem_report run_1point_spec(const local_form& lf);

// principalize the 3D ladder ideal of a 2-point form and check the invariant
// drops strictly at the corner, edge and divisor-interior points of the fiber
theorem_report run_2point_reduction(const local_form& lf);

// principalize the support of F at a 3-point form, or the z-coefficient ideal
// at a 2-point form, and check the invariant becomes finite everywhere
theorem_report run_3point_principalization(const local_form& lf);

// move along the 2-curve to a generic point and check the invariant is 0 there
theorem_report specialize_2curve(const local_form& lf);

// base data u = (x^a y^b)^l of a germ in two variables; b = 0 means u = x^(a l)
struct dim2_u {
  long a = 1, b = 0, l = 1;
};

// resolve (u, v) in two variables by point blow-ups until every terminal chart
// carries one of the two monomial shapes, checking the jacobian factorization
// and the recovered exponent identities at each leaf
theorem_report run_dim2(const dim2_u& u, const tseries& v, int max_depth = 24);

}  // namespace torofold
