#pragma once

#include <stdexcept>
#include <string>

namespace torofold {

// Structured error taxonomy shared by the library, the harnesses and the CLI.
enum class errc {
  not_a_unit,
  degenerate_v,
  malformed_chart,
  malformed_form,
  not_applicable,
  precondition_violated,
  inconclusive,
  range_error,
  depth_exceeded,
  not_representable,
  parse_error,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_a_unit: return "NotAUnit";
    case errc::degenerate_v: return "DegenerateV";
    case errc::malformed_chart: return "MalformedChart";
    case errc::malformed_form: return "MalformedForm";
    case errc::not_applicable: return "NotApplicable";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::inconclusive: return "Inconclusive";
    case errc::range_error: return "RangeError";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::not_representable: return "NotRepresentable";
    case errc::parse_error: return "ParseError";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

inline void check(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace torofold
