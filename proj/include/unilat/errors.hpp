#ifndef UNILAT_ERRORS_HPP
#define UNILAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unilat {

enum class errc {
  ok = 0,
  usage,
  parse,
  non_stochastic_row,
  negative_entry,
  shape_mismatch,
  degenerate_delta,
  missing_boundary_value,
  assumption_failed,
  assumption3_failed,
  step_limit_exceeded,
  not_a_block_vertex,
  window_mismatch,
  io,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::usage: return "Usage";
    case errc::parse: return "ParseError";
    case errc::non_stochastic_row: return "NonStochasticRow";
    case errc::negative_entry: return "NegativeEntry";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::degenerate_delta: return "DegenerateDelta";
    case errc::missing_boundary_value: return "MissingBoundaryValue";
    case errc::assumption_failed: return "AssumptionFailed";
    case errc::assumption3_failed: return "Assumption3Failed";
    case errc::step_limit_exceeded: return "StepLimitExceeded";
    case errc::not_a_block_vertex: return "NotABlockVertex";
    case errc::window_mismatch: return "WindowMismatch";
    case errc::io: return "IoError";
    case errc::internal: return "InternalError";
  }
  return "unknown";
}

}  // namespace unilat

#endif
