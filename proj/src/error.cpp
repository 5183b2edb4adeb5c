#include "opineq/error.hpp"

#include <cmath>

#include "opineq/tolerances.hpp"

namespace opineq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::NotMajorized: return "NotMajorized";
    case ErrorCode::AlphaZero: return "AlphaZero";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  for (double v : {tol_eig, tol_psd, tol_rank_factor, tol_slack}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::BadParams, "tolerances must be finite and strictly positive");
    }
  }
}

}  // namespace opineq
