#pragma once

namespace opineq {

/// Numeric policy shared by every computation.
struct Tolerances {
  double tol_eig = 1e-12;
  /// Loewner-order slack, relative to max(1, |a|).
  double tol_psd = 1e-10;
  /// Rank threshold is max(rows, cols) * sigma_max * tol_rank_factor.
  double tol_rank_factor = 1e-12;
  /// Allowed negative slack (rhs - lhs) in inequality checks.
  double tol_slack = 1e-8;

  /// Largest principal-angle sine under which two subspaces are identified.
  double angle_threshold() const { return 100.0 * tol_psd; }

  /// Throws Error(BadParams) unless all fields are strictly positive and finite.
  void validate() const;
};

}  // namespace opineq
