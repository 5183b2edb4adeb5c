#pragma once

#include <optional>
#include <string>
#include <utility>

#include "opineq/matrix.hpp"
#include "opineq/tolerances.hpp"

namespace opineq {

// ---------------------------------------------------------------------------
// Numerical radius
// ---------------------------------------------------------------------------

struct NumericalRadiusResult {
  double value = 0.0;
  /// Angle maximizing lambda_max((e^{i theta} T + e^{-i theta} T*) / 2).
  double theta = 0.0;
  /// Unit top eigenvector at theta; |<T x, x>| = value up to roundoff.
  Vector maximizer;
};

/// w(T) = max over theta of lambda_max(Re(e^{i theta} T)). A 720-point grid
/// locates candidate peaks; each peak within a small margin of the best is
/// refined by golden-section search to bracket width 1e-12.
/// Throws NotSquare.
NumericalRadiusResult numerical_radius_detail(const Matrix& t, const Tolerances& tol = {});
double numerical_radius(const Matrix& t, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// (alpha, beta) certificates
// ---------------------------------------------------------------------------

/// Extremes of the Rayleigh ratio |T* x|^2 / |T x|^2 over x outside ker(T).
struct AlphaBetaCertificate {
  double alpha_sq = 0.0;
  double beta_sq = 0.0;
  Vector minimizing_vector;
  Vector maximizing_vector;

  double alpha() const;
  double beta() const;
};

/// Throws NotSquare, ZeroOperator, KernelMismatch (ker T != ker T*).
AlphaBetaCertificate tightest_alpha_beta(const Matrix& t, const Tolerances& tol = {});

/// alpha^2 T*T <= TT* <= beta^2 T*T in the Loewner order.
/// Throws NotSquare, BadParams unless 0 <= alpha <= 1 <= beta.
bool is_ab_normal(const Matrix& t, double alpha, double beta, const Tolerances& tol = {});

/// Ratio |T* x|^2 / |T x|^2 (x must not lie in ker T).
double rayleigh_ratio(const Matrix& t, std::span<const Complex> x);

// ---------------------------------------------------------------------------
// Pseudo-inverse, majorization, factorizations
// ---------------------------------------------------------------------------

/// Moore-Penrose inverse V Sigma^+ U*, singular values at or below the rank
/// threshold inverted to zero.
Matrix pseudo_inverse(const Matrix& t, const Tolerances& tol = {});

struct MajorizationResult {
  /// ran(T) is contained in ran(S): rank [S | T] == rank S at a shared threshold.
  bool range_contained = false;
  /// inf{mu >= 0 : TT* <= mu SS*} by bisection; +infinity when not contained.
  double infimum = 0.0;
};

/// Throws ShapeMismatch when t and s differ in shape.
MajorizationResult majorizes(const Matrix& t, const Matrix& s, const Tolerances& tol = {});

/// inf{mu : mu A - B >= 0} for Hermitian A, B, bisection on the Loewner test
/// restricted to the span of `basis` (orthonormal columns) on which A is
/// positive definite.
double loewner_bisection(const Matrix& a, const Matrix& b, const Matrix& basis, const Tolerances& tol);

/// Relative agreement used when comparing factor norms with certified constants.
inline constexpr double kConstantMatchTolerance = 1e-6;

struct FactorizationResult {
  std::string kind;  // "douglas", "s1" or "s2"
  Matrix factor;
  /// |reconstruction - target|
  double residual = 0.0;
  double factor_norm = 0.0;
  double factor_norm_sq = 0.0;
  /// Bisection value of the constant named by constant_description.
  double certified_infimum = 0.0;
  std::string constant_description;
  bool norm_matches_constant = false;
  bool norm_sq_matches_constant = false;
  /// |F|^-2 against the constant; the relevant reading for S2.
  bool inverse_norm_sq_matches_constant = false;
  bool kernel_match = false;
  bool range_containment = false;
  /// Largest principal-angle sine between ker(F) and ker(T).
  double kernel_angle = 0.0;
  /// Largest principal-angle sine of ran(F) outside the admissible range.
  double range_angle = 0.0;

  friend bool operator==(const FactorizationResult&, const FactorizationResult&) = default;
};

/// Minimal-norm R with T = S R: R = P_{ran S*} S^+ T P_{ran T*}.
/// Throws NotMajorized, ShapeMismatch.
FactorizationResult douglas_factorization(const Matrix& t, const Matrix& s, const Tolerances& tol = {});

/// S1 with T = T* S1 and S2 with T = S2 T*. The S1 constant is
/// inf{mu : TT* <= mu T*T}; the S2 constant is sup{a : a T*T <= TT*}.
/// Throws NotSquare, ZeroOperator, KernelMismatch, AlphaZero.
std::pair<FactorizationResult, FactorizationResult> construct_s1_s2(const Matrix& t,
                                                                    const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

struct OperatorProfile {
  std::size_t dim = 0;
  std::optional<double> alpha_opt;
  std::optional<double> beta_opt;
  std::optional<double> alpha_sq;
  std::optional<double> beta_sq;
  double numerical_radius = 0.0;
  double numerical_radius_of_square = 0.0;
  double op_norm = 0.0;
  std::size_t kernel_dim = 0;
  bool kernels_equal = false;
  bool is_ab_normal = false;

  friend bool operator==(const OperatorProfile&, const OperatorProfile&) = default;
};

/// Throws NotSquare.
OperatorProfile profile(const Matrix& t, const Tolerances& tol = {});

}  // namespace opineq
