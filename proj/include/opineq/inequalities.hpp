#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opineq/error.hpp"
#include "opineq/generators.hpp"
#include "opineq/matrix.hpp"
#include "opineq/operator_analysis.hpp"
#include "opineq/tolerances.hpp"

namespace opineq {

/// Operator-level inequalities for (alpha, beta)-normal T. Below, w2 = w(T^2)
/// and alpha, beta are the tightest constants.
enum class TheoremId {
  GRC_POWER,            // (a^2r + b^2r)|T|^2 <= 2 b^r w2 + c |bT - T*|^2
  BUZANO_RADIUS,        // w(T)^2 <= (b |T|^2 + w2) / 2
  DUNKL_WILLIAMS,       // a |T|^2 <= w2 + 2b |T - lT*|^2 / (1 + |l| a)^2
  QUAD_REVERSE,         // [a^2 - (1/|l| + b)^2] |T|^4 <= w2
  SCHWARZ_REV_QUAD,     // a^2 |T|^4 <= w2^2 + r^2/|l|^2 |T|^2
  SCHWARZ_REV_LIN,      // a |T|^2 <= w2 + r^2 / (2|l|)
  PARALLELOGRAM_POWER,  // 2(1 + a^p)|T|^p <= |T + T*|^p + |T - T*|^p
  HALF_SUM_NORM,        // |(T*T + TT*)/2|^(p/2) <= (|T + T*|^p + |T - T*|^p) / 4
  DS_LOWER,             // [(|l| + a|m|)^p + max{...}^p] |T|^p <= |lT + mT*|^p + |lT - mT*|^p
};

inline constexpr TheoremId kAllTheorems[] = {
    TheoremId::GRC_POWER,        TheoremId::BUZANO_RADIUS,       TheoremId::DUNKL_WILLIAMS,
    TheoremId::QUAD_REVERSE,     TheoremId::SCHWARZ_REV_QUAD,    TheoremId::SCHWARZ_REV_LIN,
    TheoremId::PARALLELOGRAM_POWER, TheoremId::HALF_SUM_NORM,    TheoremId::DS_LOWER,
};

/// Vector inequalities in an inner product space.
enum class LemmaId {
  GRC_VEC,
  BUZANO,
  DUNKL_WILLIAMS_VEC,
  DRAGOMIR_QUAD,
  DRAGOMIR_R,
  DRAGOMIR_RRR,
  DS_UPPER,
  DS_LOWER_VEC,
  POWER_MEAN,
};

inline constexpr LemmaId kAllLemmas[] = {
    LemmaId::GRC_VEC,      LemmaId::BUZANO,       LemmaId::DUNKL_WILLIAMS_VEC,
    LemmaId::DRAGOMIR_QUAD, LemmaId::DRAGOMIR_R,  LemmaId::DRAGOMIR_RRR,
    LemmaId::DS_UPPER,     LemmaId::DS_LOWER_VEC, LemmaId::POWER_MEAN,
};

enum class Mode { Printed, Corrected };

std::string_view to_string(TheoremId id) noexcept;
std::string_view to_string(LemmaId id) noexcept;
std::string_view to_string(Mode mode) noexcept;
/// Case-insensitive; '-' and '_' are interchangeable.
std::optional<TheoremId> parse_theorem_id(std::string_view name);
std::optional<LemmaId> parse_lemma_id(std::string_view name);
std::optional<Mode> parse_mode(std::string_view name);

/// Unset fields take per-theorem defaults: r = 1 for GRC_POWER and
/// r = |lambda T* - T| for the Schwarz reverses; p = 2, or 1.5 for DS_LOWER.
struct InequalityParams {
  std::optional<double> r;
  Complex lambda{1.0, 0.0};
  Complex mu{1.0, 0.0};
  std::optional<double> p;

  friend bool operator==(const InequalityParams&, const InequalityParams&) = default;
};

struct InequalityReport {
  /// Exactly one of theorem / lemma is set.
  std::optional<TheoremId> theorem;
  std::optional<LemmaId> lemma;
  Mode mode = Mode::Printed;
  /// Parameters with defaults resolved.
  InequalityParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  /// slack >= -tol_slack, or the check is vacuous.
  bool passed = true;
  bool preconditions_met = true;
  /// Unit vector violating the pointwise form, with both sides there.
  std::optional<Vector> witness;
  std::optional<double> witness_lhs;
  std::optional<double> witness_rhs;
  std::string note;
  /// Set when evaluation threw; passed is then false.
  std::optional<ErrorCode> error;
  std::string error_message;
  std::optional<std::size_t> operator_index;

  std::string_view name() const noexcept;
  bool vacuous() const noexcept { return !error && !preconditions_met; }
  bool violated() const noexcept { return !passed; }

  friend bool operator==(const InequalityReport&, const InequalityReport&) = default;
};

struct Summary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

/// Vacuous reports count only as vacuous; errors count as failed.
Summary summarize(const std::vector<InequalityReport>& reports);

inline constexpr std::size_t kDefaultSearchSamples = 10000;
inline constexpr std::uint64_t kDefaultSearchSeed = 0x5EA4C4ED5EEDULL;

/// Per-operator quantities shared by every check on one operator:
/// norms, numerical radii, the (alpha, beta) certificate and the
/// unit-vector search set with T x and T* x precomputed. Immutable.
class OperatorContext {
 public:
  struct Sample {
    Vector x;
    Vector tx;
    Vector tsx;
    double tx_norm = 0.0;
    double tsx_norm = 0.0;
    /// <T^2 x, x> = <T x, T* x>
    Complex t2 = 0.0;
  };

  /// Throws NotSquare. A failing certificate is recorded, not thrown.
  explicit OperatorContext(Matrix t, const Tolerances& tol = {},
                           std::size_t random_samples = kDefaultSearchSamples,
                           std::uint64_t seed = kDefaultSearchSeed);

  const Matrix& t() const noexcept { return t_; }
  const Matrix& t_adjoint() const noexcept { return ts_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  double op_norm() const noexcept { return op_norm_; }
  /// Smallest singular value of T*.
  double adjoint_min_singular_value() const noexcept { return ts_sigma_min_; }
  const NumericalRadiusResult& radius() const noexcept { return radius_; }
  const NumericalRadiusResult& radius_of_square() const noexcept { return radius_sq_; }
  /// Throws the recorded error when T has no certificate.
  const AlphaBetaCertificate& certificate() const;
  bool has_certificate() const noexcept { return certificate_.has_value(); }
  const std::vector<Sample>& samples() const noexcept { return samples_; }

 private:
  Matrix t_;
  Matrix ts_;
  Tolerances tol_;
  double op_norm_ = 0.0;
  double ts_sigma_min_ = 0.0;
  NumericalRadiusResult radius_;
  NumericalRadiusResult radius_sq_;
  std::optional<AlphaBetaCertificate> certificate_;
  ErrorCode certificate_error_ = ErrorCode::ZeroOperator;
  std::string certificate_message_;
  std::vector<Sample> samples_;
};

/// Throws NotSquare, KernelMismatch, ZeroOperator, BadParams. Unmet
/// theorem hypotheses give a vacuous pass with preconditions_met = false.
InequalityReport verify_theorem(TheoremId id, const Matrix& t, const InequalityParams& params, Mode mode,
                                const Tolerances& tol = {});
InequalityReport verify_theorem(TheoremId id, const OperatorContext& ctx, const InequalityParams& params,
                                Mode mode);

/// Pointwise form of a theorem at a unit vector. Returns {lhs, rhs}, or
/// nullopt where the form is undefined (e.g. T x = 0 with negative powers).
/// Params must already be resolved (see the report's params).
struct PointwiseValue {
  double lhs = 0.0;
  double rhs = 0.0;
};
std::optional<PointwiseValue> pointwise(TheoremId id, const OperatorContext& ctx, const InequalityParams& params,
                                        Mode mode, std::span<const Complex> x);

/// BUZANO needs the unit vector e; DRAGOMIR_R and DRAGOMIR_RRR read b as y.
/// Throws BadParams. Failed hypotheses give a vacuous pass.
InequalityReport check_vector_lemma(LemmaId id, std::span<const Complex> a, std::span<const Complex> b,
                                    const InequalityParams& params, const Tolerances& tol = {},
                                    std::optional<std::span<const Complex>> e = std::nullopt);

struct TheoremCheck {
  TheoremId id;
  InequalityParams params;
  Mode mode;
};

/// Parameter grid used when the caller gives none.
std::vector<InequalityParams> default_params(TheoremId id);
std::vector<TheoremCheck> default_checks(std::span<const TheoremId> ids, Mode mode);

struct SweepResult {
  std::vector<InequalityReport> reports;
  Summary summary;
};

/// One report per (operator, check), ordered by operator index. Per-item
/// errors become failed reports carrying the error code.
SweepResult sweep(const EnsembleSpec& ensemble, const std::vector<TheoremCheck>& checks, const Tolerances& tol = {});
/// Same, over explicit operators (operator_index is the position).
SweepResult sweep(const std::vector<Matrix>& operators, const std::vector<TheoremCheck>& checks,
                  const Tolerances& tol = {}, std::size_t first_index = 0);

}  // namespace opineq
