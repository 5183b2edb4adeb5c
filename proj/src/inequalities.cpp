#include "opineq/inequalities.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "opineq/linalg.hpp"

namespace opineq {

namespace {

// Search vectors with |T x| below this fraction of |T| are skipped: T x is
// then dominated by roundoff and the ratio |T* x| / |T x| is meaningless.
constexpr double kNegligibleImage = 1e-6;

std::string normalize_name(std::string_view name) {
  std::string key;
  for (char c : name) {
    key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return key;
}

OperatorContext::Sample make_sample(const Matrix& t, const Matrix& ts, Vector x) {
  OperatorContext::Sample s;
  s.tx = t * x;
  s.tsx = ts * x;
  s.tx_norm = norm(s.tx);
  s.tsx_norm = norm(s.tsx);
  s.t2 = inner(s.tx, s.tsx);
  s.x = std::move(x);
  return s;
}

double combo_norm(const OperatorContext& ctx, Complex a, Complex b) {
  return operator_norm(a * ctx.t() + b * ctx.t_adjoint());
}

double combo_norm(const OperatorContext::Sample& s, Complex a, Complex b) {
  return norm(combine(a, s.tx, b, s.tsx));
}

bool is_finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::BadParams, what);
}

// Fills defaults and checks the domain of each theorem.
InequalityParams resolve(TheoremId id, const OperatorContext& ctx, const InequalityParams& in) {
  InequalityParams p = in;
  require(std::isfinite(p.lambda.real()) && std::isfinite(p.lambda.imag()) && std::isfinite(p.mu.real()) &&
              std::isfinite(p.mu.imag()),
          "lambda and mu must be finite");
  switch (id) {
    case TheoremId::GRC_POWER:
      if (!p.r) p.r = 1.0;
      require(is_finite_nonneg(*p.r), "GRC_POWER needs a finite r >= 0");
      break;
    case TheoremId::QUAD_REVERSE:
      require(p.lambda != 0.0, "QUAD_REVERSE needs lambda != 0");
      break;
    case TheoremId::SCHWARZ_REV_QUAD:
    case TheoremId::SCHWARZ_REV_LIN:
      require(p.lambda != 0.0, "Schwarz reverse checks need lambda != 0");
      if (!p.r) p.r = combo_norm(ctx, -1.0, p.lambda);
      require(is_finite_nonneg(*p.r), "Schwarz reverse checks need a finite r >= 0");
      break;
    case TheoremId::PARALLELOGRAM_POWER:
    case TheoremId::HALF_SUM_NORM:
      if (!p.p) p.p = 2.0;
      require(std::isfinite(*p.p) && *p.p >= 2.0, "p must satisfy p >= 2");
      break;
    case TheoremId::DS_LOWER:
      if (!p.p) p.p = 1.5;
      require(*p.p > 1.0 && *p.p < 2.0, "DS_LOWER needs p in (1, 2)");
      break;
    case TheoremId::BUZANO_RADIUS:
    case TheoremId::DUNKL_WILLIAMS:
      break;
  }
  return p;
}

double ds_lower_coefficient(const InequalityParams& p, Mode mode, double alpha, double beta) {
  const double l = std::abs(p.lambda);
  const double m = std::abs(p.mu);
  const double q = *p.p;
  if (mode == Mode::Printed) {
    return std::pow(l + beta * m, q) + std::max(l - m * beta, alpha * m - l);
  }
  return std::pow(l + alpha * m, q) + std::pow(std::max({l - beta * m, alpha * m - l, 0.0}), q);
}

std::optional<PointwiseValue> evaluate_sample(TheoremId id, const OperatorContext& ctx, const InequalityParams& p,
                                              Mode mode, const OperatorContext::Sample& s) {
  const double a = s.tx_norm;
  const double b = s.tsx_norm;
  const double q = std::abs(s.t2);
  double alpha = 1.0;
  double beta = 1.0;
  if (id != TheoremId::HALF_SUM_NORM) {
    const AlphaBetaCertificate& c = ctx.certificate();
    alpha = c.alpha();
    beta = c.beta();
  }
  PointwiseValue v;
  switch (id) {
    case TheoremId::GRC_POWER: {
      if (a <= kNegligibleImage * ctx.op_norm() || b == 0.0) return std::nullopt;
      const double r = *p.r;
      const double d = combo_norm(s, beta, -1.0);
      v.lhs = (std::pow(alpha, 2 * r) + std::pow(beta, 2 * r)) * std::pow(a, 2 * r);
      const double cross = 2.0 * std::pow(beta, r) * std::pow(a, r - 1) * std::pow(b, r - 1) * q;
      if (r >= 1.0) {
        v.rhs = cross + r * r * std::pow(beta, 2 * r - 2) * std::pow(a, 2 * r - 2) * d * d;
      } else {
        v.rhs = cross + std::pow(b, 2 * r - 2) * d * d;
      }
      break;
    }
    case TheoremId::BUZANO_RADIUS: {
      const double t1 = std::abs(inner(s.tx, s.x));
      v.lhs = t1 * t1;
      v.rhs = 0.5 * (beta * a * a + q);
      break;
    }
    case TheoremId::DUNKL_WILLIAMS: {
      const double d = combo_norm(s, 1.0, -p.lambda);
      const double den = 1.0 + std::abs(p.lambda) * alpha;
      v.lhs = alpha * a * a;
      v.rhs = q + 2.0 * beta * d * d / (den * den);
      break;
    }
    case TheoremId::QUAD_REVERSE: {
      const double k = 1.0 / std::abs(p.lambda) + beta;
      v.lhs = (alpha * alpha - k * k) * a * a * a * a;
      v.rhs = q * q;
      break;
    }
    case TheoremId::SCHWARZ_REV_QUAD: {
      const double r = *p.r;
      const double l = std::abs(p.lambda);
      v.lhs = alpha * alpha * a * a * a * a;
      v.rhs = q * q + r * r / (l * l) * a * a;
      break;
    }
    case TheoremId::SCHWARZ_REV_LIN: {
      const double r = *p.r;
      v.lhs = alpha * a * a;
      v.rhs = q + r * r / (2.0 * std::abs(p.lambda));
      break;
    }
    case TheoremId::PARALLELOGRAM_POWER: {
      const double e = *p.p;
      const double sum = std::pow(combo_norm(s, 1.0, 1.0), e) + std::pow(combo_norm(s, 1.0, -1.0), e);
      v.lhs = 2.0 * (1.0 + std::pow(alpha, e)) * std::pow(a, e);
      v.rhs = mode == Mode::Printed ? 0.5 * sum : sum;
      break;
    }
    case TheoremId::HALF_SUM_NORM: {
      const double e = *p.p;
      v.lhs = std::pow(0.5 * (a * a + b * b), e / 2.0);
      v.rhs = 0.25 * (std::pow(combo_norm(s, 1.0, 1.0), e) + std::pow(combo_norm(s, 1.0, -1.0), e));
      break;
    }
    case TheoremId::DS_LOWER: {
      const double e = *p.p;
      v.lhs = ds_lower_coefficient(p, mode, alpha, beta) * std::pow(a, e);
      v.rhs = std::pow(combo_norm(s, p.lambda, p.mu), e) + std::pow(combo_norm(s, p.lambda, -p.mu), e);
      break;
    }
  }
  return v;
}

struct SearchResult {
  const OperatorContext::Sample* sample = nullptr;
  PointwiseValue value;
};

// Sample with the smallest rhs - lhs; ties keep the earliest.
SearchResult min_slack_sample(TheoremId id, const OperatorContext& ctx, const InequalityParams& p, Mode mode) {
  SearchResult best;
  double best_slack = std::numeric_limits<double>::infinity();
  for (const auto& s : ctx.samples()) {
    const auto v = evaluate_sample(id, ctx, p, mode, s);
    if (!v) continue;
    const double slack = v->rhs - v->lhs;
    if (slack < best_slack) {
      best_slack = slack;
      best = {&s, *v};
    }
  }
  return best;
}

void attach_witness(InequalityReport& rep, const SearchResult& found, double tol_slack) {
  if (found.sample && found.value.rhs - found.value.lhs < -tol_slack) {
    rep.witness = found.sample->x;
    rep.witness_lhs = found.value.lhs;
    rep.witness_rhs = found.value.rhs;
  }
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
  switch (id) {
    case TheoremId::GRC_POWER: return "GRC_POWER";
    case TheoremId::BUZANO_RADIUS: return "BUZANO_RADIUS";
    case TheoremId::DUNKL_WILLIAMS: return "DUNKL_WILLIAMS";
    case TheoremId::QUAD_REVERSE: return "QUAD_REVERSE";
    case TheoremId::SCHWARZ_REV_QUAD: return "SCHWARZ_REV_QUAD";
    case TheoremId::SCHWARZ_REV_LIN: return "SCHWARZ_REV_LIN";
    case TheoremId::PARALLELOGRAM_POWER: return "PARALLELOGRAM_POWER";
    case TheoremId::HALF_SUM_NORM: return "HALF_SUM_NORM";
    case TheoremId::DS_LOWER: return "DS_LOWER";
  }
  return "UNKNOWN";
}

std::string_view to_string(LemmaId id) noexcept {
  switch (id) {
    case LemmaId::GRC_VEC: return "GRC_VEC";
    case LemmaId::BUZANO: return "BUZANO";
    case LemmaId::DUNKL_WILLIAMS_VEC: return "DUNKL_WILLIAMS_VEC";
    case LemmaId::DRAGOMIR_QUAD: return "DRAGOMIR_QUAD";
    case LemmaId::DRAGOMIR_R: return "DRAGOMIR_R";
    case LemmaId::DRAGOMIR_RRR: return "DRAGOMIR_RRR";
    case LemmaId::DS_UPPER: return "DS_UPPER";
    case LemmaId::DS_LOWER_VEC: return "DS_LOWER_VEC";
    case LemmaId::POWER_MEAN: return "POWER_MEAN";
  }
  return "UNKNOWN";
}

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::Printed ? "printed" : "corrected";
}

std::optional<TheoremId> parse_theorem_id(std::string_view name) {
  const std::string key = normalize_name(name);
  for (TheoremId id : kAllTheorems) {
    if (key == to_string(id)) return id;
  }
  return std::nullopt;
}

std::optional<LemmaId> parse_lemma_id(std::string_view name) {
  const std::string key = normalize_name(name);
  for (LemmaId id : kAllLemmas) {
    if (key == to_string(id)) return id;
  }
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view name) {
  const std::string key = normalize_name(name);
  if (key == "PRINTED") return Mode::Printed;
  if (key == "CORRECTED") return Mode::Corrected;
  return std::nullopt;
}

std::string_view InequalityReport::name() const noexcept {
  if (theorem) return to_string(*theorem);
  if (lemma) return to_string(*lemma);
  return "UNKNOWN";
}

Summary summarize(const std::vector<InequalityReport>& reports) {
  Summary s;
  for (const auto& r : reports) {
    if (r.error) {
      ++s.failed;
    } else if (!r.preconditions_met) {
      ++s.vacuous;
    } else if (r.passed) {
      ++s.passed;
    } else {
      ++s.failed;
    }
  }
  return s;
}

OperatorContext::OperatorContext(Matrix t, const Tolerances& tol, std::size_t random_samples, std::uint64_t seed)
    : t_(std::move(t)), tol_(tol) {
  tol_.validate();
  if (!t_.is_square()) throw Error(ErrorCode::NotSquare, "inequality checks need a square matrix");
  ts_ = adjoint(t_);
  const std::size_t n = t_.rows();
  const auto d = svd(t_, tol_);
  if (n > 0) {
    op_norm_ = d.singular_values.front();
    ts_sigma_min_ = d.singular_values.back();
  }
  radius_ = numerical_radius_detail(t_, tol_);
  radius_sq_ = numerical_radius_detail(t_ * t_, tol_);
  try {
    certificate_ = tightest_alpha_beta(t_, tol_);
  } catch (const Error& e) {
    certificate_error_ = e.code();
    certificate_message_ = e.what();
  }
  if (n == 0) return;

  std::vector<Vector> candidates{radius_.maximizer, radius_sq_.maximizer};
  for (std::size_t j = 0; j < n; ++j) candidates.push_back(d.v.column(j));
  const auto sum_eig = hermitian_eig(gram(t_) + outer_gram(t_), tol_);
  for (std::size_t j = 0; j < n; ++j) candidates.push_back(sum_eig.eigenvectors.column(j));
  if (certificate_) {
    candidates.push_back(certificate_->minimizing_vector);
    candidates.push_back(certificate_->maximizing_vector);
  }
  auto random = random_unit_vectors(n, random_samples, seed);
  samples_.reserve(candidates.size() + random.size());
  for (auto& x : candidates) samples_.push_back(make_sample(t_, ts_, normalized(x)));
  for (auto& x : random) samples_.push_back(make_sample(t_, ts_, std::move(x)));
}

const AlphaBetaCertificate& OperatorContext::certificate() const {
  if (!certificate_) throw Error(certificate_error_, certificate_message_);
  return *certificate_;
}

std::optional<PointwiseValue> pointwise(TheoremId id, const OperatorContext& ctx, const InequalityParams& params,
                                        Mode mode, std::span<const Complex> x) {
  const InequalityParams p = resolve(id, ctx, params);
  const auto s = make_sample(ctx.t(), ctx.t_adjoint(), Vector(x.begin(), x.end()));
  return evaluate_sample(id, ctx, p, mode, s);
}

InequalityReport verify_theorem(TheoremId id, const Matrix& t, const InequalityParams& params, Mode mode,
                                const Tolerances& tol) {
  return verify_theorem(id, OperatorContext(t, tol), params, mode);
}

InequalityReport verify_theorem(TheoremId id, const OperatorContext& ctx, const InequalityParams& params,
                                Mode mode) {
  const Tolerances& tol = ctx.tolerances();
  InequalityReport rep;
  rep.theorem = id;
  rep.mode = mode;
  rep.params = resolve(id, ctx, params);
  const InequalityParams& p = rep.params;

  double alpha = 1.0;
  double beta = 1.0;
  if (id != TheoremId::HALF_SUM_NORM) {
    const AlphaBetaCertificate& c = ctx.certificate();
    alpha = c.alpha();
    beta = c.beta();
  }
  const double n = ctx.op_norm();
  const double w = ctx.radius().value;
  const double w2 = ctx.radius_of_square().value;

  bool pointwise_report = false;
  switch (id) {
    case TheoremId::GRC_POWER: {
      const double r = *p.r;
      if (mode == Mode::Corrected) {
        pointwise_report = true;
        break;
      }
      const double d = combo_norm(ctx, beta, -1.0);
      const double c = r >= 1.0 ? r * r * std::pow(beta, 2 * r - 2) : 1.0;
      rep.lhs = (std::pow(alpha, 2 * r) + std::pow(beta, 2 * r)) * n * n;
      rep.rhs = 2.0 * std::pow(beta, r) * w2 + c * d * d;
      break;
    }
    case TheoremId::BUZANO_RADIUS:
      rep.lhs = w * w;
      rep.rhs = 0.5 * (beta * n * n + w2);
      break;
    case TheoremId::DUNKL_WILLIAMS: {
      const double d = combo_norm(ctx, 1.0, -p.lambda);
      const double den = 1.0 + std::abs(p.lambda) * alpha;
      rep.lhs = alpha * n * n;
      rep.rhs = w2 + 2.0 * beta * d * d / (den * den);
      break;
    }
    case TheoremId::QUAD_REVERSE: {
      const double k = 1.0 / std::abs(p.lambda) + beta;
      rep.lhs = (alpha * alpha - k * k) * n * n * n * n;
      rep.rhs = w2;
      rep.note = "structurally vacuous: alpha^2 - (1/|lambda| + beta)^2 < 0 whenever alpha <= 1 <= beta";
      break;
    }
    case TheoremId::SCHWARZ_REV_QUAD: {
      const double r = *p.r;
      const double l = std::abs(p.lambda);
      const bool near = combo_norm(ctx, -1.0, p.lambda) <= r;
      const bool bounded = r / l <= ctx.adjoint_min_singular_value();
      rep.preconditions_met = near && bounded;
      if (!near) {
        rep.note = "precondition failed: |lambda T* - T| > r";
      } else if (!bounded) {
        rep.note = "precondition failed: r/|lambda| > min |T* x|";
      }
      rep.lhs = alpha * alpha * n * n * n * n;
      rep.rhs = w2 * w2 + r * r / (l * l) * n * n;
      break;
    }
    case TheoremId::SCHWARZ_REV_LIN: {
      const double r = *p.r;
      rep.preconditions_met = combo_norm(ctx, -1.0, p.lambda) <= r;
      if (!rep.preconditions_met) rep.note = "precondition failed: |lambda T* - T| > r";
      rep.lhs = alpha * n * n;
      rep.rhs = w2 + r * r / (2.0 * std::abs(p.lambda));
      break;
    }
    case TheoremId::PARALLELOGRAM_POWER: {
      const double e = *p.p;
      const double sum = std::pow(combo_norm(ctx, 1.0, 1.0), e) + std::pow(combo_norm(ctx, 1.0, -1.0), e);
      rep.lhs = 2.0 * (1.0 + std::pow(alpha, e)) * std::pow(n, e);
      rep.rhs = mode == Mode::Printed ? 0.5 * sum : sum;
      break;
    }
    case TheoremId::HALF_SUM_NORM: {
      const double e = *p.p;
      const double h = 0.5 * operator_norm(gram(ctx.t()) + outer_gram(ctx.t()));
      rep.lhs = std::pow(h, e / 2.0);
      rep.rhs = 0.25 * (std::pow(combo_norm(ctx, 1.0, 1.0), e) + std::pow(combo_norm(ctx, 1.0, -1.0), e));
      break;
    }
    case TheoremId::DS_LOWER: {
      const double e = *p.p;
      rep.lhs = ds_lower_coefficient(p, mode, alpha, beta) * std::pow(n, e);
      rep.rhs = std::pow(combo_norm(ctx, p.lambda, p.mu), e) + std::pow(combo_norm(ctx, p.lambda, -p.mu), e);
      break;
    }
  }

  if (pointwise_report) {
    const SearchResult found = min_slack_sample(id, ctx, p, mode);
    if (found.sample) {
      rep.lhs = found.value.lhs;
      rep.rhs = found.value.rhs;
    }
    rep.note = "pointwise form; lhs and rhs at the minimal-slack search vector";
    rep.slack = rep.rhs - rep.lhs;
    rep.passed = rep.slack >= -tol.tol_slack;
    if (!rep.passed) attach_witness(rep, found, tol.tol_slack);
    return rep;
  }

  rep.slack = rep.rhs - rep.lhs;
  rep.passed = !rep.preconditions_met || rep.slack >= -tol.tol_slack;
  if (!rep.passed) {
    attach_witness(rep, min_slack_sample(id, ctx, p, mode), tol.tol_slack);
    if (!rep.witness) rep.note = "no pointwise violation in the search set";
  }
  return rep;
}

std::vector<InequalityParams> default_params(TheoremId id) {
  const std::vector<Complex> lambdas{{1, 0}, {0, 1}, {1, 1}, {2, 0}};
  const std::vector<Complex> mus{{1, 0}, {0, 1}};
  std::vector<InequalityParams> out;
  switch (id) {
    case TheoremId::GRC_POWER:
      for (double r : {0.5, 1.0, 2.0}) {
        InequalityParams p;
        p.r = r;
        out.push_back(p);
      }
      break;
    case TheoremId::BUZANO_RADIUS:
    case TheoremId::SCHWARZ_REV_QUAD:
    case TheoremId::SCHWARZ_REV_LIN:
      out.push_back({});
      break;
    case TheoremId::DUNKL_WILLIAMS:
    case TheoremId::QUAD_REVERSE:
      for (Complex l : lambdas) {
        InequalityParams p;
        p.lambda = l;
        out.push_back(p);
      }
      break;
    case TheoremId::PARALLELOGRAM_POWER:
    case TheoremId::HALF_SUM_NORM:
      for (double e : {2.0, 3.0, 4.0}) {
        InequalityParams p;
        p.p = e;
        out.push_back(p);
      }
      break;
    case TheoremId::DS_LOWER:
      for (Complex l : lambdas) {
        for (Complex m : mus) {
          for (double e : {1.25, 1.5, 1.75}) {
            InequalityParams p;
            p.lambda = l;
            p.mu = m;
            p.p = e;
            out.push_back(p);
          }
        }
      }
      break;
  }
  return out;
}

std::vector<TheoremCheck> default_checks(std::span<const TheoremId> ids, Mode mode) {
  std::vector<TheoremCheck> out;
  for (TheoremId id : ids) {
    for (auto& p : default_params(id)) out.push_back({id, std::move(p), mode});
  }
  return out;
}

SweepResult sweep(const std::vector<Matrix>& operators, const std::vector<TheoremCheck>& checks,
                  const Tolerances& tol, std::size_t first_index) {
  SweepResult out;
  out.reports.reserve(operators.size() * checks.size());
  for (std::size_t k = 0; k < operators.size(); ++k) {
    const std::size_t index = first_index + k;
    std::optional<OperatorContext> ctx;
    std::optional<Error> setup_error;
    try {
      ctx.emplace(operators[k], tol);
    } catch (const Error& e) {
      setup_error = e;
    }
    for (const auto& check : checks) {
      InequalityReport rep;
      try {
        if (setup_error) throw *setup_error;
        rep = verify_theorem(check.id, *ctx, check.params, check.mode);
      } catch (const Error& e) {
        rep = InequalityReport{};
        rep.theorem = check.id;
        rep.mode = check.mode;
        rep.params = check.params;
        rep.passed = false;
        rep.error = e.code();
        rep.error_message = e.what();
      }
      rep.operator_index = index;
      out.reports.push_back(std::move(rep));
    }
  }
  out.summary = summarize(out.reports);
  return out;
}

SweepResult sweep(const EnsembleSpec& ensemble, const std::vector<TheoremCheck>& checks, const Tolerances& tol) {
  ensemble.validate();
  SweepResult out;
  for (std::size_t i = 0; i < ensemble.count; ++i) {
    SweepResult one = sweep(std::vector<Matrix>{generate_one(ensemble, i)}, checks, tol, i);
    for (auto& r : one.reports) out.reports.push_back(std::move(r));
  }
  out.summary = summarize(out.reports);
  return out;
}

}  // namespace opineq
