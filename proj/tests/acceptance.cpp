// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Tolerances are fixed here, not read from flags.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "opineq/cli.hpp"
#include "opineq/error.hpp"
#include "opineq/generators.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/linalg.hpp"
#include "opineq/operator_analysis.hpp"
#include "opineq/report.hpp"
#include "oracles.hpp"

using namespace opineq;

namespace {

constexpr double kAc1ConstantTol = 1e-9;
constexpr double kAc1MaxSeconds = 1.0;
constexpr double kAc2ExampleTol = 1e-6;
constexpr double kAc2RandomTol = 1e-3;
constexpr std::size_t kAc2LatticePoints = 1'200'000;
constexpr double kAc2MaxSeconds = 60.0;
constexpr double kAc3ChainSlack = 1e-8;
constexpr double kAc4SlackTol = 1e-10;
constexpr std::size_t kAc4Tuples = 100'000;
constexpr double kAc4MaxSeconds = 60.0;
constexpr double kAc5SlackTol = 1e-8;
constexpr double kAc5MaxSeconds = 300.0;
constexpr double kAc7ResidualTol = 1e-8;
constexpr double kAc7AngleTol = 1e-8;
constexpr double kAc7NormMatchTol = 1e-6;
constexpr double kAc8IdentityTol = 1e-10;
constexpr double kAc8ExampleTol = 1e-12;

const std::string kDataDir = OPINEQ_DATA_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Cli {
  int code;
  std::string out;
  std::string err;
};

Cli cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Matrix example_matrix() { return Matrix::from_rows({{1, 0}, {1, 1}}); }

Outcome ac1_example_certificate() {
  const auto start = std::chrono::steady_clock::now();
  const Cli r = cli({"analyze", kDataDir + "/example_ab_normal.txt", "--json"});
  const double elapsed = seconds_since(start);
  const ReportDocument doc = parse_report(r.out);
  const double a2 = (3.0 - std::sqrt(5.0)) / 2.0;
  const double b2 = (3.0 + std::sqrt(5.0)) / 2.0;
  const auto& p = doc.profile.value();
  const double ea = std::abs(p.alpha_sq.value() - a2);
  const double eb = std::abs(p.beta_sq.value() - b2);
  const bool at_constants = is_ab_normal(example_matrix(), std::sqrt(a2), std::sqrt(b2));
  Outcome o;
  o.ok = r.code == kExitOk && ea <= kAc1ConstantTol && eb <= kAc1ConstantTol && p.is_ab_normal && at_constants &&
         elapsed < kAc1MaxSeconds;
  o.detail = fmt("alpha_sq err %.1e, beta_sq err %.1e, is_ab_normal %d/%d, %.3fs", ea, eb, p.is_ab_normal,
                 at_constants, elapsed);
  return o;
}

Outcome ac2_numerical_radius() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  const Matrix shift = Matrix::from_rows({{0, 0}, {1, 0}});
  const double w_shift = numerical_radius(shift);
  const double w_example = numerical_radius(example_matrix());
  const double o_shift = oracle::numerical_radius_bloch(shift, kAc2LatticePoints);
  const double o_example = oracle::numerical_radius_bloch(example_matrix(), kAc2LatticePoints);
  const double e1 = std::max(std::abs(w_shift - 0.5), std::abs(w_shift - o_shift));
  const double e2 = std::max(std::abs(w_example - 1.5), std::abs(w_example - o_example));
  o.ok = e1 <= kAc2ExampleTol && e2 <= kAc2ExampleTol;

  std::mt19937_64 gen(0xAC2);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 3;
    Matrix t(n, n);
    for (auto& z : t.entries()) z = Complex(normal(gen), normal(gen));
    const double ref = n == 2 ? oracle::numerical_radius_bloch(t, 200'000)
                              : oracle::numerical_radius_search(t, 20'000, 1000 + k);
    worst = std::max(worst, std::abs(numerical_radius(t) - ref));
  }
  const double elapsed = seconds_since(start);
  o.ok = o.ok && worst <= kAc2RandomTol && elapsed < kAc2MaxSeconds;
  o.detail = fmt("shift err %.1e, example err %.1e, random worst %.1e, %.1fs", e1, e2, worst, elapsed);
  return o;
}

Outcome ac3_norm_chain() {
  std::size_t violations = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Matrix t = generate_one({EnsembleKind::GaussianDense, 2 + i % 7, 1000, 0xAC3, 1.0}, i);
    const double w = numerical_radius(t);
    const double n = operator_norm(t);
    if (w > n + kAc3ChainSlack || n > 2 * w + kAc3ChainSlack) ++violations;
  }
  return {violations == 0, fmt("%zu violations over 1000 operators", violations)};
}

// Random tuples built to satisfy each lemma's hypothesis, with a share of
// near-parallel, near-zero and boundary stress cases.
class LemmaTupleSource {
 public:
  explicit LemmaTupleSource(std::uint64_t seed) : gen_(seed) {}

  Vector gaussian(std::size_t n) {
    Vector v(n);
    for (auto& z : v) z = Complex(normal_(gen_), normal_(gen_));
    return v;
  }
  double unit() { return uniform_(gen_); }
  double log_scale() { return std::pow(10.0, -8.0 * unit()); }

  // b close to a multiple of a, or tiny, or generic.
  std::pair<Vector, Vector> pair(std::size_t n) {
    Vector a = gaussian(n);
    Vector b = gaussian(n);
    const double pick = unit();
    if (pick < 0.2) {
      b = combine(Complex(normal_(gen_), normal_(gen_)), a, log_scale(), b);
    } else if (pick < 0.3) {
      b = scale(log_scale(), b);
    } else if (pick < 0.35) {
      b = scale(Complex(1.0 + 1e-9 * normal_(gen_), 0.0), a);
    }
    return {a, b};
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

Outcome ac4_vector_lemmas() {
  const auto start = std::chrono::steady_clock::now();
  Tolerances tol;
  tol.tol_slack = kAc4SlackTol;
  LemmaTupleSource src(0xAC4);
  std::size_t violations = 0;
  std::size_t evaluated = 0;
  std::size_t vacuous = 0;
  std::string first;
  for (std::size_t k = 0; k < kAc4Tuples; ++k) {
    const std::size_t n = 1 + k % 16;
    for (LemmaId id : kAllLemmas) {
      auto [a, b] = src.pair(n);
      InequalityParams p;
      std::optional<Vector> e;
      switch (id) {
        case LemmaId::GRC_VEC:
          if (norm(a) < norm(b) && src.unit() < 0.95) std::swap(a, b);
          p.r = src.unit() < 0.5 ? src.unit() : 1.0 + 3.0 * src.unit();
          break;
        case LemmaId::BUZANO:
          e = src.unit() < 0.2 ? normalized(a) : normalized(src.gaussian(n));
          break;
        case LemmaId::DUNKL_WILLIAMS_VEC:
          if (src.unit() < 0.02) b = Vector(n);
          break;
        case LemmaId::DRAGOMIR_QUAD:
          p.lambda = Complex(src.unit() * 4 - 2, src.unit() * 4 - 2);
          if (p.lambda == 0.0) p.lambda = 1.0;
          break;
        case LemmaId::DRAGOMIR_R: {
          const double r = norm(a) * src.unit();
          p.r = r;
          b = add(a, scale(r * src.unit(), normalized(src.gaussian(n))));
          break;
        }
        case LemmaId::DRAGOMIR_RRR: {
          const double r = 3.0 * src.unit();
          p.r = r;
          b = add(a, scale(r * src.unit(), normalized(src.gaussian(n))));
          break;
        }
        case LemmaId::DS_UPPER:
        case LemmaId::POWER_MEAN:
          p.p = src.unit() < 0.1 ? 2.0 : 2.0 + 4.0 * src.unit();
          break;
        case LemmaId::DS_LOWER_VEC:
          p.p = 1.0 + 1e-6 + (1.0 - 2e-6) * src.unit();
          break;
      }
      const InequalityReport rep =
          e ? check_vector_lemma(id, a, b, p, tol, std::span<const Complex>(*e)) : check_vector_lemma(id, a, b, p, tol);
      ++evaluated;
      if (rep.vacuous()) ++vacuous;
      if (!rep.passed) {
        if (violations == 0) first = fmt("%s slack %.3e", std::string(to_string(id)).c_str(), rep.slack);
        ++violations;
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.ok = violations == 0 && elapsed < kAc4MaxSeconds;
  o.detail = fmt("%zu violations, %zu checks (%zu vacuous), %.1fs", violations, evaluated, vacuous, elapsed);
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Outcome ac5_corrected_sweep() {
  const auto start = std::chrono::steady_clock::now();
  Tolerances tol;
  tol.tol_slack = kAc5SlackTol;
  const auto checks = default_checks(kAllTheorems, Mode::Corrected);
  Summary total;
  std::size_t operators = 0;
  std::size_t errors = 0;
  std::string first;
  for (auto kind : {EnsembleKind::Invertible, EnsembleKind::RankDeficientEqualKernels}) {
    for (std::size_t n = 2; n <= 8; ++n) {
      const EnsembleSpec spec{kind, n, 72, 0xAC5 + n, 1.0};
      const SweepResult res = sweep(spec, checks, tol);
      operators += spec.count;
      total.passed += res.summary.passed;
      total.failed += res.summary.failed;
      total.vacuous += res.summary.vacuous;
      for (const auto& r : res.reports) {
        if (r.error) ++errors;
        if (!r.passed && first.empty()) {
          first = fmt("%s n=%zu op %zu slack %.3e", std::string(r.name()).c_str(), n, *r.operator_index, r.slack);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.ok = total.failed == 0 && elapsed < kAc5MaxSeconds;
  o.detail = fmt("%zu operators x %zu checks: %zu passed, %zu failed (%zu errors), %zu vacuous, %.1fs", operators,
                 checks.size(), total.passed, total.failed, errors, total.vacuous, elapsed);
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Outcome ac6_printed_refutation() {
  const std::string id = kDataDir + "/identity2.txt";
  const Cli printed = cli({"verify", id, "--theorem", "PARALLELOGRAM_POWER", "--mode", "printed", "--p", "2", "--json"});
  const Cli corrected =
      cli({"verify", id, "--theorem", "PARALLELOGRAM_POWER", "--mode", "corrected", "--p", "2", "--json"});
  const auto pr = parse_report(printed.out).reports.at(0);
  const auto cr = parse_report(corrected.out).reports.at(0);
  Outcome o;
  o.ok = printed.code == kExitViolation && pr.lhs == 4.0 && pr.rhs == 2.0 && !pr.passed && pr.witness.has_value() &&
         corrected.code == kExitOk && cr.passed && cr.slack == 0.0 && cr.lhs == 4.0 && cr.rhs == 4.0;
  o.detail = fmt("printed lhs %g rhs %g passed %d exit %d; corrected lhs %g rhs %g slack %g exit %d", pr.lhs, pr.rhs,
                 pr.passed, printed.code, cr.lhs, cr.rhs, cr.slack, corrected.code);
  return o;
}

Outcome ac7_douglas_round_trip() {
  std::size_t bad = 0;
  double worst_match = 0.0;
  double worst_residual = 0.0;
  double worst_angle = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng = Rng::substream(0xAC7, k);
    const std::size_t n = 2 + k % 7;
    Matrix s = gaussian_matrix(n, n, rng);
    if (k % 4 == 1) s = gaussian_matrix(n, n - 1, rng) * gaussian_matrix(n - 1, n, rng);
    Matrix r0 = gaussian_matrix(n, n, rng);
    if (k % 4 == 2) r0 = gaussian_matrix(n, 1, rng) * gaussian_matrix(1, n, rng);
    const Matrix t = s * r0;
    const FactorizationResult f = douglas_factorization(t, s);
    const double nt = operator_norm(t);
    const double residual = operator_norm(s * f.factor - t) / nt;
    const double match = std::abs(f.factor_norm_sq - f.certified_infimum) / f.certified_infimum;
    const double oracle_match = std::abs(f.factor_norm_sq - oracle::loewner_infimum(t, s)) / f.factor_norm_sq;
    const bool kernels = subspaces_equal(kernel_basis(f.factor), kernel_basis(t));
    worst_match = std::max({worst_match, match, oracle_match});
    worst_residual = std::max(worst_residual, residual);
    worst_angle = std::max(worst_angle, f.range_angle);
    if (residual > kAc7ResidualTol || !kernels || !f.kernel_match || f.range_angle > kAc7AngleTol ||
        match > kAc7NormMatchTol || oracle_match > kAc7NormMatchTol) {
      ++bad;
    }
  }
  return {bad == 0, fmt("%zu failures; worst residual %.1e, range angle %.1e, |R|^2 vs infimum %.1e", bad,
                        worst_residual, worst_angle, worst_match)};
}

Outcome ac8_pseudo_inverse() {
  std::size_t bad = 0;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    Rng rng = Rng::substream(0xAC8, k);
    const std::size_t m = 1 + rng.uniform_int(0, 7);
    const std::size_t n = 1 + rng.uniform_int(0, 7);
    Matrix t;
    if (k % 2 == 0) {
      t = gaussian_matrix(m, n, rng);
    } else {
      const std::size_t r = rng.uniform_int(0, std::min(m, n));
      t = r == 0 ? Matrix(m, n) : gaussian_matrix(m, r, rng) * gaussian_matrix(r, n, rng);
    }
    const Matrix p = pseudo_inverse(t);
    const double nt = std::max(1.0, operator_norm(t));
    const double np = std::max(1.0, operator_norm(p));
    const Matrix tp = t * p;
    const Matrix pt = p * t;
    const double e = std::max({operator_norm(tp * t - t) / (nt * nt * np), operator_norm(pt * p - p) / (np * np * nt),
                               operator_norm(adjoint(tp) - tp) / (nt * np), operator_norm(adjoint(pt) - pt) / (nt * np)});
    worst = std::max(worst, e);
    if (e > kAc8IdentityTol) ++bad;
  }
  const double ex = max_abs_entry(pseudo_inverse(example_matrix()) - Matrix::from_rows({{1, 0}, {-1, 1}}));
  return {bad == 0 && ex <= kAc8ExampleTol,
          fmt("%zu failures over 500, worst scaled identity residual %.1e, example err %.1e", bad, worst, ex)};
}

Outcome ac9_determinism() {
  const std::vector<std::string> args{"sweep",   "--kind", "invertible", "--dim",    "4",         "--count", "100",
                                      "--seed", "7",      "--theorems", "all",      "--mode",    "corrected",
                                      "--json"};
  const Cli a = cli(args);
  const Cli b = cli(args);
  const auto doc = parse_report(a.out);
  return {a.code == kExitOk && b.code == kExitOk && !a.out.empty() && a.out == b.out,
          fmt("%zu bytes, identical %d, exit %d/%d, %zu failed", a.out.size(), a.out == b.out, a.code, b.code,
              doc.summary.failed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 example certificate", ac1_example_certificate},
      {"AC2 numerical radius vs oracle", ac2_numerical_radius},
      {"AC3 norm chain", ac3_norm_chain},
      {"AC4 vector lemmas", ac4_vector_lemmas},
      {"AC5 corrected theorem sweep", ac5_corrected_sweep},
      {"AC6 printed-form refutation", ac6_printed_refutation},
      {"AC7 Douglas round trip", ac7_douglas_round_trip},
      {"AC8 pseudo-inverse", ac8_pseudo_inverse},
      {"AC9 sweep determinism", ac9_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s %-32s %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
