#include <bit>
#include <cmath>

#include "doctest.h"

#include "opineq/error.hpp"
#include "opineq/generators.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/linalg.hpp"
#include "test_util.hpp"

using namespace opineq;
using testutil::example_matrix;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an opineq::Error");
  return ErrorCode::Parse;
}

InequalityParams with_p(double p) {
  InequalityParams out;
  out.p = p;
  return out;
}

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("id names round trip") {
  for (TheoremId id : kAllTheorems) CHECK(parse_theorem_id(to_string(id)) == id);
  for (LemmaId id : kAllLemmas) CHECK(parse_lemma_id(to_string(id)) == id);
  CHECK(parse_theorem_id("parallelogram-power") == TheoremId::PARALLELOGRAM_POWER);
  CHECK(parse_mode("Corrected") == Mode::Corrected);
  CHECK_FALSE(parse_theorem_id("nope").has_value());
  CHECK_FALSE(parse_mode("both").has_value());
}

TEST_CASE("BUZANO_RADIUS at the identity is an equality") {
  const auto rep = verify_theorem(TheoremId::BUZANO_RADIUS, Matrix::identity(2), {}, Mode::Corrected);
  CHECK(std::abs(rep.lhs - 1.0) < 1e-12);
  CHECK(std::abs(rep.rhs - 1.0) < 1e-12);
  CHECK(std::abs(rep.slack) < 1e-12);
  CHECK(rep.passed);
}

TEST_CASE("PARALLELOGRAM_POWER printed fails at the identity") {
  const auto rep = verify_theorem(TheoremId::PARALLELOGRAM_POWER, Matrix::identity(2), with_p(2), Mode::Printed);
  CHECK(std::abs(rep.lhs - 4.0) < 1e-12);
  CHECK(std::abs(rep.rhs - 2.0) < 1e-12);
  CHECK_FALSE(rep.passed);
  REQUIRE(rep.witness.has_value());
  CHECK(std::abs(norm(*rep.witness) - 1.0) < 1e-12);

  const auto fixed =
      verify_theorem(TheoremId::PARALLELOGRAM_POWER, Matrix::identity(2), with_p(2), Mode::Corrected);
  CHECK(std::abs(fixed.lhs - 4.0) < 1e-12);
  CHECK(std::abs(fixed.rhs - 4.0) < 1e-12);
  CHECK(std::abs(fixed.slack) < 1e-12);
  CHECK(fixed.passed);
  CHECK_FALSE(fixed.witness.has_value());
}

TEST_CASE("SCHWARZ_REV_LIN on the example matrix") {
  const auto rep = verify_theorem(TheoremId::SCHWARZ_REV_LIN, example_matrix(), {}, Mode::Corrected);
  // r = |T* - T| = |[[0,1],[-1,0]]| = 1
  REQUIRE(rep.params.r.has_value());
  CHECK(std::abs(*rep.params.r - 1.0) < 1e-12);
  CHECK(std::abs(rep.lhs - std::sqrt(testutil::kAlphaSq) * testutil::kBetaSq) < 1e-10);
  CHECK(std::abs(rep.rhs - 2.5) < 1e-10);
  CHECK(rep.passed);
  CHECK(rep.preconditions_met);
}

TEST_CASE("QUAD_REVERSE has a non-positive lhs") {
  for (Complex l : {Complex(1, 0), Complex(0, 1), Complex(2, 0)}) {
    InequalityParams p;
    p.lambda = l;
    const auto rep = verify_theorem(TheoremId::QUAD_REVERSE, example_matrix(), p, Mode::Corrected);
    CHECK(rep.lhs <= 0.0);
    CHECK(rep.passed);
  }
}

TEST_CASE("theorem parameter domains") {
  const Matrix t = example_matrix();
  InequalityParams p;
  p.r = -0.5;
  CHECK(code_of([&] { verify_theorem(TheoremId::GRC_POWER, t, p, Mode::Corrected); }) == ErrorCode::BadParams);
  p = {};
  p.lambda = 0.0;
  CHECK(code_of([&] { verify_theorem(TheoremId::QUAD_REVERSE, t, p, Mode::Corrected); }) == ErrorCode::BadParams);
  CHECK(code_of([&] { verify_theorem(TheoremId::SCHWARZ_REV_LIN, t, p, Mode::Corrected); }) ==
        ErrorCode::BadParams);
  CHECK(code_of([&] { verify_theorem(TheoremId::PARALLELOGRAM_POWER, t, with_p(1.5), Mode::Corrected); }) ==
        ErrorCode::BadParams);
  CHECK(code_of([&] { verify_theorem(TheoremId::HALF_SUM_NORM, t, with_p(1.0), Mode::Corrected); }) ==
        ErrorCode::BadParams);
  CHECK(code_of([&] { verify_theorem(TheoremId::DS_LOWER, t, with_p(2.0), Mode::Corrected); }) ==
        ErrorCode::BadParams);
  CHECK(code_of([&] { verify_theorem(TheoremId::BUZANO_RADIUS, Matrix(2, 3), {}, Mode::Corrected); }) ==
        ErrorCode::NotSquare);
  CHECK(code_of([&] {
          verify_theorem(TheoremId::BUZANO_RADIUS, Matrix::from_rows({{0, 1}, {0, 0}}), {}, Mode::Corrected);
        }) == ErrorCode::KernelMismatch);
  CHECK(code_of([&] { verify_theorem(TheoremId::BUZANO_RADIUS, Matrix(2, 2), {}, Mode::Corrected); }) ==
        ErrorCode::ZeroOperator);
}

TEST_CASE("SCHWARZ_REV_LIN with r below |lambda T* - T| is vacuous") {
  InequalityParams p;
  p.r = 0.1;
  const auto rep = verify_theorem(TheoremId::SCHWARZ_REV_LIN, example_matrix(), p, Mode::Corrected);
  CHECK_FALSE(rep.preconditions_met);
  CHECK(rep.passed);
  CHECK(rep.vacuous());
}

TEST_CASE("mode coincidence outside the three corrected theorems") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix t = generate_one({EnsembleKind::Invertible, 2 + seed % 4, 1, seed, 1.0}, 0);
    const OperatorContext ctx(t, {}, 500);
    for (TheoremId id : kAllTheorems) {
      if (id == TheoremId::PARALLELOGRAM_POWER || id == TheoremId::DS_LOWER || id == TheoremId::GRC_POWER) continue;
      for (const auto& p : default_params(id)) {
        auto printed = verify_theorem(id, ctx, p, Mode::Printed);
        const auto corrected = verify_theorem(id, ctx, p, Mode::Corrected);
        printed.mode = Mode::Corrected;
        CHECK(printed == corrected);
      }
    }
  }
}

TEST_CASE("reports recompute bit for bit") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Matrix t = generate_one({EnsembleKind::RankDeficientEqualKernels, 3 + seed % 3, 1, seed, 1.0}, 0);
    for (const auto& check : default_checks(kAllTheorems, seed % 2 ? Mode::Printed : Mode::Corrected)) {
      const auto a = verify_theorem(check.id, t, check.params, check.mode);
      const auto b = verify_theorem(check.id, t, a.params, check.mode);
      CHECK(a == b);
      CHECK(std::bit_cast<std::uint64_t>(a.lhs) == std::bit_cast<std::uint64_t>(b.lhs));
      CHECK(std::bit_cast<std::uint64_t>(a.rhs) == std::bit_cast<std::uint64_t>(b.rhs));
    }
  }
}

TEST_CASE("witness soundness") {
  std::size_t witnesses = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix t = seed == 0 ? Matrix::identity(2)
                               : generate_one({EnsembleKind::Invertible, 2 + seed % 4, 1, seed, 1.0}, 0);
    const OperatorContext ctx(t, {}, 2000);
    const double tol_slack = ctx.tolerances().tol_slack;
    for (const auto& check : default_checks(kAllTheorems, Mode::Printed)) {
      const auto rep = verify_theorem(check.id, ctx, check.params, check.mode);
      if (!rep.witness) continue;
      ++witnesses;
      CHECK_FALSE(rep.passed);
      CHECK(std::abs(norm(*rep.witness) - 1.0) < 1e-12);
      const auto v = pointwise(check.id, ctx, rep.params, check.mode, *rep.witness);
      REQUIRE(v.has_value());
      CHECK(v->rhs - v->lhs < -tol_slack);
      CHECK(std::abs((v->rhs - v->lhs) - (*rep.witness_rhs - *rep.witness_lhs)) <= 2 * tol_slack);
    }
  }
  CHECK(witnesses > 0);
}

TEST_CASE("pointwise forms bound the operator forms in corrected mode") {
  const Matrix t = example_matrix();
  const OperatorContext ctx(t, {}, 2000);
  for (const auto& check : default_checks(kAllTheorems, Mode::Corrected)) {
    const auto rep = verify_theorem(check.id, ctx, check.params, check.mode);
    CHECK(rep.passed);
    if (!rep.preconditions_met) continue;
    for (const auto& s : ctx.samples()) {
      const auto v = pointwise(check.id, ctx, rep.params, check.mode, s.x);
      if (!v) continue;
      CHECK(v->rhs - v->lhs >= -1e-8 * std::max(1.0, v->lhs));
    }
  }
}

TEST_CASE("corrected sweep over invertible operators") {
  const auto res = sweep(EnsembleSpec{EnsembleKind::Invertible, 4, 20, 7, 1.0}, default_checks(kAllTheorems, Mode::Corrected));
  CHECK(res.summary.failed == 0);
  CHECK(res.reports.size() == 20 * default_checks(kAllTheorems, Mode::Corrected).size());
  for (std::size_t i = 1; i < res.reports.size(); ++i) {
    CHECK(*res.reports[i - 1].operator_index <= *res.reports[i].operator_index);
  }
}

TEST_CASE("sweep examples") {
  auto res = sweep(EnsembleSpec{EnsembleKind::Unitary, 3, 10, 1, 1.0},
                   {{TheoremId::BUZANO_RADIUS, {}, Mode::Corrected}});
  CHECK(res.summary.passed == 10);
  CHECK(res.summary.failed == 0);

  res = sweep(std::vector<Matrix>{Matrix::identity(2)}, {{TheoremId::PARALLELOGRAM_POWER, with_p(2), Mode::Printed}});
  CHECK(res.summary.failed == 1);

  res = sweep(std::vector<Matrix>{Matrix::from_rows({{0, 1}, {0, 0}}), Matrix::identity(2)},
              {{TheoremId::BUZANO_RADIUS, {}, Mode::Corrected}});
  REQUIRE(res.reports.size() == 2);
  CHECK(res.reports[0].error == ErrorCode::KernelMismatch);
  CHECK_FALSE(res.reports[0].passed);
  CHECK(res.reports[1].passed);
  CHECK(res.summary == Summary{1, 1, 0});

  CHECK(code_of([] { sweep(EnsembleSpec{EnsembleKind::Invertible, 2, 0, 0, 1.0}, {}); }) == ErrorCode::BadSpec);
}

TEST_CASE("sweep is deterministic") {
  const EnsembleSpec spec{EnsembleKind::GaussianDense, 3, 5, 99, 1.0};
  const auto checks = default_checks(kAllTheorems, Mode::Printed);
  const auto a = sweep(spec, checks);
  const auto b = sweep(spec, checks);
  CHECK(a.reports == b.reports);
  CHECK(a.summary == b.summary);
}

}  // TEST_SUITE
