#include "opineq/operator_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opineq/error.hpp"
#include "opineq/linalg.hpp"

namespace opineq {

namespace {

// Loewner slack used inside bisection. The pencil is normalized first, so
// this is relative; it only has to absorb eigensolver roundoff.
constexpr double kBisectionPsdTolerance = 1e-13;
constexpr int kMaxBisectionSteps = 200;

void require_square(const Matrix& t, const char* what) {
  if (!t.is_square()) throw Error(ErrorCode::NotSquare, std::string(what) + " needs a square matrix");
}

bool relatively_close(double a, double b, double rel) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

// Restriction Q* A Q, made exactly Hermitian.
Matrix compress(const Matrix& a, const Matrix& basis) {
  return hermitian_part(adjoint(basis) * a * basis);
}

// Kernel of T vs kernel of T*, read off one SVD of T.
struct KernelComparison {
  SingularValueDecomposition svd;
  bool equal = false;
};

KernelComparison compare_kernels(const Matrix& t, const Tolerances& tol) {
  KernelComparison k{svd(t, tol), false};
  const std::size_t n = t.rows();
  const std::size_t r = k.svd.numerical_rank;
  k.equal = subspaces_equal(k.svd.v.columns(r, n - r), k.svd.u.columns(r, n - r), tol);
  return k;
}

}  // namespace

double AlphaBetaCertificate::alpha() const { return std::sqrt(alpha_sq); }
double AlphaBetaCertificate::beta() const { return std::sqrt(beta_sq); }

double rayleigh_ratio(const Matrix& t, std::span<const Complex> x) {
  const double tx = norm_sq(t * x);
  if (tx == 0.0) throw Error(ErrorCode::BadParams, "Rayleigh ratio undefined on ker(T)");
  return norm_sq(adjoint(t) * x) / tx;
}

AlphaBetaCertificate tightest_alpha_beta(const Matrix& t, const Tolerances& tol) {
  require_square(t, "tightest_alpha_beta");
  const KernelComparison k = compare_kernels(t, tol);
  if (k.svd.singular_values.empty() || k.svd.singular_values[0] == 0.0) {
    throw Error(ErrorCode::ZeroOperator, "the zero operator has no (alpha, beta) certificate");
  }
  if (!k.equal) {
    throw Error(ErrorCode::KernelMismatch, "ker(T) != ker(T*): T is not (alpha, beta)-normal");
  }

  // With W = V_r Sigma_r^{-1}: |T W y| = |y| and |T* W y| = |M y| for M = T* W,
  // so the ratio extremes are the squared extreme singular values of M.
  const std::size_t n = t.rows();
  const std::size_t r = k.svd.numerical_rank;
  Matrix w = k.svd.v.columns(0, r);
  for (std::size_t j = 0; j < r; ++j) {
    const double inv = 1.0 / k.svd.singular_values[j];
    for (std::size_t i = 0; i < n; ++i) w(i, j) *= inv;
  }
  const auto m = svd(adjoint(t) * w, tol);

  AlphaBetaCertificate c;
  // The ratio has weighted mean 1 (trace TT* = trace T*T on ran T*), so the
  // extremes straddle 1; clamping only removes roundoff.
  c.beta_sq = std::max(1.0, m.singular_values.front() * m.singular_values.front());
  c.alpha_sq = std::min(1.0, m.singular_values[r - 1] * m.singular_values[r - 1]);
  c.maximizing_vector = normalized(w * m.v.column(0));
  c.minimizing_vector = normalized(w * m.v.column(r - 1));
  return c;
}

bool is_ab_normal(const Matrix& t, double alpha, double beta, const Tolerances& tol) {
  require_square(t, "is_ab_normal");
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 1.0 && std::isfinite(beta))) {
    throw Error(ErrorCode::BadParams, "need 0 <= alpha <= 1 <= beta");
  }
  const Matrix tts = outer_gram(t);
  const Matrix tst = gram(t);
  return is_psd(tts - (alpha * alpha) * tst, tol) && is_psd((beta * beta) * tst - tts, tol);
}

Matrix pseudo_inverse(const Matrix& t, const Tolerances& tol) {
  const auto d = svd(t, tol);
  Matrix out(t.cols(), t.rows());
  for (std::size_t k = 0; k < d.numerical_rank; ++k) {
    const double inv = 1.0 / d.singular_values[k];
    for (std::size_t i = 0; i < t.cols(); ++i) {
      const Complex vik = d.v(i, k) * inv;
      for (std::size_t j = 0; j < t.rows(); ++j) out(i, j) += vik * std::conj(d.u(j, k));
    }
  }
  return out;
}

double loewner_bisection(const Matrix& a, const Matrix& b, const Matrix& basis, const Tolerances& tol) {
  if (basis.cols() == 0) return 0.0;
  Matrix ar = compress(a, basis);
  Matrix br = compress(b, basis);
  const double a_scale = operator_norm(ar);
  const double b_scale = operator_norm(br);
  if (b_scale == 0.0) return 0.0;
  if (a_scale == 0.0) return std::numeric_limits<double>::infinity();
  ar *= 1.0 / a_scale;
  br *= 1.0 / b_scale;

  Tolerances tight = tol;
  tight.tol_psd = std::min(tol.tol_psd, kBisectionPsdTolerance);
  auto holds = [&](double mu) { return is_psd(mu * ar - br, tight); };

  double lo = 0.0;
  if (holds(lo)) return 0.0;
  const double a_min = hermitian_eigenvalues(ar, tol).front();
  double hi = a_min > 0.0 ? (1.0 + 1e-9) / a_min : 1.0;
  for (int k = 0; k < 2000 && !holds(hi); ++k) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  }
  for (int k = 0; k < kMaxBisectionSteps && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi * b_scale / a_scale;
}

MajorizationResult majorizes(const Matrix& t, const Matrix& s, const Tolerances& tol) {
  if (t.rows() != s.rows() || t.cols() != s.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "majorization needs T and S of the same shape");
  }
  const auto joint = svd(hstack(s, t), tol);
  const double threshold = joint.rank_threshold;
  const auto ds = svd(s, tol);
  const auto count_above = [&](const std::vector<double>& sv) {
    return static_cast<std::size_t>(
        std::count_if(sv.begin(), sv.end(), [&](double x) { return x > threshold; }));
  };
  const std::size_t rank_joint = count_above(joint.singular_values);
  const std::size_t rank_s = count_above(ds.singular_values);

  MajorizationResult out;
  out.range_contained = rank_joint == rank_s;
  if (!out.range_contained) {
    out.infimum = std::numeric_limits<double>::infinity();
    return out;
  }
  out.infimum = loewner_bisection(outer_gram(s), outer_gram(t), ds.u.columns(0, rank_s), tol);
  return out;
}

FactorizationResult douglas_factorization(const Matrix& t, const Matrix& s, const Tolerances& tol) {
  const MajorizationResult maj = majorizes(t, s, tol);
  if (!maj.range_contained) {
    throw Error(ErrorCode::NotMajorized, "range containment fails: ran(T) is not contained in ran(S)");
  }
  const Matrix ran_s_adj = range_basis(adjoint(s), tol);
  const Matrix ran_t_adj = range_basis(adjoint(t), tol);
  const Matrix r = projector(ran_s_adj) * (pseudo_inverse(s, tol) * t) * projector(ran_t_adj);

  FactorizationResult out;
  out.kind = "douglas";
  out.factor = r;
  out.residual = operator_norm(s * r - t);
  out.factor_norm = operator_norm(r);
  out.factor_norm_sq = out.factor_norm * out.factor_norm;
  out.certified_infimum = maj.infimum;
  out.constant_description = "inf{mu : TT* <= mu SS*}";
  out.norm_matches_constant = relatively_close(out.factor_norm, maj.infimum, kConstantMatchTolerance);
  out.norm_sq_matches_constant = relatively_close(out.factor_norm_sq, maj.infimum, kConstantMatchTolerance);
  out.inverse_norm_sq_matches_constant =
      out.factor_norm > 0.0 &&
      relatively_close(1.0 / out.factor_norm_sq, maj.infimum, kConstantMatchTolerance);

  const Matrix ker_r = kernel_basis(r, tol);
  const Matrix ker_t = kernel_basis(t, tol);
  out.kernel_match = subspaces_equal(ker_r, ker_t, tol);
  out.kernel_angle = ker_r.cols() == ker_t.cols()
                         ? std::max(containment_gap(ker_r, ker_t), containment_gap(ker_t, ker_r))
                         : 1.0;
  const Matrix ran_r = range_basis(r, tol);
  out.range_angle = containment_gap(ran_r, ran_s_adj);
  out.range_containment = subspace_contained(ran_r, ran_s_adj, tol);
  return out;
}

std::pair<FactorizationResult, FactorizationResult> construct_s1_s2(const Matrix& t, const Tolerances& tol) {
  const AlphaBetaCertificate cert = tightest_alpha_beta(t, tol);
  if (!(cert.alpha_sq > 0.0)) {
    throw Error(ErrorCode::AlphaZero, "alpha_opt = 0: no S2 with T = S2 T*");
  }
  const Matrix ts = adjoint(t);
  const Matrix ts_pinv = pseudo_inverse(ts, tol);
  // ran T = ran T* here, so one projector serves both sides.
  const Matrix ran_t = range_basis(t, tol);
  const Matrix p = projector(ran_t);
  const Matrix ker_t = kernel_basis(t, tol);
  const Matrix tts = outer_gram(t);
  const Matrix tst = gram(t);

  auto fill = [&](FactorizationResult& f, const Matrix& reconstruction) {
    f.residual = operator_norm(reconstruction - t);
    f.factor_norm = operator_norm(f.factor);
    f.factor_norm_sq = f.factor_norm * f.factor_norm;
    f.norm_matches_constant = relatively_close(f.factor_norm, f.certified_infimum, kConstantMatchTolerance);
    f.norm_sq_matches_constant =
        relatively_close(f.factor_norm_sq, f.certified_infimum, kConstantMatchTolerance);
    f.inverse_norm_sq_matches_constant =
        f.factor_norm > 0.0 &&
        relatively_close(1.0 / f.factor_norm_sq, f.certified_infimum, kConstantMatchTolerance);
    const Matrix ker_f = kernel_basis(f.factor, tol);
    f.kernel_match = subspaces_equal(ker_f, ker_t, tol);
    f.kernel_angle = ker_f.cols() == ker_t.cols()
                         ? std::max(containment_gap(ker_f, ker_t), containment_gap(ker_t, ker_f))
                         : 1.0;
    const Matrix ran_f = range_basis(f.factor, tol);
    f.range_angle = containment_gap(ran_f, ran_t);
    f.range_containment = subspace_contained(ran_f, ran_t, tol);
  };

  FactorizationResult s1;
  s1.kind = "s1";
  s1.factor = p * (ts_pinv * t) * p;
  s1.certified_infimum = loewner_bisection(tst, tts, ran_t, tol);
  s1.constant_description = "inf{mu : TT* <= mu T*T}";
  fill(s1, ts * s1.factor);

  FactorizationResult s2;
  s2.kind = "s2";
  s2.factor = p * (t * ts_pinv) * p;
  s2.certified_infimum = 1.0 / loewner_bisection(tts, tst, ran_t, tol);
  s2.constant_description = "sup{a : a T*T <= TT*}";
  fill(s2, s2.factor * ts);

  return {std::move(s1), std::move(s2)};
}

OperatorProfile profile(const Matrix& t, const Tolerances& tol) {
  require_square(t, "profile");
  OperatorProfile p;
  p.dim = t.rows();
  p.op_norm = operator_norm(t);
  p.numerical_radius = numerical_radius(t, tol);
  p.numerical_radius_of_square = numerical_radius(t * t, tol);

  const KernelComparison k = compare_kernels(t, tol);
  p.kernel_dim = t.rows() - k.svd.numerical_rank;
  p.kernels_equal = k.equal;
  p.is_ab_normal = k.equal;
  if (k.equal && k.svd.numerical_rank > 0) {
    const AlphaBetaCertificate c = tightest_alpha_beta(t, tol);
    p.alpha_sq = c.alpha_sq;
    p.beta_sq = c.beta_sq;
    p.alpha_opt = c.alpha();
    p.beta_opt = c.beta();
  }
  return p;
}

}  // namespace opineq
