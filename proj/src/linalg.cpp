#include "opineq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "opineq/error.hpp"

namespace opineq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;

// Unitary J = diag(1, phase) * [[c, s], [-s, c]] that diagonalizes the
// Hermitian 2x2 block [[app, apq], [conj(apq), aqq]] under J* M J.
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase{1.0, 0.0};  // conj(apq) / |apq|

  Complex jpp() const { return c; }
  Complex jpq() const { return s; }
  Complex jqp() const { return -s * phase; }
  Complex jqq() const { return c * phase; }
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  Rotation r;
  const double g = std::abs(apq);
  if (g == 0.0) return r;
  r.phase = std::conj(apq) / g;
  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  r.c = 1.0 / std::hypot(1.0, t);
  r.s = t * r.c;
  return r;
}

// Columns p, q of m <- m J.
void rotate_columns(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex jpp = r.jpp(), jpq = r.jpq(), jqp = r.jqp(), jqq = r.jqq();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * jpp + mq * jqp;
    m(k, q) = mp * jpq + mq * jqq;
  }
}

// Rows p, q of m <- J* m.
void rotate_rows(Matrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex hpp = std::conj(r.jpp()), hpq = std::conj(r.jqp());
  const Complex hqp = std::conj(r.jpq()), hqq = std::conj(r.jqq());
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = hpp * mp + hpq * mq;
    m(q, k) = hqp * mp + hqq * mq;
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

Matrix checked_symmetrize(const Matrix& a, const Tolerances& tol) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "Hermitian eigensolver needs a square matrix");
  const double scale = frobenius_norm(a);
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) asym += (i == j ? 1.0 : 2.0) * std::norm(a(i, j) - std::conj(a(j, i)));
  }
  if (std::sqrt(asym) > tol.tol_eig * scale) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tol_eig");
  }
  return hermitian_part(a);
}

// Diagonalizes the Hermitian matrix a in place; accumulates into v when given.
void jacobi_diagonalize(Matrix& a, Matrix* v, const Tolerances& tol) {
  const std::size_t n = a.rows();
  const double scale = frobenius_norm(a);
  if (n < 2 || scale == 0.0) return;
  const double target = std::max(tol.tol_eig, 4.0 * kEps) * scale;

  bool polished = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      // One extra sweep after the threshold is met drives the residual to roundoff.
      if (polished) return;
      polished = true;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (apq == Complex{}) continue;
        const Rotation r = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) rotate_columns(*v, p, q, r);
      }
    }
  }
  if (off_diagonal_norm(a) <= target) return;
  throw Error(ErrorCode::NoConvergence, "Jacobi eigensolver did not converge in 100 sweeps");
}

std::vector<std::size_t> order_by(const std::vector<double>& keys, bool ascending) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return ascending ? keys[i] < keys[j] : keys[i] > keys[j];
  });
  return idx;
}

// One-sided Jacobi on the columns of g (rows >= cols). On return the
// columns of g are mutually orthogonal and g_in * v = g.
void one_sided_jacobi(Matrix& g, Matrix* v) {
  const std::size_t m = g.rows();
  const std::size_t n = g.cols();
  const double scale = frobenius_norm(g);
  if (n < 2 || scale == 0.0) return;
  const double rot_tol = std::max<double>(static_cast<double>(m), 4.0) * kEps;
  const double negligible = static_cast<double>(n) * kEps * scale;

  std::vector<double> col_sq(n);
  auto column_norm_sq = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::norm(g(k, j));
    return s;
  };
  for (std::size_t j = 0; j < n; ++j) col_sq[j] = column_norm_sq(j);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = col_sq[p];
        const double aqq = col_sq[q];
        if (std::sqrt(app) <= negligible || std::sqrt(aqq) <= negligible) continue;
        Complex apq{};
        for (std::size_t k = 0; k < m; ++k) apq += std::conj(g(k, p)) * g(k, q);
        if (std::abs(apq) <= rot_tol * std::sqrt(app * aqq)) continue;
        const Rotation r = jacobi_rotation(app, aqq, apq);
        rotate_columns(g, p, q, r);
        if (v != nullptr) rotate_columns(*v, p, q, r);
        col_sq[p] = column_norm_sq(p);
        col_sq[q] = column_norm_sq(q);
        rotated = true;
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorCode::NoConvergence, "one-sided Jacobi SVD did not converge in 100 sweeps");
}

// Extends the orthonormal columns of `basis` to a full unitary of size basis.rows().
Matrix complete_basis(const Matrix& basis) {
  const std::size_t m = basis.rows();
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < basis.cols(); ++j) cols.push_back(basis.column(j));
  auto residual = [&](std::size_t i) {
    Vector e(m);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) {
        const Complex h = inner(e, c);
        for (std::size_t k = 0; k < m; ++k) e[k] -= h * c[k];
      }
    }
    return e;
  };
  while (cols.size() < m) {
    Vector best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      Vector e = residual(i);
      const double nr = norm(e);
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(e);
      }
    }
    cols.push_back(scale(1.0 / best_norm, best));
  }
  return Matrix::from_columns(m, cols);
}

SingularValueDecomposition svd_tall(const Matrix& a, const Tolerances& tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix g = a;
  Matrix v = Matrix::identity(n);
  one_sided_jacobi(g, &v);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm(g.column(j));
  const auto order = order_by(norms, false);
  const double sigma_max = n == 0 ? 0.0 : norms[order[0]];
  const double negligible = static_cast<double>(n) * kEps * frobenius_norm(a);

  SingularValueDecomposition out;
  out.v = Matrix(n, n);
  std::vector<Vector> ucols;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.v.set_column(k, v.column(j));
    if (k < std::min(m, n)) out.singular_values.push_back(norms[j]);
    if (norms[j] > negligible && norms[j] > 0.0) ucols.push_back(scale(1.0 / norms[j], g.column(j)));
  }
  out.u = complete_basis(Matrix::from_columns(m, ucols));
  out.rank_threshold = rank_threshold(sigma_max, m, n, tol);
  out.numerical_rank = static_cast<std::size_t>(
      std::count_if(out.singular_values.begin(), out.singular_values.end(),
                    [&](double s) { return s > out.rank_threshold; }));
  return out;
}

}  // namespace

HermitianEigenDecomposition hermitian_eig(const Matrix& a, const Tolerances& tol) {
  Matrix work = checked_symmetrize(a, tol);
  const std::size_t n = work.rows();
  Matrix v = Matrix::identity(n);
  jacobi_diagonalize(work, &v, tol);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = work(i, i).real();
  const auto order = order_by(diag, true);
  HermitianEigenDecomposition out;
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues.push_back(diag[order[k]]);
    out.eigenvectors.set_column(k, v.column(order[k]));
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const Matrix& a, const Tolerances& tol) {
  Matrix work = checked_symmetrize(a, tol);
  jacobi_diagonalize(work, nullptr, tol);
  std::vector<double> ev(work.rows());
  for (std::size_t i = 0; i < work.rows(); ++i) ev[i] = work(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

SingularValueDecomposition svd(const Matrix& a, const Tolerances& tol) {
  if (a.cols() <= a.rows()) return svd_tall(a, tol);
  SingularValueDecomposition t = svd_tall(adjoint(a), tol);
  std::swap(t.u, t.v);
  t.rank_threshold = rank_threshold(t.singular_values.empty() ? 0.0 : t.singular_values[0],
                                    a.rows(), a.cols(), tol);
  return t;
}

double rank_threshold(double sigma_max, std::size_t rows, std::size_t cols, const Tolerances& tol) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * tol.tol_rank_factor;
}

std::size_t numerical_rank(const Matrix& a, const Tolerances& tol) {
  return svd(a, tol).numerical_rank;
}

double operator_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  Matrix g = a.cols() <= a.rows() ? a : adjoint(a);
  one_sided_jacobi(g, nullptr);
  double best = 0.0;
  for (std::size_t j = 0; j < g.cols(); ++j) best = std::max(best, norm(g.column(j)));
  return best;
}

bool is_psd(const Matrix& a, const Tolerances& tol) {
  const auto ev = hermitian_eigenvalues(a, tol);
  if (ev.empty()) return true;
  const double spectral_norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return ev.front() >= -tol.tol_psd * std::max(1.0, spectral_norm);
}

Matrix range_basis(const Matrix& a, const Tolerances& tol) {
  const auto d = svd(a, tol);
  return d.u.columns(0, d.numerical_rank);
}

Matrix kernel_basis(const Matrix& a, const Tolerances& tol) {
  const auto d = svd(a, tol);
  return d.v.columns(d.numerical_rank, a.cols() - d.numerical_rank);
}

double containment_gap(const Matrix& inner_basis, const Matrix& outer_basis) {
  if (inner_basis.cols() == 0) return 0.0;
  if (outer_basis.cols() == 0) return 1.0;
  // (I - Q Q*) B
  const Matrix residual = inner_basis - outer_basis * (adjoint(outer_basis) * inner_basis);
  return std::min(1.0, operator_norm(residual));
}

bool subspaces_equal(const Matrix& b1, const Matrix& b2, const Tolerances& tol) {
  if (b1.rows() != b2.rows()) throw Error(ErrorCode::ShapeMismatch, "subspaces live in different spaces");
  if (b1.cols() != b2.cols()) return false;
  return containment_gap(b2, b1) <= tol.angle_threshold() &&
         containment_gap(b1, b2) <= tol.angle_threshold();
}

bool subspace_contained(const Matrix& inner_basis, const Matrix& outer_basis, const Tolerances& tol) {
  if (inner_basis.rows() != outer_basis.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "subspaces live in different spaces");
  }
  if (inner_basis.cols() > outer_basis.cols()) return false;
  return containment_gap(inner_basis, outer_basis) <= tol.angle_threshold();
}

Matrix projector(const Matrix& basis) { return basis * adjoint(basis); }

}  // namespace opineq
