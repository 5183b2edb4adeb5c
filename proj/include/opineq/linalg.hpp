#pragma once

#include <cstddef>
#include <vector>

#include "opineq/matrix.hpp"
#include "opineq/tolerances.hpp"

namespace opineq {

struct HermitianEigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column k belongs to eigenvalues[k]
};

/// Full SVD a = U diag(sigma) V*. U is rows x rows and V is cols x cols,
/// both unitary; singular_values has min(rows, cols) entries, descending.
struct SingularValueDecomposition {
  Matrix u;
  std::vector<double> singular_values;
  Matrix v;
  std::size_t numerical_rank = 0;
  double rank_threshold = 0.0;
};

/// Cyclic complex Jacobi. The input is checked for Hermitian symmetry
/// (|a - a*|_F <= tol_eig * |a|_F) and then symmetrized.
/// Throws NotSquare, NotHermitian, NoConvergence (100 sweeps).
HermitianEigenDecomposition hermitian_eig(const Matrix& a, const Tolerances& tol = {});

/// Eigenvalues only, ascending. Same contract as hermitian_eig.
std::vector<double> hermitian_eigenvalues(const Matrix& a, const Tolerances& tol = {});

/// One-sided (Hestenes) Jacobi: rotations that diagonalize a* a are applied
/// to the columns of a, so singular values keep full relative accuracy.
/// Throws NoConvergence.
SingularValueDecomposition svd(const Matrix& a, const Tolerances& tol = {});

/// max(rows, cols) * sigma_max * tol_rank_factor.
double rank_threshold(double sigma_max, std::size_t rows, std::size_t cols, const Tolerances& tol);

std::size_t numerical_rank(const Matrix& a, const Tolerances& tol = {});

/// Largest singular value. Zero-sized matrices have norm 0.
double operator_norm(const Matrix& a);

/// lambda_min(a) >= -tol_psd * max(1, |a|). Throws NotSquare, NotHermitian.
bool is_psd(const Matrix& a, const Tolerances& tol = {});

/// Orthonormal basis of ran(a) (rows x rank).
Matrix range_basis(const Matrix& a, const Tolerances& tol = {});
/// Orthonormal basis of ker(a) (cols x (cols - rank)).
Matrix kernel_basis(const Matrix& a, const Tolerances& tol = {});

/// Sine of the largest angle between span(inner) and span(outer), i.e.
/// |(I - P_outer) inner|. Both arguments must have orthonormal columns.
double containment_gap(const Matrix& inner, const Matrix& outer);

/// Same dimension and largest principal angle <= tol.angle_threshold().
bool subspaces_equal(const Matrix& b1, const Matrix& b2, const Tolerances& tol = {});

/// span(inner) is contained in span(outer) up to tol.angle_threshold().
bool subspace_contained(const Matrix& inner, const Matrix& outer, const Tolerances& tol = {});

/// Orthogonal projector onto the span of an orthonormal basis.
Matrix projector(const Matrix& basis);

}  // namespace opineq
