#include "opineq/generators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "opineq/error.hpp"
#include "opineq/linalg.hpp"

namespace opineq {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr int kMaxResample = 1000;

Matrix random_diagonal(std::size_t n, Rng& rng) {
  Vector d(n);
  for (auto& z : d) z = rng.complex_gaussian();
  return Matrix::diagonal(d);
}

}  // namespace

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL)));
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next_u64();
  return lo + next_u64() % span;
}

double Rng::gaussian() {
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::GaussianDense: return "GaussianDense";
    case EnsembleKind::Normal: return "Normal";
    case EnsembleKind::Unitary: return "Unitary";
    case EnsembleKind::Invertible: return "Invertible";
    case EnsembleKind::RankDeficientEqualKernels: return "RankDeficientEqualKernels";
    case EnsembleKind::Diagonal: return "Diagonal";
  }
  return "Unknown";
}

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "gaussiandense" || key == "gaussian") return EnsembleKind::GaussianDense;
  if (key == "normal") return EnsembleKind::Normal;
  if (key == "unitary") return EnsembleKind::Unitary;
  if (key == "invertible") return EnsembleKind::Invertible;
  if (key == "rankdeficientequalkernels" || key == "rankdeficient") {
    return EnsembleKind::RankDeficientEqualKernels;
  }
  if (key == "diagonal") return EnsembleKind::Diagonal;
  return std::nullopt;
}

void EnsembleSpec::validate() const {
  if (dim < 1) throw Error(ErrorCode::BadSpec, "ensemble dim must be >= 1");
  if (count < 1) throw Error(ErrorCode::BadSpec, "ensemble count must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::BadSpec, "ensemble scale must be finite and positive");
  }
  if (kind == EnsembleKind::RankDeficientEqualKernels && dim < 2) {
    throw Error(ErrorCode::BadSpec, "RankDeficientEqualKernels needs dim >= 2");
  }
}

Vector random_unit_vector(std::size_t dim, Rng& rng) {
  for (;;) {
    Vector v(dim);
    for (auto& z : v) z = rng.complex_gaussian();
    const double n = norm(v);
    if (n > 1e-150) return scale(1.0 / n, v);
  }
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (auto& z : m.entries()) z = rng.complex_gaussian();
  return m;
}

Matrix random_unitary(std::size_t n, Rng& rng) {
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    const Matrix g = gaussian_matrix(n, n, rng);
    std::vector<Vector> q;
    bool degenerate = false;
    for (std::size_t j = 0; j < n && !degenerate; ++j) {
      Vector col = g.column(j);
      const double original = norm(col);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& prev : q) {
          const Complex h = inner(col, prev);
          for (std::size_t k = 0; k < n; ++k) col[k] -= h * prev[k];
        }
      }
      const double r = norm(col);
      if (r <= 1e-8 * original) {
        degenerate = true;
      } else {
        q.push_back(scale(1.0 / r, col));
      }
    }
    if (!degenerate) return Matrix::from_columns(n, q);
  }
  throw Error(ErrorCode::BadSpec, "could not draw a unitary matrix");
}

Matrix random_invertible(std::size_t n, Rng& rng) {
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    Matrix g = gaussian_matrix(n, n, rng);
    const auto s = svd(g).singular_values;
    if (s.back() > 1e-3 * s.front()) return g;
  }
  throw Error(ErrorCode::BadSpec, "could not draw an invertible matrix");
}

Matrix generate_one(const EnsembleSpec& spec, std::size_t index) {
  spec.validate();
  Rng rng = Rng::substream(spec.seed, index);
  const std::size_t n = spec.dim;
  Matrix t;
  switch (spec.kind) {
    case EnsembleKind::GaussianDense:
      t = gaussian_matrix(n, n, rng);
      break;
    case EnsembleKind::Normal: {
      const Matrix u = random_unitary(n, rng);
      t = u * random_diagonal(n, rng) * adjoint(u);
      break;
    }
    case EnsembleKind::Unitary:
      t = random_unitary(n, rng);
      break;
    case EnsembleKind::Invertible:
      t = random_invertible(n, rng);
      break;
    case EnsembleKind::RankDeficientEqualKernels: {
      const std::size_t rank = rng.uniform_int(1, n - 1);
      const Matrix u = random_unitary(n, rng);
      const Matrix c = random_invertible(rank, rng);
      Matrix block(n, n);
      for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < rank; ++j) block(i, j) = c(i, j);
      }
      t = u * block * adjoint(u);
      break;
    }
    case EnsembleKind::Diagonal:
      t = random_diagonal(n, rng);
      break;
  }
  if (spec.scale != 1.0) t *= spec.scale;
  return t;
}

std::vector<Matrix> generate(const EnsembleSpec& spec) {
  spec.validate();
  std::vector<Matrix> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(generate_one(spec, i));
  return out;
}

std::vector<Vector> random_unit_vectors(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::BadParams, "random_unit_vectors needs dim >= 1");
  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_unit_vector(dim, rng));
  return out;
}

}  // namespace opineq
