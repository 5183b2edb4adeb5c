#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opineq/matrix.hpp"

namespace opineq {

/// SplitMix64 (Steele, Lea, Flood 2014). State transition:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
/// uniform() maps the top 53 bits to [0, 1); gaussian() is Box-Muller on
/// two successive uniforms, using the cosine branch only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent substream for item `index` of a stream seeded with `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  double gaussian();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_gaussian();

 private:
  std::uint64_t state_;
};

enum class EnsembleKind {
  GaussianDense,
  Normal,
  Unitary,
  Invertible,
  RankDeficientEqualKernels,
  Diagonal,
};

std::string_view to_string(EnsembleKind kind) noexcept;
/// Accepts the enumerator names and the kebab/lower-case CLI spellings
/// (e.g. "invertible", "rank-deficient").
std::optional<EnsembleKind> parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GaussianDense;
  std::size_t dim = 2;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;

  /// Throws Error(BadSpec).
  void validate() const;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

/// Item i is drawn from Rng::substream(spec.seed, i), so the sequence is a
/// pure function of the spec and items can be generated independently.
std::vector<Matrix> generate(const EnsembleSpec& spec);
Matrix generate_one(const EnsembleSpec& spec, std::size_t index);

std::vector<Vector> random_unit_vectors(std::size_t dim, std::size_t count, std::uint64_t seed);

// Building blocks, exposed for tests and for callers composing ensembles.
Vector random_unit_vector(std::size_t dim, Rng& rng);
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
/// Gram-Schmidt QR of a Gaussian matrix; R has a positive real diagonal,
/// which is the phase fix that makes the distribution Haar.
Matrix random_unitary(std::size_t n, Rng& rng);
/// Gaussian matrix resampled until sigma_min > 1e-3 * sigma_max.
Matrix random_invertible(std::size_t n, Rng& rng);

}  // namespace opineq
