#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "opineq/error.hpp"
#include "opineq/linalg.hpp"
#include "opineq/operator_analysis.hpp"

namespace opineq {

namespace {

constexpr std::size_t kGridPoints = 720;
constexpr double kBracketWidth = 1e-12;
constexpr std::size_t kMaxRefinedPeaks = 8;

Matrix rotated_real_part(const Matrix& t, double theta) {
  return hermitian_part(std::polar(1.0, theta) * t);
}

class SweepObjective {
 public:
  SweepObjective(const Matrix& t, const Tolerances& tol) : t_(t), tol_(tol) {}

  double operator()(double theta) const {
    return hermitian_eigenvalues(rotated_real_part(t_, theta), tol_).back();
  }

 private:
  const Matrix& t_;
  const Tolerances& tol_;
};

struct Peak {
  double theta;
  double value;
};

Peak golden_section_max(const SweepObjective& f, double lo, double hi, Peak seed) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  Peak best = seed;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > kBracketWidth) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
  }
  return best;
}

}  // namespace

NumericalRadiusResult numerical_radius_detail(const Matrix& t, const Tolerances& tol) {
  if (!t.is_square()) throw Error(ErrorCode::NotSquare, "numerical radius needs a square matrix");
  NumericalRadiusResult out;
  if (t.rows() == 0) return out;

  const SweepObjective f(t, tol);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(kGridPoints);
  std::vector<double> grid(kGridPoints);
  for (std::size_t k = 0; k < kGridPoints; ++k) grid[k] = f(step * static_cast<double>(k));

  const double grid_best = *std::max_element(grid.begin(), grid.end());
  const double margin = 1e-4 * std::max(std::abs(grid_best), frobenius_norm(t)) + 1e-300;

  std::vector<Peak> peaks;
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    const double prev = grid[(k + kGridPoints - 1) % kGridPoints];
    const double next = grid[(k + 1) % kGridPoints];
    if (grid[k] >= prev && grid[k] >= next && grid[k] >= grid_best - margin) {
      peaks.push_back({step * static_cast<double>(k), grid[k]});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (peaks.size() > kMaxRefinedPeaks) peaks.resize(kMaxRefinedPeaks);

  Peak best{0.0, grid[0]};
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    if (grid[k] > best.value) best = {step * static_cast<double>(k), grid[k]};
  }
  for (const Peak& p : peaks) {
    const Peak refined = golden_section_max(f, p.theta - step, p.theta + step, p);
    if (refined.value > best.value) best = refined;
  }

  out.theta = std::remainder(best.theta, 2.0 * std::numbers::pi);
  if (out.theta < 0.0) out.theta += 2.0 * std::numbers::pi;
  const auto eig = hermitian_eig(rotated_real_part(t, best.theta), tol);
  out.value = std::max(0.0, eig.eigenvalues.back());
  out.maximizer = eig.eigenvectors.column(t.rows() - 1);
  return out;
}

double numerical_radius(const Matrix& t, const Tolerances& tol) {
  return numerical_radius_detail(t, tol).value;
}

}  // namespace opineq
