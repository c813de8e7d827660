#include "fairalloc/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairalloc::majorization {

std::vector<double> lorenz_partial_sums(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  double running = 0.0;
  for (double& v : sorted) {
    running += v;
    v = running;
  }
  return sorted;
}

bool majorized_by(std::span<const double> x, std::span<const double> y, double tol) {
  if (x.size() != y.size())
    throw std::invalid_argument("majorized_by: vectors must have equal length");
  if (x.empty()) return true;
  const std::vector<double> px = lorenz_partial_sums(x);
  const std::vector<double> py = lorenz_partial_sums(y);
  const double scale = std::max(1.0, std::abs(px.back()));
  if (std::abs(px.back() - py.back()) > tol * scale) return false;
  for (std::size_t m = 0; m + 1 < px.size(); ++m)
    if (px[m] < py[m] - tol * scale) return false;
  return true;
}

double schur_sum_value(std::span<const double> x,
                       const std::function<double(double)>& theta) {
  if (!theta) throw std::invalid_argument("schur_sum_value: empty callback");
  double total = 0.0;
  for (double v : x) {
    const double t = theta(v);
    if (!std::isfinite(t))
      throw std::domain_error("schur_sum_value: theta is undefined at an entry");
    total += t;
  }
  return total;
}

}  // namespace fairalloc::majorization
