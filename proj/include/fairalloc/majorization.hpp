#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fairalloc::majorization {

// Partial sums of x sorted nondecreasing: result[m-1] = sum of the m smallest
// entries. The Lorenz-curve ordinates of x.
std::vector<double> lorenz_partial_sums(std::span<const double> x);

// True iff x is majorized by y: equal totals and every nondecreasing-sorted
// prefix sum of x is >= the matching prefix sum of y, all within
// tol * max(1, |total|). x majorized by y reads "x is at least as even as y".
// Throws std::invalid_argument on length mismatch.
bool majorized_by(std::span<const double> x, std::span<const double> y,
                  double tol = 1e-9);

// Sum of theta over the entries of x. Throws std::domain_error if theta is
// undefined (non-finite) at some entry. Convex theta makes this order-
// preserving against majorization; concave theta order-reversing.
double schur_sum_value(std::span<const double> x,
                       const std::function<double(double)>& theta);

}  // namespace fairalloc::majorization
