#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace ousldp {

/// Thrown when a quadrature or root bracket cannot reach its target; the
/// message names the interval that was tried.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deterministic order-independent summation. The reduction tree depends only
/// on the length of the input, so totals are reproducible across worker
/// counts as long as every slot holds the same value.
double pairwise_sum(std::span<const double> values);

/// Adaptive Simpson quadrature of f over [lo, hi].
/// Stops when the local error estimate is below max(abs_tol, rel_tol*|I|);
/// throws NumericError if max_depth is exhausted anywhere.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol, double abs_tol = 0.0, int max_depth = 48,
                        int initial_panels = 8);

/// Golden-section minimisation of a unimodal f on [lo, hi] to x-tolerance tol.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10, int max_iter = 200);

/// Bisection for a root of f in [lo, hi]; requires a sign change.
/// Returns the midpoint once the bracket width is below x_tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 1e-12, int max_iter = 200);

}  // namespace ousldp
