#pragma once

#include <vector>

#include "ousldp/model.hpp"

namespace ousldp {

/// Discretized Wiener-chaos decomposition of
///   Z_T(a,b) = a int_0^T (X - Xbar) dX + b S_T
///            = E[Z_T] + sum_k alpha_k (eps_k^2 - 1) + sum_k beta_k eps_k
/// with i.i.d. standard normal eps_k. The alpha_k are the eigenvalues of the
/// quadratic form of the centered path (trapezoid weights included) taken in
/// the whitened coordinates of the exact grid covariance; beta_k are the
/// linear coefficients rotated into the same eigenbasis.
struct ChaosDecomposition {
    double mean;                 ///< E[Z_T(a,b)]
    std::vector<double> alphas;  ///< descending |alpha|
    std::vector<double> betas;   ///< aligned with alphas
    SimGrid grid;
    double a;
    double b;

    double horizon() const { return grid.horizon; }
    double max_abs_alpha() const;
    double sum_beta_sq() const;
};

/// Builds the decomposition on the given grid. Defined for any finite (a,b):
/// the quadratic functional always has a spectral decomposition; membership
/// of (a,b) in D_L only governs whether exp(Z_T) is integrable, which
/// series_cgf re-checks through its convergence radius. The linear chaos is
/// identically zero when gamma == 0, in which case no eigenvectors are
/// computed. n_steps >= 500 recommended for limit checks.
ChaosDecomposition decompose(const ModelParams& params, double a, double b,
                             const SimGrid& grid);

/// Series evaluation of L_T(x a, x b) from the decomposition of Z_T(a,b):
///   (x E[Z_T] - sum_k (log(1 - 2 x alpha_k) + 2 x alpha_k) / 2
///             + sum_k (x beta_k)^2 / (2 (1 - 2 x alpha_k))) / T.
/// Requires |x| < 1 / (2 max_k |alpha_k|); outside that radius the series
/// diverges and a std::domain_error is thrown.
double series_cgf(const ChaosDecomposition& decomp, double x);

/// (1/T) sum_k alpha_k^p for integer p >= 2 (test functions x^p are the
/// admissible class; p < 2 is rejected).
double spectral_moment(const ChaosDecomposition& decomp, int p);

/// Limit of spectral_moment as T grows:
///   (1/2 pi) int_R (b g(x))^p dx,  g(x) = 1/(theta^2 + x^2),
/// in closed form for p = 2, 3 and by quadrature otherwise.
double spectral_limit(double theta, double b, int p);

}  // namespace ousldp
