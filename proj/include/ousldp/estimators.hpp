#pragma once

#include "ousldp/model.hpp"

namespace ousldp {

/// The five path functionals every estimator and exponential tilt consumes.
/// int_x_dx is defined through the Ito identity (X_T^2 - T)/2 rather than a
/// discrete stochastic sum, and s_T through s_T = int_x2 - int_x^2 / T, so
/// both identities hold by construction.
struct SuffStats {
    double x_T;       ///< X_T
    double int_x;     ///< int_0^T X dt
    double int_x2;    ///< int_0^T X^2 dt
    double int_x_dx;  ///< int_0^T X dX = (X_T^2 - T)/2
    double s_T;       ///< int_0^T (X - Xbar)^2 dt
    double horizon;   ///< T

    static SuffStats from_raw(double x_T, double int_x, double int_x2, double T);

    double x_bar() const { return int_x / horizon; }
    double sigma() const { return s_T / horizon; }
    /// int_0^T (X - Xbar) dX
    double int_centered_dx() const { return int_x_dx - x_bar() * x_T; }
};

/// Time integrals by the trapezoid rule on the grid; requires n_steps >= 2.
SuffStats suff_stats(const Path& path);

struct EstimatorPair {
    double theta;
    double gamma;
};

/// Maximum likelihood estimates (theta_hat, gamma_hat):
///   theta_hat = (T int X dX - X_T int X) / (T int X^2 - (int X)^2),
///   gamma_hat = (X_T int X^2 - int X dX int X) / (T int X^2 - (int X)^2).
/// Throws on a degenerate path (zero denominator).
EstimatorPair mle(const SuffStats& stats);

/// Auxiliary estimates (theta_tilde, gamma_tilde):
///   theta_tilde = int X dX / S_T,  gamma_tilde = -theta_tilde * Xbar_T.
EstimatorPair mle_tilde(const SuffStats& stats);

struct Discrepancy {
    double d_theta;  ///< theta_hat - theta_tilde
    double d_gamma;  ///< gamma_hat - gamma_tilde
};

/// Computes (theta_hat - theta_tilde, gamma_hat - gamma_tilde) twice: by
/// direct subtraction and by the closed forms
///   d_theta = -(X_T/T) (Xbar_T / Sigma_T),
///   d_gamma =  (X_T/T) (1 + Xbar_T^2 / Sigma_T),   Sigma_T = S_T / T,
/// and throws if the two routes disagree beyond 1e-9 relative.
Discrepancy discrepancy(const SuffStats& stats);

/// Symmetric 2x2 matrix, row-major.
struct Mat2 {
    double xx, xy, yx, yy;
};

/// Asymptotic covariance of sqrt(T) (theta_hat - theta, gamma_hat - gamma):
/// the inverse Fisher information per unit time,
///   [[-2 theta, -2 gamma], [-2 gamma, 1 - 2 gamma^2 / theta]].
Mat2 clt_covariance(const ModelParams& params);

namespace detail {

struct DiscrepancyRoutes {
    Discrepancy direct;
    Discrepancy closed;
    bool agree(double rel_tol) const;
};

DiscrepancyRoutes discrepancy_routes(const SuffStats& stats);

}  // namespace detail

}  // namespace ousldp
