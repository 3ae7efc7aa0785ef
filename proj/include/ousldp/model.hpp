#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace ousldp {

/// Parameters of the shifted Ornstein-Uhlenbeck (Vasicek) diffusion
///   dX_t = theta X_t dt + gamma dt + dB_t,   X_0 = 0,
/// with unit diffusion coefficient and mean-reversion requirement theta < 0.
struct ModelParams {
    double theta;
    double gamma;

    ModelParams(double theta_, double gamma_);

    /// Long-run mean -gamma/theta of the stationary law.
    double stationary_mean() const { return -gamma / theta; }
    /// Long-run variance -1/(2 theta).
    double stationary_variance() const { return -0.5 / theta; }
};

/// Uniform observation grid over [0, T] with n_steps increments.
struct SimGrid {
    double horizon;
    std::size_t n_steps;

    SimGrid(double horizon_, std::size_t n_steps_);

    double dt() const { return horizon / static_cast<double>(n_steps); }
};

/// Mean and covariance of the Gaussian pair (X_T, Xbar_T) where
/// Xbar_T = (1/T) int_0^T X_t dt. Valid for any nonzero drift value `phi`,
/// stable or not; entries follow the closed forms
///   a_T = (e^{2 phi T} - 1) / (2 phi),
///   b_T = (e^{phi T} - 1)^2 / (2 phi^2 T),
///   c_T = ((e^{2 phi T} - 1)/(2 phi) - 2 (e^{phi T} - 1)/phi + T) / (phi^2 T^2).
struct JointMoments {
    double m_T;   ///< E[X_T]
    double mu_T;  ///< E[Xbar_T]
    double a_T;   ///< Var(X_T)
    double b_T;   ///< Cov(X_T, Xbar_T)
    double c_T;   ///< Var(Xbar_T)
};

/// Closed-form joint moments; throws std::invalid_argument for phi == 0,
/// T <= 0 or non-finite inputs. Small |phi T| is evaluated through series
/// fallbacks, so the removable singularities cause no cancellation.
JointMoments joint_moments(double phi, double gamma, double T);

/// A path sampled on a SimGrid; values[k] = X at time k * dt, values[0] == 0.
struct Path {
    SimGrid grid;
    std::vector<double> values;
};

/// One-step exact Gaussian transition over an interval of length dt:
/// X' | X ~ Normal(rho X + shift, noise_sd^2).
struct Transition {
    double rho;
    double shift;
    double noise_sd;
};

Transition exact_transition(const ModelParams& params, double dt);

/// Exact-transition simulation (no discretisation bias in the marginal law of
/// any grid value). Deterministic given the seed.
Path simulate_path(const ModelParams& params, const SimGrid& grid, std::uint64_t seed);

/// Test hook: same recursion with caller-supplied standard-normal draws.
/// Passing a function that returns 0 yields the noise-free mean path.
Path simulate_path_with(const ModelParams& params, const SimGrid& grid,
                        const std::function<double()>& std_normal);

/// Exact draw of (X_T, Xbar_T) from the bivariate Gaussian law given by
/// joint_moments; no discretisation error. Throws if the covariance matrix
/// fails its Cholesky factorisation (which would indicate a formula or
/// precision bug, not bad luck).
std::pair<double, double> simulate_terminal_pair(const ModelParams& params, double T,
                                                 std::uint64_t seed);

namespace detail {

/// (e^{2u} - 1)/2 - 2 (e^u - 1) + u, the numerator of c_T; series for small
/// |u| where the direct form cancels catastrophically.
double bracket_b(double u);

/// e^{-2u} * bracket_b(u), stable for large positive u.
double bracket_b_scaled(double u);

/// (u - 2) + 4 e^{-u} - (u + 2) e^{-2u}; equals 2 phi^4 T^2 e^{-2u} det Gamma_T
/// at u = phi T. Series for small |u|.
double gram_det_numerator_scaled(double u);

}  // namespace detail

}  // namespace ousldp
