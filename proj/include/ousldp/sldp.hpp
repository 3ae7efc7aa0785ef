#pragma once

#include <optional>
#include <string>

#include "ousldp/cgf.hpp"
#include "ousldp/model.hpp"

namespace ousldp {

/// Case structure of the first-order sharp tail expansions for theta_hat.
/// Given theta < 0, the tags partition c in R \ {theta}; c == theta (rate
/// zero, no sharp expansion) is rejected by classify.
enum class Regime {
    easy_upper,  ///< theta < c < theta/3: interior saddle, upper tail
    lower_tail,  ///< c < theta: interior saddle, lower tail
    general,     ///< c > theta/3, c != 0: saddle on the domain boundary
    junction,    ///< c == theta/3: degenerate saddle, T^{1/4} scale
    zero,        ///< c == 0: conditional-Gaussian reduction
};

const char* regime_name(Regime r);

Regime classify(double theta, double c);

/// Constants of the interior-saddle cases (easy_upper / lower_tail):
///   a_c = (c^2 - theta^2) / (2c),  sigma_c^2 = -1/(2c),
///   J(c) = -log(theta^2 (c + theta)(3c - theta) / (4 c^4)) / 2
///          + gamma^2 (c - theta)^2 / (4 c theta^2).
struct EasyPrefactor {
    double a_c;
    double sigma_c;
    double j;
};

EasyPrefactor prefactor_easy(const ModelParams& params, double c);

/// Constants of the boundary-saddle case (general):
///   a_c = 2 (c - theta),  sigma_c^2 = c^2 / (2 (2c - theta)^3),
///   K(c) = -log(theta^2 (c - theta)(3c - theta) / (4 c^2 (2c - theta)^2)) / 2
///          - (gamma^2 / theta^2)(2c - theta),
///   b_c = -L'(a_c) = (3c - theta) / (2 (2c - theta)).
struct GeneralPrefactor {
    double a_c;
    double sigma_c;
    double k;
    double b_c;
};

GeneralPrefactor prefactor_general(const ModelParams& params, double c);

/// Constants of the junction case c == theta/3:
/// a_theta = -4 theta / 3, b_theta = 1/(3 theta), sigma_theta^2 = -3/(2 theta).
struct JunctionConstants {
    double a_theta;
    double b_theta;
    double sigma_theta;
};

JunctionConstants junction_constants(double theta);

/// Unique root a_T of L'(a) + H'(a)/T = 0 in the interior of the restricted
/// domain, next to its right boundary a_c = 2(c - theta); regimes general and
/// junction only. Bisection to 1e-12 absolute. Throws PreAsymptoticError
/// (naming the interval tried) when no sign change exists yet, i.e. T is too
/// small for the expansion to make sense.
double solve_tilt(const ModelParams& params, double c, double T);

/// Composite first-order tail approximation report.
struct SldpReport {
    Regime regime;
    double rate;                       ///< I_theta(c)
    std::optional<EasyPrefactor> easy;
    std::optional<GeneralPrefactor> general;
    std::optional<JunctionConstants> junction;
    std::optional<double> tilt;        ///< solved a_T (general / junction)
    double approx_prob;                ///< right-hand side without the 1+o(1)
    bool lower_tail;                   ///< probability refers to P(theta_hat <= c)
    bool pre_asymptotic_warning;       ///< approx_prob >= 1 at this T
};

/// Evaluates the matching case of the first-order expansion:
///   easy/lower:  exp(-T I + J) / (|a_c| sigma_c sqrt(2 pi T)),
///   general:     exp(-T I + K) / (a_c sigma_c sqrt(2 pi T)),
///   junction:    exp(-T I + gamma^2 b_theta) Gamma(1/4)
///                  / (6 pi T^{1/4} sqrt(2) a_theta^{3/4} sigma_theta),
///   zero:        sqrt(2) exp(-T I + gamma^2/theta + 2) / (sqrt(2 pi T) sqrt(-theta)).
/// Solver failures in the general/junction regimes propagate as
/// PreAsymptoticError; approx_prob >= 1 only sets the warning flag.
SldpReport tail_approx(const ModelParams& params, double c, double T);

/// Exact P(theta_hat >= 0) = P(X_T^2 - 2 X_T Xbar_T >= T): outer adaptive
/// quadrature over Xbar_T of the inner conditional Gaussian two-sided tail in
/// X_T (roots of x^2 - 2 y x - T). Relative tolerance 1e-8.
double tail_exact_c0(const ModelParams& params, double T);

/// Gamma(1/4), computed once by adaptive quadrature of the Gamma integrand
/// and cached.
double gamma_quarter();

}  // namespace ousldp
