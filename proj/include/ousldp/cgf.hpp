#pragma once

#include <stdexcept>

#include "ousldp/model.hpp"

namespace ousldp {

/// Raised when an exact finite-T cumulant computation needs a larger horizon
/// (determinant not yet positive) or a tilt solver cannot bracket its root.
class PreAsymptoticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point of the effective domain
///   D_L = { (a, b) : theta^2 - 2b > 0 and tau = phi - (a + theta) > 0 }
/// of the limiting CGF of ((1/T) int (X - Xbar) dX, S_T / T), with the two
/// derived quantities cached.
struct TiltPoint {
    double a;
    double b;
    double phi;  ///< sqrt(theta^2 - 2b)
    double tau;  ///< phi - (a + theta)
};

/// Validates membership in D_L; the error message names the failed inequality.
TiltPoint tilt_point(const ModelParams& params, double a, double b);

/// Limit L(a,b) = -(a + theta + sqrt(theta^2 - 2b)) / 2 on D_L.
double script_l(const ModelParams& params, double a, double b);

/// 1/T correction
///   H(a,b) = -log(tau theta^2 / (2 phi^3)) / 2
///            - gamma^2 (a + theta + phi) / (2 theta^2).
double script_h(const ModelParams& params, double a, double b);

/// Exact finite-horizon decomposition
///   L_T(a,b) = L(a,b) + H(a,b)/T + R_T(a,b)/T^2  (identically, by construction).
struct CgfBreakdown {
    double value_exact;  ///< L_T(a,b)
    double leading;      ///< L(a,b)
    double correction;   ///< H(a,b)
    double remainder;    ///< R_T(a,b) = T^2 (L_T - L - H/T)
};

/// Exact L_T(a,b) by 2x2 Gaussian matrix calculus:
///   L_T = (tau - gamma^2)/2 - log det M_T / (2T)
///         + (gamma^2 / 2T) U' Gamma_T(phi) M_T^{-1} U,
/// with M_T = I + J_T Gamma_T(phi), J_T = [[tau, a], [a, 2bT]], U = (1, -theta T).
/// All exponentially large factors are scaled out internally, so any desk T is
/// representable. Throws PreAsymptoticError when det M_T <= 0.
CgfBreakdown cgf_exact(const ModelParams& params, double a, double b, double T);

/// Exact finite-horizon CGF Lambda_T(a,b,c) of the triplet
/// (X_T/sqrt(T), int X^2, int X) (normalized by 1/T); tends to
/// rates.hpp's lambda_cgf as T grows. Requires b < theta^2 / 2.
double lambda_cgf_exact(const ModelParams& params, double a, double b, double c, double T);

/// Open interval of `a` values for which (a, -a c) lies in D_L:
///   ( -inf, -theta^2/(2c) )          if c <= theta/2,
///   ( -inf, 2 (c - theta) )          if theta/2 < c <= 0,
///   ( -theta^2/(2c), 2 (c - theta) ) if c > 0.
struct RestrictedDomain {
    double lo;  ///< -infinity encoded as -HUGE_VAL
    double hi;
};

RestrictedDomain restricted_domain(const ModelParams& params, double c);
bool in_restricted_domain(const ModelParams& params, double c, double a);

/// One-parameter restrictions along b = -a c, with phi(a) = sqrt(theta^2 + 2 a c):
///   L(a) = -(a + theta + phi(a)) / 2,
///   H(a) = -log((phi - a - theta) theta^2 / (2 phi^3)) / 2
///          - gamma^2 (a + theta + phi) / (2 theta^2).
/// All five throw std::domain_error outside the interval for the given c.
double restricted_l(const ModelParams& params, double c, double a);
double restricted_h(const ModelParams& params, double c, double a);
double restricted_l_prime(const ModelParams& params, double c, double a);
double restricted_l_second(const ModelParams& params, double c, double a);
double restricted_h_prime(const ModelParams& params, double c, double a);

namespace detail {

/// e^{-2 phi T} det M_T(a,b); positive for T past the pre-asymptotic regime and
/// converging to tau theta^2 / (2 phi^3).
double scaled_det_m(const ModelParams& params, double a, double b, double T);

}  // namespace detail

}  // namespace ousldp
