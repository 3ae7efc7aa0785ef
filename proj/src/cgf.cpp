#include "ousldp/cgf.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ousldp {

TiltPoint tilt_point(const ModelParams& p, double a, double b) {
    const double theta = p.theta;
    const double disc = theta * theta - 2.0 * b;
    if (!(disc > 0.0))
        throw std::domain_error("tilt_point: failed theta^2 - 2b > 0 (b = " +
                                std::to_string(b) + ")");
    const double phi = std::sqrt(disc);
    const double tau = phi - (a + theta);
    if (!(tau > 0.0))
        throw std::domain_error("tilt_point: failed tau = phi - (a + theta) > 0 (a = " +
                                std::to_string(a) + ", b = " + std::to_string(b) + ")");
    return {a, b, phi, tau};
}

double script_l(const ModelParams& p, double a, double b) {
    const TiltPoint tp = tilt_point(p, a, b);
    return -0.5 * (a + p.theta + tp.phi);
}

double script_h(const ModelParams& p, double a, double b) {
    const TiltPoint tp = tilt_point(p, a, b);
    const double theta = p.theta;
    const double log_arg = tp.tau * theta * theta / (2.0 * tp.phi * tp.phi * tp.phi);
    return -0.5 * std::log(log_arg) -
           p.gamma * p.gamma * (a + theta + tp.phi) / (2.0 * theta * theta);
}

namespace {

// Entries of e^{-2 phi T} Gamma_T(phi) plus the scaled Gram determinant; all
// finite for arbitrarily large phi T.
struct ScaledGamma {
    double at, bt, ct, gt, exp_m2u;
};

ScaledGamma scaled_gamma(double phi, double T) {
    const double u = phi * T;
    ScaledGamma s;
    s.exp_m2u = std::exp(-2.0 * u);
    s.at = -std::expm1(-2.0 * u) / (2.0 * phi);
    const double em = std::expm1(-u);
    s.bt = em * em / (2.0 * phi * phi * T);
    s.ct = detail::bracket_b_scaled(u) / (phi * phi * phi * T * T);
    s.gt = detail::gram_det_numerator_scaled(u) / (2.0 * phi * phi * phi * phi * T * T);
    return s;
}

}  // namespace

namespace detail {

double scaled_det_m(const ModelParams& p, double a, double b, double T) {
    const TiltPoint tp = tilt_point(p, a, b);
    const ScaledGamma s = scaled_gamma(tp.phi, T);
    return s.exp_m2u + 2.0 * a * s.bt + 2.0 * b * T * s.ct + tp.tau * s.at +
           (2.0 * tp.tau * T * b - a * a) * s.gt;
}

}  // namespace detail

CgfBreakdown cgf_exact(const ModelParams& p, double a, double b, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("cgf_exact: T must be positive");
    const TiltPoint tp = tilt_point(p, a, b);
    const double theta = p.theta;
    const double gamma = p.gamma;
    const ScaledGamma s = scaled_gamma(tp.phi, T);

    const double det_scaled = s.exp_m2u + 2.0 * a * s.bt + 2.0 * b * T * s.ct +
                              tp.tau * s.at + (2.0 * tp.tau * T * b - a * a) * s.gt;
    if (!(det_scaled > 0.0))
        throw PreAsymptoticError("cgf_exact: det M_T(a,b) <= 0 at T = " + std::to_string(T) +
                                 "; raise T");

    // U' Gamma_T(phi) M_T^{-1} U with U = (1, -theta T); the identity
    // Gamma M^{-1} = (Gamma_scaled + det(Gamma)_scaled adj(J_T)) / det_scaled
    // keeps every factor bounded.
    const double u_gamma_u =
        s.at - 2.0 * theta * T * s.bt + theta * theta * T * T * s.ct;
    const double u_adj_u =
        2.0 * b * T + 2.0 * a * theta * T + tp.tau * theta * theta * T * T;
    const double quad = (u_gamma_u + s.gt * u_adj_u) / det_scaled;

    CgfBreakdown out;
    out.value_exact = 0.5 * (tp.tau - gamma * gamma) -
                      (tp.phi + 0.5 * std::log(det_scaled) / T) +
                      0.5 * gamma * gamma * quad / T;
    out.leading = -0.5 * (a + theta + tp.phi);
    out.correction = script_h(p, a, b);
    out.remainder = T * T * (out.value_exact - out.leading - out.correction / T);
    return out;
}

double lambda_cgf_exact(const ModelParams& p, double a, double b, double c, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("lambda_cgf_exact: T must be positive");
    const double theta = p.theta;
    const double gamma = p.gamma;
    const double disc = theta * theta - 2.0 * b;
    if (!(disc > 0.0))
        throw std::domain_error("lambda_cgf_exact: failed b < theta^2 / 2 (b = " +
                                std::to_string(b) + ")");
    const double phi = std::sqrt(disc);
    const ScaledGamma s = scaled_gamma(phi, T);

    const double det_scaled = s.exp_m2u + (phi - theta) * s.at;
    if (!(det_scaled > 0.0))
        throw PreAsymptoticError("lambda_cgf_exact: det M_T <= 0 at T = " + std::to_string(T));

    const double u1 = a * std::sqrt(T) + gamma;
    const double u2 = T * (c - theta * gamma);
    const double h_t = 0.5 *
                       (s.at * u1 * u1 + 2.0 * s.bt * u1 * u2 + s.ct * u2 * u2 +
                        s.gt * (phi - theta) * u2 * u2) /
                       det_scaled;
    return 0.5 * (phi - theta - gamma * gamma) -
           (phi + 0.5 * std::log(det_scaled) / T) + h_t / T;
}

RestrictedDomain restricted_domain(const ModelParams& p, double c) {
    const double theta = p.theta;
    const double inf = std::numeric_limits<double>::infinity();
    if (c <= 0.5 * theta) return {-inf, -theta * theta / (2.0 * c)};
    if (c <= 0.0) return {-inf, 2.0 * (c - theta)};
    return {-theta * theta / (2.0 * c), 2.0 * (c - theta)};
}

bool in_restricted_domain(const ModelParams& p, double c, double a) {
    const double theta = p.theta;
    const double disc = theta * theta + 2.0 * a * c;
    if (!(disc > 0.0)) return false;
    return std::sqrt(disc) > a + theta;  // tau > 0
}

namespace {

double restricted_phi(const ModelParams& p, double c, double a) {
    if (!in_restricted_domain(p, c, a))
        throw std::domain_error("restricted CGF: a = " + std::to_string(a) +
                                " outside the domain for c = " + std::to_string(c));
    return std::sqrt(p.theta * p.theta + 2.0 * a * c);
}

}  // namespace

double restricted_l(const ModelParams& p, double c, double a) {
    return -0.5 * (a + p.theta + restricted_phi(p, c, a));
}

double restricted_h(const ModelParams& p, double c, double a) {
    const double theta = p.theta;
    const double phi = restricted_phi(p, c, a);
    const double tau = phi - a - theta;
    return -0.5 * std::log(tau * theta * theta / (2.0 * phi * phi * phi)) -
           p.gamma * p.gamma * (a + theta + phi) / (2.0 * theta * theta);
}

double restricted_l_prime(const ModelParams& p, double c, double a) {
    const double phi = restricted_phi(p, c, a);
    return -0.5 * (1.0 + c / phi);
}

double restricted_l_second(const ModelParams& p, double c, double a) {
    const double phi = restricted_phi(p, c, a);
    return 0.5 * c * c / (phi * phi * phi);
}

double restricted_h_prime(const ModelParams& p, double c, double a) {
    const double theta = p.theta;
    const double phi = restricted_phi(p, c, a);
    const double tau = phi - a - theta;
    const double phi_prime = c / phi;
    const double tau_prime = phi_prime - 1.0;
    return -0.5 * (tau_prime / tau - 3.0 * phi_prime / phi) -
           p.gamma * p.gamma * (1.0 + phi_prime) / (2.0 * theta * theta);
}

}  // namespace ousldp
