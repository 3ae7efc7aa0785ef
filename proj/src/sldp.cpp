#include "ousldp/sldp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ousldp/numerics.hpp"
#include "ousldp/rates.hpp"

namespace ousldp {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::easy_upper: return "easy_upper";
        case Regime::lower_tail: return "lower_tail";
        case Regime::general: return "general";
        case Regime::junction: return "junction";
        case Regime::zero: return "zero";
    }
    return "?";
}

Regime classify(double theta, double c) {
    if (!(theta < 0.0)) throw std::invalid_argument("classify: theta must be negative");
    if (!std::isfinite(c)) throw std::invalid_argument("classify: c must be finite");
    if (c == theta)
        throw std::invalid_argument("classify: no sharp expansion at c = theta (rate is 0)");
    if (c < theta) return Regime::lower_tail;
    const double third = theta / 3.0;
    if (c < third) return Regime::easy_upper;
    if (c == third) return Regime::junction;
    if (c == 0.0) return Regime::zero;
    return Regime::general;
}

EasyPrefactor prefactor_easy(const ModelParams& p, double c) {
    const Regime r = classify(p.theta, c);
    if (r != Regime::easy_upper && r != Regime::lower_tail)
        throw std::invalid_argument("prefactor_easy: requires theta < c < theta/3 or c < theta");
    const double theta = p.theta;
    EasyPrefactor pf;
    pf.a_c = (c * c - theta * theta) / (2.0 * c);
    pf.sigma_c = std::sqrt(-0.5 / c);
    const double log_arg =
        theta * theta * (c + theta) * (3.0 * c - theta) / (4.0 * c * c * c * c);
    pf.j = -0.5 * std::log(log_arg) +
           p.gamma * p.gamma * (c - theta) * (c - theta) / (4.0 * c * theta * theta);
    return pf;
}

GeneralPrefactor prefactor_general(const ModelParams& p, double c) {
    if (classify(p.theta, c) != Regime::general)
        throw std::invalid_argument("prefactor_general: requires c > theta/3, c != 0");
    const double theta = p.theta;
    const double two_c_theta = 2.0 * c - theta;
    GeneralPrefactor pf;
    pf.a_c = 2.0 * (c - theta);
    pf.sigma_c = std::abs(c) / std::sqrt(2.0 * two_c_theta * two_c_theta * two_c_theta);
    const double log_arg = theta * theta * (c - theta) * (3.0 * c - theta) /
                           (4.0 * c * c * two_c_theta * two_c_theta);
    pf.k = -0.5 * std::log(log_arg) - p.gamma * p.gamma / (theta * theta) * two_c_theta;
    pf.b_c = (3.0 * c - theta) / (2.0 * two_c_theta);
    return pf;
}

JunctionConstants junction_constants(double theta) {
    return {-4.0 * theta / 3.0, 1.0 / (3.0 * theta), std::sqrt(-1.5 / theta)};
}

double solve_tilt(const ModelParams& p, double c, double T) {
    const Regime regime = classify(p.theta, c);
    if (regime != Regime::general && regime != Regime::junction)
        throw std::invalid_argument("solve_tilt: regime must be general or junction");
    if (!(T > 0.0)) throw std::invalid_argument("solve_tilt: T must be positive");

    const RestrictedDomain dom = restricted_domain(p, c);
    const double hi = dom.hi;  // = 2(c - theta), the boundary a_T converges to
    const double lo = std::isinf(dom.lo) ? hi - 8.0 * (1.0 + std::abs(hi)) : dom.lo;

    const auto g = [&](double a) {
        return restricted_l_prime(p, c, a) + restricted_h_prime(p, c, a) / T;
    };

    // H' blows up to +infinity at the boundary, so g > 0 close to hi; march
    // inward until g changes sign. Starting from the boundary picks out the
    // root next to a_c; for c > 0 the equation has a second, spurious sign
    // change near the left edge of the domain where the 1/T correction is not
    // meaningful.
    const double span = hi - lo;
    double step = 1e-9 * (1.0 + std::abs(hi));
    double right = hi - step;
    while (!(g(right) > 0.0)) {
        step *= 0.125;
        right = hi - step;
        if (step < 1e-15 * (1.0 + std::abs(hi)))
            throw PreAsymptoticError("solve_tilt: no positive lobe under the boundary at T = " +
                                     std::to_string(T));
    }
    double left = right;
    bool bracketed = false;
    for (double delta = step * 2.0; delta < span; delta *= 2.0) {
        const double a = hi - delta;
        if (a <= lo + 1e-12 * (1.0 + std::abs(lo))) break;
        if (g(a) < 0.0) {
            left = a;
            bracketed = true;
            break;
        }
        right = a;
    }
    if (!bracketed)
        throw PreAsymptoticError("solve_tilt: no sign change of L' + H'/T inside (" +
                                 std::to_string(lo) + ", " + std::to_string(hi) +
                                 ") at T = " + std::to_string(T) + "; raise T");

    const double a_T = bisect(g, left, right, 1e-12);

    // Cross-check the analytic H' with a central difference at the root.
    const double h = std::min(1e-6 * (1.0 + std::abs(a_T)), 0.125 * (hi - a_T));
    const double hp_num = (restricted_h(p, c, a_T + h) - restricted_h(p, c, a_T - h)) /
                          (2.0 * h);
    const double hp = restricted_h_prime(p, c, a_T);
    if (std::abs(hp_num - hp) > 1e-5 * std::max(1.0, std::abs(hp)))
        throw std::runtime_error("solve_tilt: analytic H' disagrees with central difference");
    return a_T;
}

SldpReport tail_approx(const ModelParams& p, double c, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("tail_approx: T must be positive");
    const double theta = p.theta;
    const double gamma = p.gamma;
    SldpReport rep;
    rep.regime = classify(theta, c);
    rep.rate = rate_theta(theta, c).value();
    rep.lower_tail = rep.regime == Regime::lower_tail;

    const double sqrt_2pi_t = std::sqrt(2.0 * std::numbers::pi * T);
    switch (rep.regime) {
        case Regime::easy_upper:
        case Regime::lower_tail: {
            const EasyPrefactor pf = prefactor_easy(p, c);
            rep.easy = pf;
            rep.approx_prob =
                std::exp(-T * rep.rate + pf.j) / (std::abs(pf.a_c) * pf.sigma_c * sqrt_2pi_t);
            break;
        }
        case Regime::general: {
            rep.tilt = solve_tilt(p, c, T);
            const GeneralPrefactor pf = prefactor_general(p, c);
            rep.general = pf;
            rep.approx_prob =
                std::exp(-T * rep.rate + pf.k) / (pf.a_c * pf.sigma_c * sqrt_2pi_t);
            break;
        }
        case Regime::junction: {
            rep.tilt = solve_tilt(p, c, T);
            const JunctionConstants jc = junction_constants(theta);
            rep.junction = jc;
            rep.approx_prob = std::exp(-T * rep.rate + gamma * gamma * jc.b_theta) *
                              gamma_quarter() /
                              (6.0 * std::numbers::pi * std::pow(T, 0.25) * std::sqrt(2.0) *
                               std::pow(jc.a_theta, 0.75) * jc.sigma_theta);
            break;
        }
        case Regime::zero: {
            rep.approx_prob = std::sqrt(2.0) *
                              std::exp(-T * rep.rate + gamma * gamma / theta + 2.0) /
                              (sqrt_2pi_t * std::sqrt(-theta));
            break;
        }
    }
    rep.pre_asymptotic_warning = !(rep.approx_prob < 1.0);
    return rep;
}

double tail_exact_c0(const ModelParams& p, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("tail_exact_c0: T must be positive");
    const JointMoments jm = joint_moments(p.theta, p.gamma, T);
    const double sd_y = std::sqrt(jm.c_T);
    const double slope = jm.b_T / jm.c_T;
    const double s2 = jm.a_T - jm.b_T * jm.b_T / jm.c_T;
    if (!(s2 > 0.0))
        throw std::runtime_error("tail_exact_c0: conditional variance not positive");
    const double s = std::sqrt(s2);
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    // Normal cdf tails via erfc keep relative accuracy far into the tails.
    const auto norm_cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };

    const auto integrand = [&](double z) {
        const double y = jm.mu_T + sd_y * z;
        const double root = std::sqrt(y * y + T);
        const double nu = jm.m_T + slope * (y - jm.mu_T);
        const double lower = (y - root - nu) / s;   // X below the lower root
        const double upper = (nu - (y + root)) / s; // X above the upper root
        const double p_in = norm_cdf(lower) + norm_cdf(upper);
        return inv_sqrt_2pi * std::exp(-0.5 * z * z) * p_in;
    };
    return adaptive_simpson(integrand, -16.0, 16.0, 1e-8, 0.0, 48, 64);
}

double gamma_quarter() {
    // Gamma(1/4) = int_0^inf t^{-3/4} e^{-t} dt = 4 int_0^inf e^{-s^4} ds.
    static const double value = 4.0 * adaptive_simpson(
        [](double s) { return std::exp(-s * s * s * s); }, 0.0, 8.0, 1e-13, 0.0, 48, 32);
    return value;
}

}  // namespace ousldp
