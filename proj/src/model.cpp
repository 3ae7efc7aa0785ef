#include "ousldp/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ousldp/rng.hpp"

namespace ousldp {

ModelParams::ModelParams(double theta_, double gamma_) : theta(theta_), gamma(gamma_) {
    if (!std::isfinite(theta) || !std::isfinite(gamma))
        throw std::invalid_argument("ModelParams: theta and gamma must be finite");
    if (!(theta < 0.0))
        throw std::invalid_argument("ModelParams: drift theta must be strictly negative, got " +
                                    std::to_string(theta));
}

SimGrid::SimGrid(double horizon_, std::size_t n_steps_) : horizon(horizon_), n_steps(n_steps_) {
    if (!std::isfinite(horizon) || !(horizon > 0.0))
        throw std::invalid_argument("SimGrid: horizon must be positive and finite");
    if (n_steps < 1) throw std::invalid_argument("SimGrid: n_steps must be >= 1");
}

namespace detail {

double bracket_b(double u) {
    if (std::abs(u) >= 0.5) {
        const double e1 = std::expm1(u);
        return 0.5 * std::expm1(2.0 * u) - 2.0 * e1 + u;
    }
    // sum_{j>=3} (2^{j-1} - 2)/j! * u^j; leading term u^3/3.
    double sum = 0.0;
    double pow2 = 4.0;   // 2^{j-1} at j = 3
    double fact = 6.0;   // j! at j = 3
    double upow = u * u * u;
    for (int j = 3; j < 40; ++j) {
        const double term = (pow2 - 2.0) / fact * upow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        pow2 *= 2.0;
        fact *= j + 1;
        upow *= u;
    }
    return sum;
}

double bracket_b_scaled(double u) {
    if (std::abs(u) < 0.5) return std::exp(-2.0 * u) * bracket_b(u);
    const double em1 = std::exp(-u);
    const double em2 = std::exp(-2.0 * u);
    return -0.5 * std::expm1(-2.0 * u) - 2.0 * (em1 - em2) + u * em2;
}

double gram_det_numerator_scaled(double u) {
    if (std::abs(u) >= 0.5)
        return (u - 2.0) + 4.0 * std::exp(-u) - (u + 2.0) * std::exp(-2.0 * u);
    // sum_{k>=4} c_k u^k with c_k = 4(-1)^k/k! - 2(-2)^k/k! - (-2)^{k-1}/(k-1)!;
    // leading term u^4/6.
    double sum = 0.0;
    double sign = 1.0;     // (-1)^k at k = 4
    double pow2 = 16.0;    // (-2)^k at k = 4 up to sign handling below
    double fact = 24.0;    // k! at k = 4
    double factm1 = 6.0;   // (k-1)! at k = 4
    double upow = u * u * u * u;
    for (int k = 4; k < 40; ++k) {
        const double m2k = sign * pow2;          // (-2)^k
        const double m2km1 = -m2k / 2.0;         // (-2)^{k-1}
        const double ck = 4.0 * sign / fact - 2.0 * m2k / fact - m2km1 / factm1;
        const double term = ck * upow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        sign = -sign;
        pow2 *= 2.0;
        factm1 = fact;
        fact *= k + 1;
        upow *= u;
    }
    return sum;
}

}  // namespace detail

JointMoments joint_moments(double phi, double gamma, double T) {
    if (!std::isfinite(phi) || !std::isfinite(gamma) || !std::isfinite(T))
        throw std::invalid_argument("joint_moments: non-finite input");
    if (phi == 0.0) throw std::invalid_argument("joint_moments: phi must be nonzero");
    if (!(T > 0.0)) throw std::invalid_argument("joint_moments: T must be positive");

    const double u = phi * T;
    const double e1 = std::expm1(u);
    JointMoments jm;
    jm.m_T = (gamma / phi) * e1;
    jm.mu_T = -(gamma / phi) * (1.0 - e1 / u);
    jm.a_T = std::expm1(2.0 * u) / (2.0 * phi);
    jm.b_T = e1 * e1 / (2.0 * phi * phi * T);
    jm.c_T = detail::bracket_b(u) / (phi * phi * phi * T * T);
    return jm;
}

Transition exact_transition(const ModelParams& params, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("exact_transition: dt must be positive");
    Transition tr;
    tr.rho = std::exp(params.theta * dt);
    tr.shift = (params.gamma / params.theta) * std::expm1(params.theta * dt);
    tr.noise_sd = std::sqrt(std::expm1(2.0 * params.theta * dt) / (2.0 * params.theta));
    return tr;
}

Path simulate_path_with(const ModelParams& params, const SimGrid& grid,
                        const std::function<double()>& std_normal) {
    const Transition tr = exact_transition(params, grid.dt());
    Path path{grid, std::vector<double>(grid.n_steps + 1)};
    double x = 0.0;
    path.values[0] = x;
    for (std::size_t k = 1; k <= grid.n_steps; ++k) {
        x = tr.rho * x + tr.shift + tr.noise_sd * std_normal();
        path.values[k] = x;
    }
    return path;
}

Path simulate_path(const ModelParams& params, const SimGrid& grid, std::uint64_t seed) {
    Xoshiro256pp gen = path_stream(seed, 0);
    NormalSampler normal(gen);
    return simulate_path_with(params, grid, [&normal]() { return normal(); });
}

std::pair<double, double> simulate_terminal_pair(const ModelParams& params, double T,
                                                 std::uint64_t seed) {
    const JointMoments jm = joint_moments(params.theta, params.gamma, T);
    if (!(jm.a_T > 0.0))
        throw std::runtime_error("simulate_terminal_pair: covariance numerically non-PSD");
    const double l11 = std::sqrt(jm.a_T);
    const double l21 = jm.b_T / l11;
    const double s22sq = jm.c_T - l21 * l21;
    if (s22sq < -1e-12 * jm.c_T)
        throw std::runtime_error("simulate_terminal_pair: covariance numerically non-PSD");
    const double l22 = std::sqrt(std::max(s22sq, 0.0));

    Xoshiro256pp gen = path_stream(seed, 0);
    NormalSampler normal(gen);
    const double z1 = normal();
    const double z2 = normal();
    return {jm.m_T + l11 * z1, jm.mu_T + l21 * z1 + l22 * z2};
}

}  // namespace ousldp
