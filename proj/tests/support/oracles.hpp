#pragma once

// Test-side oracles, kept independent of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "ousldp/model.hpp"
#include "ousldp/numerics.hpp"
#include "ousldp/rates.hpp"
#include "ousldp/rng.hpp"
#include "ousldp/spectral.hpp"

namespace oracle {

/// Numerical Legendre transform sup_{(a,b,c)} {la a + mu b + de c - Lambda}.
/// Outer golden-section over phi = sqrt(theta^2 - 2b) on (eps, phi_max);
/// inner golden-section maximisations over a and c at fixed b. Everything is
/// 1-D numerical search; no closed-form maximiser is used.
inline double legendre_sup(const ousldp::ModelParams& p, double la, double mu, double de,
                           double phi_max = 60.0) {
    const double theta = p.theta;
    const auto inner = [&](double phi) {
        const double b = 0.5 * (theta * theta - phi * phi);
        const auto neg_a = [&](double a) {
            return -(la * a - ousldp::lambda_cgf(p, a, b, 0.0).value() +
                     ousldp::lambda_cgf(p, 0.0, b, 0.0).value());
        };
        const auto neg_c = [&](double c) {
            return -(de * c - ousldp::lambda_cgf(p, 0.0, b, c).value() +
                     ousldp::lambda_cgf(p, 0.0, b, 0.0).value());
        };
        const double a_best = ousldp::golden_section_min(neg_a, -150.0, 150.0, 1e-11);
        const double c_best = ousldp::golden_section_min(neg_c, -150.0, 150.0, 1e-11);
        return la * a_best + mu * b + de * c_best -
               ousldp::lambda_cgf(p, a_best, b, c_best).value();
    };
    const auto neg = [&](double phi) { return -inner(phi); };
    const double phi_best = ousldp::golden_section_min(neg, 1e-6, phi_max, 1e-10);
    return inner(phi_best);
}

/// Per-path statistics of an exactly simulated path, trapezoid integrals,
/// written out longhand so the oracle does not share code with suff_stats.
struct PathFunctionals {
    double x_T;
    double int_x;
    double int_x2;
    double centered_int_dx;  // int (X - Xbar) dX
    double s_T;
};

inline PathFunctionals path_functionals(const ousldp::ModelParams& p,
                                        const ousldp::SimGrid& grid, std::uint64_t master,
                                        std::uint64_t index) {
    ousldp::Xoshiro256pp gen = ousldp::path_stream(master, index);
    ousldp::NormalSampler normal(gen);
    const auto tr = ousldp::exact_transition(p, grid.dt());
    double x = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double xn = tr.rho * x + tr.shift + tr.noise_sd * normal();
        s1 += x + xn;
        s2 += x * x + xn * xn;
        x = xn;
    }
    PathFunctionals f;
    f.x_T = x;
    f.int_x = 0.5 * grid.dt() * s1;
    f.int_x2 = 0.5 * grid.dt() * s2;
    const double xbar = f.int_x / grid.horizon;
    f.centered_int_dx = 0.5 * (x * x - grid.horizon) - xbar * x;
    f.s_T = f.int_x2 - f.int_x * f.int_x / grid.horizon;
    return f;
}

struct LogMeanExp {
    double value;    // (1/T) log mean(exp Z)
    double std_err;  // delta-method stderr of the same
};

/// Monte Carlo estimate of (1/T) log E[exp(Z)] from per-path Z values.
inline LogMeanExp log_mean_exp(const std::vector<double>& z, double T) {
    std::vector<double> e(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) e[i] = std::exp(z[i]);
    const double n = static_cast<double>(z.size());
    const double mean = ousldp::pairwise_sum(e) / n;
    std::vector<double> sq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = e[i] - mean;
        sq[i] = d * d;
    }
    const double sd = std::sqrt(ousldp::pairwise_sum(sq) / (n - 1.0));
    return {std::log(mean) / T, sd / (mean * std::sqrt(n)) / T};
}

/// Quasi-exact P(Z >= threshold) for Z = mean + sum alpha_k (eps_k^2 - 1)
/// + sum beta_k eps_k by numerical inversion of the characteristic function
/// (Imhof-type formula): P(Z < q) = 1/2 - (1/pi) int_0^inf Im[e^{-iuq} phi(u)]/u du.
/// Only the chaos coefficients are consumed; no path simulation and no tail
/// expansion is involved, so this is an independent oracle for tail
/// probabilities of quadratic functionals. Reliable only when many
/// eigenvalues are active (b != 0): low-rank forms give a CF envelope that
/// decays like a small power of 1/u and the truncated inversion cannot reach
/// probabilities near 0 or 1.
inline double chaos_tail_prob(const ousldp::ChaosDecomposition& d, double threshold) {
    std::vector<double> al, be;
    for (std::size_t k = 0; k < d.alphas.size(); ++k) {
        if (std::abs(d.alphas[k]) > 1e-14 || std::abs(d.betas[k]) > 1e-14) {
            al.push_back(d.alphas[k]);
            be.push_back(d.betas[k]);
        }
    }
    const double m = d.mean - threshold;
    const auto integrand = [&](double u) {
        if (u == 0.0) return m;  // limit of Im(phi)/u
        double log_rho = 0.0, phase = u * m;
        for (std::size_t k = 0; k < al.size(); ++k) {
            const double t = 2.0 * u * al[k];
            const double den = 1.0 + t * t;
            log_rho += -0.25 * std::log(den) - 0.5 * u * u * be[k] * be[k] / den;
            phase += 0.5 * std::atan(t) - u * al[k] -
                     0.5 * u * u * be[k] * be[k] * t / den;
        }
        return std::exp(log_rho) * std::sin(phase) / u;
    };
    // rho(u) decays polynomially fast with many eigenvalues; advance in
    // windows until the envelope is negligible. The target is ~1e-6 absolute
    // on an integral of order 1, plenty for ratio checks at the 1e-3 level.
    double total = 0.0;
    double lo = 0.0, width = 1.0;
    for (int win = 0; win < 400; ++win) {
        total += ousldp::adaptive_simpson(integrand, lo, lo + width, 1e-7, 2e-9, 36, 16);
        lo += width;
        if (win > 4) width *= 1.3;
        double log_rho = 0.0;
        for (std::size_t k = 0; k < al.size(); ++k) {
            const double t = 2.0 * lo * al[k];
            log_rho += -0.25 * std::log(1.0 + t * t) -
                       0.5 * lo * lo * be[k] * be[k] / (1.0 + t * t);
        }
        if (log_rho < std::log(1e-12)) break;
    }
    return 0.5 + total / std::numbers::pi;
}

}  // namespace oracle
