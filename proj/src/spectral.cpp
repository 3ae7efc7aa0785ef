#include "ousldp/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ousldp/cgf.hpp"
#include "ousldp/numerics.hpp"

namespace ousldp {

double ChaosDecomposition::max_abs_alpha() const {
    return alphas.empty() ? 0.0 : std::abs(alphas.front());
}

double ChaosDecomposition::sum_beta_sq() const {
    double s = 0.0;
    for (auto it = betas.rbegin(); it != betas.rend(); ++it) s += *it * *it;
    return s;
}

ChaosDecomposition decompose(const ModelParams& params, double a, double b,
                             const SimGrid& grid) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("decompose: a and b must be finite");
    const std::size_t n = grid.n_steps;
    const double T = grid.horizon;
    const double dt = grid.dt();
    const double theta = params.theta;
    const double gamma = params.gamma;

    ChaosDecomposition out{0.0, {}, {}, grid, a, b};
    if (a == 0.0 && b == 0.0) {
        out.alphas.assign(n, 0.0);
        out.betas.assign(n, 0.0);
        return out;
    }

    // The centered path at the grid nodes t_1..t_n is the AR(1) recursion
    // Y_i = rho Y_{i-1} + sqrt(v) eps_i, so Y = B^{-1} sqrt(v) eps with B unit
    // lower bidiagonal. Conjugating the quadratic-form matrix Q (trapezoid
    // weights included) by that exact whitening gives the symmetric matrix
    // S = v B^{-T} Q B^{-1} whose eigenvalues are the chaos coefficients.
    const double rho = std::exp(theta * dt);
    const double v = std::expm1(2.0 * theta * dt) / (2.0 * theta);

    std::vector<double> w(n, dt), u(n), m(n);
    w[n - 1] = 0.5 * dt;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = w[i] / T;
        m[i] = (gamma / theta) * std::expm1(theta * dt * static_cast<double>(i + 1));
    }

    std::vector<double> S(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = S.data() + i * n;
        const double ui = u[i];
        for (std::size_t j = 0; j < n; ++j) row[j] = -b * T * ui * u[j];
        row[i] += b * w[i];
    }
    {
        double* last = S.data() + (n - 1) * n;
        for (std::size_t j = 0; j < n; ++j) {
            last[j] -= 0.5 * a * u[j];
            S[j * n + (n - 1)] -= 0.5 * a * u[j];
        }
        last[n - 1] += 0.5 * a;
    }

    // X = Q B^{-1}: row-wise back-recursion; then S = B^{-T} X row by row.
    for (std::size_t i = 0; i < n; ++i) {
        double* row = S.data() + i * n;
        for (std::size_t j = n - 1; j-- > 0;) row[j] += rho * row[j + 1];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        double* row = S.data() + i * n;
        const double* below = S.data() + (i + 1) * n;
        for (std::size_t j = 0; j < n; ++j) row[j] += rho * below[j];
    }
    for (double& x : S) x *= v;

    double max_abs = 0.0, max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            max_abs = std::max(max_abs, std::abs(S[i * n + j]));
            max_asym = std::max(max_asym, std::abs(S[i * n + j] - S[j * n + i]));
        }
    if (max_asym > 1e-8 * std::max(max_abs, 1e-300))
        throw std::logic_error("decompose: quadratic-form matrix lost symmetry");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double s = 0.5 * (S[i * n + j] + S[j * n + i]);
            S[i * n + j] = S[j * n + i] = s;
        }

    const double mu_hat = std::inner_product(u.begin(), u.end(), m.begin(), 0.0);
    double wm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) wm2 += w[i] * m[i] * m[i];
    const double m_n = m[n - 1];
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += S[i * n + i];
    out.mean = 0.5 * a * m_n * m_n - 0.5 * a * T - a * mu_hat * m_n + b * wm2 -
               b * T * mu_hat * mu_hat + trace;

    // Linear chaos: coefficients of Y in Z, whitened by the same map.
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = -a * m_n * u[i] + 2.0 * b * w[i] * m[i] - 2.0 * b * T * mu_hat * u[i];
    g[n - 1] += a * (m_n - mu_hat);
    for (std::size_t i = n - 1; i-- > 0;) g[i] += rho * g[i + 1];
    const double sqrt_v = std::sqrt(v);
    for (double& x : g) x *= sqrt_v;
    const bool want_vectors =
        std::any_of(g.begin(), g.end(), [](double x) { return x != 0.0; });

    // S is symmetric, so the column-major view equals the row-major one and
    // no LAPACKE transposition buffer is needed.
    std::vector<double> alpha(n);
    const lapack_int info = LAPACKE_dsyevd(
        LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', static_cast<lapack_int>(n),
        S.data(), static_cast<lapack_int>(n), alpha.data());
    if (info != 0)
        throw std::runtime_error("decompose: LAPACK dsyevd failed with info = " +
                                 std::to_string(info));

    std::vector<double> beta(n, 0.0);
    if (want_vectors) {
        for (std::size_t k = 0; k < n; ++k) {
            const double* vec = S.data() + k * n;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += vec[i] * g[i];
            beta[k] = acc;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(alpha[i]) > std::abs(alpha[j]);
    });
    out.alphas.resize(n);
    out.betas.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.alphas[k] = alpha[order[k]];
        out.betas[k] = beta[order[k]];
    }
    return out;
}

double series_cgf(const ChaosDecomposition& d, double x) {
    if (x == 0.0) return 0.0;
    const double radius_den = 2.0 * d.max_abs_alpha();
    if (radius_den > 0.0 && std::abs(x) >= 1.0 / radius_den)
        throw std::domain_error("series_cgf: |x| >= 1/(2 max |alpha_k|), series diverges");
    double log_sum = 0.0, beta_sum = 0.0;
    for (std::size_t k = d.alphas.size(); k-- > 0;) {  // ascending |alpha|
        const double al = d.alphas[k];
        const double be = d.betas[k];
        const double denom = 1.0 - 2.0 * x * al;
        log_sum += std::log1p(-2.0 * x * al) + 2.0 * x * al;
        beta_sum += x * be * x * be / denom;
    }
    return (x * d.mean - 0.5 * log_sum + 0.5 * beta_sum) / d.horizon();
}

double spectral_moment(const ChaosDecomposition& d, int p) {
    if (p < 2) throw std::invalid_argument("spectral_moment: requires integer p >= 2");
    double s = 0.0;
    for (std::size_t k = d.alphas.size(); k-- > 0;) s += std::pow(d.alphas[k], p);
    return s / d.horizon();
}

double spectral_limit(double theta, double b, int p) {
    if (!(theta < 0.0)) throw std::invalid_argument("spectral_limit: theta must be negative");
    if (p < 2) throw std::invalid_argument("spectral_limit: requires integer p >= 2");
    const double at = std::abs(theta);
    if (p == 2) return b * b / (4.0 * at * at * at);
    if (p == 3) return 3.0 * b * b * b / (16.0 * std::pow(at, 5));
    // (1/2pi) b^p |theta|^{1-2p} * 2 int_0^{pi/2} cos^{2p-2} phi dphi
    const double integral = 2.0 * adaptive_simpson(
        [p](double phi) { return std::pow(std::cos(phi), 2 * p - 2); }, 0.0,
        0.5 * std::numbers::pi, 1e-12, 0.0, 40, 16);
    return std::pow(b, p) * std::pow(at, 1 - 2 * p) * integral / (2.0 * std::numbers::pi);
}

}  // namespace ousldp
