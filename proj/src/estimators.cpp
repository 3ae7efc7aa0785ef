#include "ousldp/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace ousldp {

SuffStats SuffStats::from_raw(double x_T, double int_x, double int_x2, double T) {
    SuffStats s;
    s.x_T = x_T;
    s.int_x = int_x;
    s.int_x2 = int_x2;
    s.horizon = T;
    s.int_x_dx = 0.5 * (x_T * x_T - T);
    s.s_T = std::max(int_x2 - int_x * int_x / T, 0.0);
    return s;
}

SuffStats suff_stats(const Path& path) {
    const std::size_t n = path.grid.n_steps;
    if (n < 2) throw std::invalid_argument("suff_stats: need n_steps >= 2");
    const double dt = path.grid.dt();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x0 = path.values[k];
        const double x1 = path.values[k + 1];
        s1 += x0 + x1;
        s2 += x0 * x0 + x1 * x1;
    }
    return SuffStats::from_raw(path.values[n], 0.5 * dt * s1, 0.5 * dt * s2,
                               path.grid.horizon);
}

EstimatorPair mle(const SuffStats& st) {
    const double denom = st.horizon * st.int_x2 - st.int_x * st.int_x;
    if (!(denom > 0.0))
        throw std::invalid_argument("mle: degenerate path, T int X^2 - (int X)^2 <= 0");
    return {(st.horizon * st.int_x_dx - st.x_T * st.int_x) / denom,
            (st.x_T * st.int_x2 - st.int_x_dx * st.int_x) / denom};
}

EstimatorPair mle_tilde(const SuffStats& st) {
    if (!(st.s_T > 0.0)) throw std::invalid_argument("mle_tilde: degenerate path, S_T <= 0");
    const double theta = st.int_x_dx / st.s_T;
    return {theta, -theta * st.x_bar()};
}

namespace detail {

bool DiscrepancyRoutes::agree(double rel_tol) const {
    const auto close = [rel_tol](double x, double y) {
        return std::abs(x - y) <= rel_tol * std::max(1.0, std::abs(x) + std::abs(y));
    };
    return close(direct.d_theta, closed.d_theta) && close(direct.d_gamma, closed.d_gamma);
}

DiscrepancyRoutes discrepancy_routes(const SuffStats& st) {
    const EstimatorPair hat = mle(st);
    const EstimatorPair tilde = mle_tilde(st);
    const double xbar = st.x_bar();
    const double sigma = st.sigma();
    DiscrepancyRoutes r;
    r.direct = {hat.theta - tilde.theta, hat.gamma - tilde.gamma};
    r.closed = {-(st.x_T / st.horizon) * (xbar / sigma),
                (st.x_T / st.horizon) * (1.0 + xbar * xbar / sigma)};
    return r;
}

}  // namespace detail

Discrepancy discrepancy(const SuffStats& st) {
    const auto routes = detail::discrepancy_routes(st);
    if (!routes.agree(1e-9))
        throw std::runtime_error(
            "discrepancy: direct and closed-form evaluations disagree beyond 1e-9");
    return routes.direct;
}

Mat2 clt_covariance(const ModelParams& p) {
    return {-2.0 * p.theta, -2.0 * p.gamma, -2.0 * p.gamma,
            1.0 - 2.0 * p.gamma * p.gamma / p.theta};
}

}  // namespace ousldp
