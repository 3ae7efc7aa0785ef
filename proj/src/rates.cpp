#include "ousldp/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ousldp/numerics.hpp"

namespace ousldp {

double ExtReal::value_or_inf() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

ExtReal rate_joint(const ModelParams& p, double c, double d) {
    const double theta = p.theta;
    if (c == 0.0) {
        if (d == 0.0) return -theta;
        return ExtReal::infinity();
    }
    const double shift = p.gamma - d * theta / c;
    const double shift_term = 0.5 * shift * shift;
    if (c <= theta / 3.0) {
        const double diff = theta - c;
        return -diff * diff / (4.0 * c) + shift_term;
    }
    return (2.0 * c - theta) + shift_term;
}

ExtReal rate_theta(double theta, double c) {
    if (!(theta < 0.0)) throw std::invalid_argument("rate_theta: theta must be negative");
    if (c <= theta / 3.0) {
        const double diff = c - theta;
        return -diff * diff / (4.0 * c);
    }
    return 2.0 * c - theta;
}

double rate_gamma(const ModelParams& p, double d) {
    const double lo = p.theta - 10.0 * (1.0 + std::abs(p.gamma));
    const double hi = 10.0 * std::abs(p.theta);
    const int n_grid = 4096;
    const auto eval = [&](double c) { return rate_joint(p, c, d).value_or_inf(); };

    double best = std::numeric_limits<double>::infinity();
    int best_i = -1;
    const double h = (hi - lo) / n_grid;
    for (int i = 0; i <= n_grid; ++i) {
        const double v = eval(lo + i * h);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double result = best;
    if (best_i >= 0) {
        // Refine inside the bracketing cells, keeping the pole at c = 0 out of
        // the golden interval when d != 0.
        double a = lo + std::max(0, best_i - 1) * h;
        double b = lo + std::min(n_grid, best_i + 1) * h;
        const double cbest = lo + best_i * h;
        if (d != 0.0) {
            if (a < 0.0 && cbest > 0.0) a = 1e-12;
            if (b > 0.0 && cbest < 0.0) b = -1e-12;
        }
        const double refined = eval(golden_section_min(eval, a, b, 1e-10));
        result = std::min(result, refined);
    }
    if (d == 0.0) result = std::min(result, -p.theta);  // the (0,0) branch
    return result;
}

ExtReal lambda_cgf(const ModelParams& p, double a, double b, double c) {
    const double theta = p.theta;
    const double gamma = p.gamma;
    if (!(b < 0.5 * theta * theta)) return ExtReal::infinity();
    const double phi = std::sqrt(theta * theta - 2.0 * b);
    const double lin = (c - theta * gamma) / phi;
    return -0.5 * (theta + phi + gamma * gamma) + 0.5 * a * a / (phi - theta) +
           0.5 * lin * lin;
}

ExtReal rate_triplet(const ModelParams& p, const TripletPoint& pt) {
    const double theta = p.theta;
    const double gamma = p.gamma;
    const double gap = pt.mu - pt.delta * pt.delta;
    if (!(gap > 0.0)) return ExtReal::infinity();
    const double lam2 = pt.lambda * pt.lambda;
    const double one_plus = 1.0 + lam2;
    return 0.5 * (theta * theta * pt.mu - theta * lam2) +
           0.5 * (theta + gamma * gamma + 2.0 * theta * gamma * pt.delta) +
           one_plus * one_plus / (8.0 * gap);
}

std::pair<double, double> contraction_map(const TripletPoint& pt) {
    const double gap = pt.mu - pt.delta * pt.delta;
    if (!(gap > 0.0))
        throw std::invalid_argument("contraction_map: requires mu > delta^2");
    const double c = (pt.lambda * pt.lambda - 1.0) / (2.0 * gap);
    return {c, -pt.delta * c};
}

ExtReal sigma_rate(double theta, double c) {
    if (!(theta < 0.0)) throw std::invalid_argument("sigma_rate: theta must be negative");
    if (!(c > 0.0)) return ExtReal::infinity();
    const double num = 2.0 * theta * c + 1.0;
    return num * num / (8.0 * c);
}

}  // namespace ousldp
