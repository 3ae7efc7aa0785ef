#pragma once

#include <stdexcept>

#include "ousldp/model.hpp"

namespace ousldp {

/// Extended real value: finite or +infinity. Rate functions and limiting
/// cumulant generating functions take +infinity outside their effective
/// domains; that branch is semantic rather than an overflow, so it gets a
/// dedicated kind instead of a sentinel double.
class ExtReal {
public:
    ExtReal(double v) : value_(v) {}  // NOLINT: implicit by design
    static ExtReal infinity() { return ExtReal(Inf{}); }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    /// Finite value; throws std::logic_error when infinite.
    double value() const {
        if (infinite_) throw std::logic_error("ExtReal: value() on +infinity");
        return value_;
    }
    /// Finite value, or +HUGE_VAL when infinite (for printing/comparisons).
    double value_or_inf() const;

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
        return a.value_ == b.value_;
    }

private:
    struct Inf {};
    explicit ExtReal(Inf) : infinite_(true) {}
    double value_ = 0.0;
    bool infinite_ = false;
};

/// Joint LDP rate function I_{theta,gamma}(c, d) of (theta_hat, gamma_hat):
///   -(theta - c)^2/(4c) + (gamma - d theta / c)^2 / 2   if c <= theta/3,
///   (2c - theta)      + (gamma - d theta / c)^2 / 2     if c >= theta/3, c != 0,
///   -theta                                              if (c, d) == (0, 0),
///   +infinity                                           if c == 0, d != 0.
ExtReal rate_joint(const ModelParams& params, double c, double d);

/// Marginal rate for theta_hat:
///   -(c - theta)^2/(4c) if c <= theta/3,  2c - theta otherwise.
ExtReal rate_theta(double theta, double c);

/// Marginal rate for gamma_hat: numerical infimum of c -> I_{theta,gamma}(c, d)
/// over c in R (grid bracketing plus golden-section refinement); >= 0.
double rate_gamma(const ModelParams& params, double d);

/// Limiting normalized cumulant generating function of the triplet
/// (X_T/sqrt(T), (1/T) int X^2, (1/T) int X); +infinity unless b < theta^2/2:
///   Lambda(a,b,c) = -(theta + phi(b) + gamma^2)/2 + a^2 / (2 (phi(b) - theta))
///                   + ((c - theta gamma) / phi(b))^2 / 2,   phi(b) = sqrt(theta^2 - 2b).
ExtReal lambda_cgf(const ModelParams& params, double a, double b, double c);

/// A point in the triplet space (lambda, mu, delta) =
/// (X_T/sqrt(T), (1/T) int X^2, (1/T) int X) coordinates.
struct TripletPoint {
    double lambda;
    double mu;
    double delta;
};

/// Legendre transform of Lambda; finite only when delta^2 < mu:
///   (theta^2 mu - theta lambda^2)/2 + (theta + gamma^2 + 2 theta gamma delta)/2
///   + (1 + lambda^2)^2 / (8 (mu - delta^2)).
ExtReal rate_triplet(const ModelParams& params, const TripletPoint& p);

/// Continuous map carrying the triplet onto (theta_tilde, gamma_tilde):
///   f = ((lambda^2 - 1) / (2 (mu - delta^2)), -delta (lambda^2 - 1) / (2 (mu - delta^2))).
/// Requires mu > delta^2.
std::pair<double, double> contraction_map(const TripletPoint& p);

/// LDP rate of Sigma_T = S_T / T: (2 theta c + 1)^2 / (8c) for c > 0, else +infinity.
ExtReal sigma_rate(double theta, double c);

}  // namespace ousldp
