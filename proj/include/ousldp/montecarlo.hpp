#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ousldp/estimators.hpp"
#include "ousldp/model.hpp"

namespace ousldp {

enum class EstimatorKind { mle_hat, mle_tilde };

/// Monte Carlo run configuration. grid.horizon is the default horizon; every
/// driver called with a different horizon keeps grid.dt() and derives the
/// step count. Results are a pure function of the configuration: per-path
/// generator streams are derived from (seed, path index) and reductions are
/// pairwise, so the worker count never changes any output bit.
struct McConfig {
    std::size_t n_paths;
    SimGrid grid;
    std::uint64_t seed = 1;
    EstimatorKind estimator = EstimatorKind::mle_hat;
    std::optional<double> tilt;  ///< IS drift parameter; must be < 0 when set
    unsigned workers = 0;        ///< 0 = hardware concurrency

    McConfig(std::size_t n_paths_, SimGrid grid_);
};

struct TailEstimate {
    double p_hat;
    double std_err;
    std::size_t n_paths;
    std::string method;  ///< "plain" or "tilted"
    double ess;          ///< effective sample size (== n_paths for plain)
    std::vector<std::string> warnings;
};

/// Runs n_paths exact-transition simulations and hands each path's SuffStats
/// to `consume` (called once per index, possibly concurrently for distinct
/// indices). The per-path RNG stream depends only on (seed, index).
void run_paths(const ModelParams& params, const SimGrid& grid, std::size_t n_paths,
               std::uint64_t seed, unsigned workers,
               const std::function<void(std::size_t, const SuffStats&)>& consume);

/// Plain Monte Carlo estimate of the event probability; binomial stderr.
TailEstimate estimate_event(const ModelParams& params, const McConfig& cfg,
                            const std::function<bool(const SuffStats&)>& event);

/// P(estimator >= c), or P(estimator <= c) when c < theta (lower tail).
TailEstimate estimate_tail(const ModelParams& params, double c, double T,
                           const McConfig& cfg);

/// Importance-sampled version: paths are simulated under drift cfg.tilt and
/// shift 0, each weighted by the unit-diffusion Girsanov ratio
///   exp((theta - tilt) int X dX + gamma X_T
///       - ((theta^2 - tilt^2) int X^2 + 2 theta gamma int X + gamma^2 T) / 2),
/// and the unnormalized mean of weight * indicator is returned with its
/// sample stderr. Warns when the effective sample size drops below 1% of
/// n_paths. Requires cfg.tilt set and negative.
TailEstimate estimate_tail_is(const ModelParams& params, double c, double T,
                              const McConfig& cfg);

struct SlopeTable {
    std::vector<double> horizons;      ///< kept horizons
    std::vector<double> p_hats;
    std::vector<double> slopes;        ///< -(1/T) log p_hat
    double extrapolated;               ///< least-squares T -> infinity limit
    std::vector<std::string> warnings;  ///< dropped horizons (p_hat == 0)
};

/// Empirical LDP slope -(1/T) log p_hat versus the rate, over increasing
/// horizons (>= 3), with a least-squares extrapolated limit from the model
/// y = b0 + b1 log(T)/T + b2 / T.
SlopeTable ldp_slope(const ModelParams& params, double c, const std::vector<double>& horizons,
                     const McConfig& cfg);

struct ExpEquivRow {
    double horizon;
    std::size_t n_paths;
    std::size_t exceed_01;         ///< # paths with ||Vhat - Vtilde|| > 0.1
    std::size_t exceed_005;        ///< # paths with ||Vhat - Vtilde|| > 0.05
    std::size_t bound_violations;  ///< # paths violating sqrt(5) xi^3 |X_T| / T
    std::size_t identity_failures; ///< # paths where the two discrepancy routes disagree
};

/// Per-horizon exceedance counts of ||Vhat - Vtilde|| plus per-path checks of
/// the algebraic discrepancy identities and the norm bound with
/// xi = max(1, |Xbar|, 1/Sigma).
std::vector<ExpEquivRow> exp_equiv_probe(const ModelParams& params,
                                         const std::vector<double>& horizons,
                                         const McConfig& cfg);

/// Empirical covariance of sqrt(T) (theta_hat - theta, gamma_hat - gamma).
Mat2 empirical_clt_covariance(const ModelParams& params, double T, const McConfig& cfg);

}  // namespace ousldp
