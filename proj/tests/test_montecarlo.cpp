#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ousldp/montecarlo.hpp"
#include "ousldp/rates.hpp"
#include "ousldp/sldp.hpp"
#include "ousldp/spectral.hpp"
#include "support/oracles.hpp"

using namespace ousldp;

TEST_CASE("config validation") {
    CHECK_THROWS_AS(McConfig(50, SimGrid(1.0, 10)), std::invalid_argument);
    McConfig cfg(1000, SimGrid(10.0, 100));
    cfg.tilt = 0.5;
    CHECK_THROWS_AS(estimate_tail_is(ModelParams(-2.0, 0.0), -1.0, 10.0, cfg),
                    std::invalid_argument);
    McConfig no_tilt(1000, SimGrid(10.0, 100));
    CHECK_THROWS_AS(estimate_tail_is(ModelParams(-2.0, 0.0), -1.0, 10.0, no_tilt),
                    std::invalid_argument);
}

TEST_CASE("results do not depend on the worker count") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(4000, SimGrid(5.0, 250));
    cfg.seed = 31;
    cfg.workers = 1;
    const auto one = estimate_tail(p, -1.0, 5.0, cfg);
    cfg.workers = 4;
    const auto four = estimate_tail(p, -1.0, 5.0, cfg);
    CHECK(one.p_hat == four.p_hat);
    CHECK(one.std_err == four.std_err);

    cfg.tilt = -1.0;
    cfg.workers = 1;
    const auto is_one = estimate_tail_is(p, -1.0, 5.0, cfg);
    cfg.workers = 3;
    const auto is_three = estimate_tail_is(p, -1.0, 5.0, cfg);
    CHECK(is_one.p_hat == is_three.p_hat);
    CHECK(is_one.std_err == is_three.std_err);
}

TEST_CASE("sure events and impossible thresholds") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(500, SimGrid(5.0, 100));
    const auto sure = estimate_tail(p, -100.0, 5.0, cfg);  // lower tail at c << theta...
    // c = -100 < theta, so this is P(theta_hat <= -100): essentially zero
    CHECK(sure.p_hat == 0.0);
    // upper-tail equivalent with a threshold far below all draws
    const auto all = estimate_event(p, cfg, [](const SuffStats&) { return true; });
    CHECK(all.p_hat == 1.0);
    CHECK(all.std_err == 0.0);
}

TEST_CASE("plain MC matches the characteristic-function inversion oracle") {
    // P(theta_hat >= c) = P(Z_T(1, -c) >= 0); the oracle inverts the exact
    // chaos CF of the discretized functional, no simulation involved
    ModelParams p(-2.0, 0.0);
    const double c = -1.0, T = 6.0;
    McConfig cfg(200000, SimGrid(T, 600));  // dt = 0.01
    cfg.seed = 61;
    const auto est = estimate_tail(p, c, T, cfg);
    const auto dec = decompose(p, 1.0, -c, SimGrid(T, 600));
    const double exact = oracle::chaos_tail_prob(dec, 0.0);
    CHECK(std::abs(est.p_hat - exact) < 3.0 * est.std_err);
}

TEST_CASE("plain estimate sits near the sharp approximation") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(100000, SimGrid(10.0, 500));  // dt = 0.02
    cfg.seed = 5;
    const auto est = estimate_tail(p, -1.0, 10.0, cfg);
    CHECK(est.p_hat > 3e-3);
    CHECK(est.p_hat < 9e-3);
    const double ratio = tail_approx(p, -1.0, 10.0).approx_prob / est.p_hat;
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.6);
}

TEST_CASE("identity tilt reproduces plain Monte Carlo exactly") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(20000, SimGrid(10.0, 400));
    cfg.seed = 7;
    const auto plain = estimate_tail(p, -1.0, 10.0, cfg);
    cfg.tilt = p.theta;  // gamma = 0: the likelihood ratio is identically 1
    const auto tilted = estimate_tail_is(p, -1.0, 10.0, cfg);
    CHECK(tilted.p_hat == doctest::Approx(plain.p_hat).epsilon(1e-12));
    CHECK(tilted.ess == doctest::Approx(static_cast<double>(cfg.n_paths)).epsilon(1e-9));
}

TEST_CASE("importance sampling: agreement and variance reduction") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(50000, SimGrid(10.0, 500));
    cfg.seed = 11;
    const auto plain = estimate_tail(p, -1.0, 10.0, cfg);
    cfg.tilt = -1.0;
    const auto is = estimate_tail_is(p, -1.0, 10.0, cfg);
    CHECK(is.p_hat > 0.0);
    const double joint = std::hypot(plain.std_err, is.std_err);
    CHECK(std::abs(plain.p_hat - is.p_hat) < 3.0 * joint);
    CHECK(is.std_err < plain.std_err / 3.0);
    CHECK(is.warnings.empty());
}

TEST_CASE("tilted estimates are unbiased across 20 seeded replications") {
    ModelParams p(-2.0, 0.0);
    const double c = -1.0, T = 6.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        McConfig cfg(20000, SimGrid(T, 120));  // dt = 0.05
        cfg.seed = seed * 1000;
        const auto plain = estimate_tail(p, c, T, cfg);
        cfg.tilt = c;
        const auto tilted = estimate_tail_is(p, c, T, cfg);
        CAPTURE(seed);
        CHECK(std::abs(plain.p_hat - tilted.p_hat) <
              3.0 * std::hypot(plain.std_err, tilted.std_err));
    }
}

TEST_CASE("extreme tilt triggers the effective-sample-size warning") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(2000, SimGrid(10.0, 200));
    cfg.tilt = -8.0;
    const auto est = estimate_tail_is(p, -1.0, 10.0, cfg);
    CHECK(!est.warnings.empty());
    CHECK(est.ess < 0.01 * 2000);
}

TEST_CASE("LDP slope decreases toward the rate and extrapolates near it") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(200000, SimGrid(10.0, 1000));  // dt = 0.01
    cfg.seed = 3;
    cfg.tilt = -1.0;  // variance control; the estimate stays unbiased
    const auto table = ldp_slope(p, -1.0, {5.0, 10.0, 20.0}, cfg);
    REQUIRE(table.slopes.size() == 3);
    CHECK(table.slopes[0] > table.slopes[1]);
    CHECK(table.slopes[1] > table.slopes[2]);
    const double rate = rate_theta(p.theta, -1.0).value();
    for (double s : table.slopes) CHECK(s > rate);
    CHECK(table.extrapolated == doctest::Approx(rate).epsilon(0.30));

    CHECK_THROWS_AS(ldp_slope(p, -1.0, {5.0, 10.0}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(ldp_slope(p, -1.0, {10.0, 5.0, 20.0}, cfg), std::invalid_argument);
}

TEST_CASE("slope of a joint event dominates the marginal rate") {
    // contraction-principle monotonicity: P(joint) <= P(theta_hat >= c)
    ModelParams p(-2.0, 0.0);
    McConfig cfg(100000, SimGrid(8.0, 400));
    cfg.seed = 13;
    const double c = -1.0, d = 0.0, delta = 0.3;
    const auto joint = estimate_event(p, cfg, [&](const SuffStats& st) {
        const auto est = mle(st);
        return est.theta >= c && std::abs(est.gamma - d) < delta;
    });
    const auto marginal = estimate_event(p, cfg, [&](const SuffStats& st) {
        return mle(st).theta >= c;
    });
    CHECK(joint.p_hat <= marginal.p_hat);
    const double slope_joint = -std::log(joint.p_hat) / 8.0;
    const double slope_marginal = -std::log(marginal.p_hat) / 8.0;
    CHECK(slope_joint + 1e-12 >= slope_marginal);
}

TEST_CASE("both estimator kinds are selectable and nearly coincide") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(20000, SimGrid(10.0, 400));
    cfg.seed = 29;
    const auto hat = estimate_tail(p, -1.0, 10.0, cfg);
    cfg.estimator = EstimatorKind::mle_tilde;
    const auto tilde = estimate_tail(p, -1.0, 10.0, cfg);
    CHECK(hat.p_hat != tilde.p_hat);  // different functionals on the same paths
    // exponentially equivalent estimators: nearby tail estimates
    CHECK(std::abs(hat.p_hat - tilde.p_hat) <
          0.5 * (hat.p_hat + tilde.p_hat));
}

TEST_CASE("no rare event at the true parameter") {
    ModelParams p(-2.0, 0.0);
    McConfig cfg(20000, SimGrid(10.0, 400));
    const auto est = estimate_tail(p, -2.0 + 1e-12, 10.0, cfg);
    CHECK(est.p_hat > 0.3);
    CHECK(est.p_hat < 0.7);
}

TEST_CASE("estimator-gap probe: exceedances shrink, identities hold") {
    ModelParams p(-1.0, 0.0);
    McConfig cfg(5000, SimGrid(10.0, 500));  // dt = 0.02 reference grid
    cfg.seed = 21;
    const auto rows = exp_equiv_probe(p, {10.0, 20.0, 50.0}, cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.identity_failures == 0);
        CHECK(r.bound_violations == 0);
        CHECK(r.exceed_005 >= r.exceed_01);  // smaller threshold, weakly more
    }
    CHECK(rows[0].exceed_01 >= rows[1].exceed_01);
    CHECK(rows[1].exceed_01 >= rows[2].exceed_01);
    CHECK(rows[2].exceed_01 == 0);
}

TEST_CASE("at long horizons even the sqrt(3) constant bounds the gap") {
    // xi is then driven by 1/Sigma ~ -2 theta, far from the xi ~ 1 corner
    // where sqrt(3) fails
    ModelParams p(-1.0, 0.0);
    McConfig cfg(2000, SimGrid(50.0, 2500));
    cfg.seed = 23;
    std::atomic<std::size_t> violations{0};
    run_paths(p, cfg.grid, cfg.n_paths, cfg.seed, cfg.workers,
              [&](std::size_t, const SuffStats& st) {
                  const auto d = discrepancy(st);
                  const double xi =
                      std::max({1.000001, std::abs(st.x_bar()), 1.0 / st.sigma()});
                  const double bound =
                      std::sqrt(3.0) * xi * xi * xi * std::abs(st.x_T) / st.horizon;
                  if (std::hypot(d.d_theta, d.d_gamma) > bound + 1e-12) violations.fetch_add(1);
              });
    CHECK(violations.load() == 0);
}

TEST_CASE("discretization control at the reference settings") {
    ModelParams p(-2.0, 0.0);
    McConfig coarse(50000, SimGrid(10.0, 1000));  // dt = 1e-2
    coarse.seed = 8;
    McConfig fine(50000, SimGrid(10.0, 2000));
    fine.seed = 8;
    const auto a = estimate_tail(p, -1.0, 10.0, coarse);
    const auto b = estimate_tail(p, -1.0, 10.0, fine);
    CHECK(std::abs(a.p_hat - b.p_hat) < 2.0 * std::hypot(a.std_err, b.std_err));
}

TEST_CASE("empirical CLT covariance approaches the information bound") {
    ModelParams p(-2.0, 1.0);
    McConfig cfg(4000, SimGrid(200.0, 4000));  // dt = 0.05
    cfg.seed = 19;
    const auto emp = empirical_clt_covariance(p, 200.0, cfg);
    const auto ref = clt_covariance(p);
    CHECK(emp.xx == doctest::Approx(ref.xx).epsilon(0.15));
    CHECK(emp.xy == doctest::Approx(ref.xy).epsilon(0.15));
    CHECK(emp.yy == doctest::Approx(ref.yy).epsilon(0.15));
}
