// Command-line front end: every computation in the library, emitted as CSV or
// JSON lines with deterministic bytes for a given flag set.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ousldp/cgf.hpp"
#include "ousldp/estimators.hpp"
#include "ousldp/model.hpp"
#include "ousldp/montecarlo.hpp"
#include "ousldp/numerics.hpp"
#include "ousldp/rates.hpp"
#include "ousldp/sldp.hpp"
#include "ousldp/spectral.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// JSON has no infinity literal; rate functions emit the string "inf".
ordered_json json_ext(const ousldp::ExtReal& v) {
    if (v.is_infinite()) return "inf";
    return v.value();
}

struct Output {
    std::optional<std::string> path;

    void write(const std::string& text) const {
        if (path) {
            std::ofstream out(*path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output file: " + *path);
            out << text;
        } else {
            std::cout << text;
        }
    }
};

struct RangeSpec {
    double lo = 0.0, hi = 0.0, step = 1.0;

    std::vector<double> values() const {
        std::vector<double> out;
        const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
        for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
        return out;
    }
};

RangeSpec parse_range(const std::string& text) {
    RangeSpec r;
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw CLI::ValidationError("range", "expected lo:hi:step, got '" + text + "'");
    r.lo = std::stod(text.substr(0, p1));
    r.hi = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    r.step = std::stod(text.substr(p2 + 1));
    if (!(r.step > 0.0) || r.hi < r.lo)
        throw CLI::ValidationError("range", "need step > 0 and hi >= lo");
    return r;
}

std::vector<double> parse_values(const std::string& spec) {
    if (spec.find(':') != std::string::npos) return parse_range(spec).values();
    return {std::stod(spec)};
}

void add_theta_gamma(CLI::App* cmd, double& theta, double& gamma) {
    cmd->add_option("--theta", theta, "drift parameter, must be < 0")
        ->required()
        ->check(CLI::Range(-1e12, -1e-12).description("theta < 0"));
    cmd->add_option("--gamma", gamma, "shift parameter");
}

// ---------------------------------------------------------------- rate ----

struct RateArgs {
    double theta = -1.0, gamma = 0.0;
    std::string c_spec, d_spec;
    std::string format = "csv";
    Output out;
};

int run_rate(const RateArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    std::vector<double> cs, ds;
    if (!args.c_spec.empty()) cs = parse_values(args.c_spec);
    if (!args.d_spec.empty()) ds = parse_values(args.d_spec);
    if (cs.empty() && ds.empty())
        throw CLI::ValidationError("rate", "need --c and/or --d (value or lo:hi:step)");

    struct Row {
        std::optional<double> c, d, joint, theta_rate, gamma_rate;
    };
    std::vector<Row> rows;
    if (!cs.empty() && !ds.empty()) {
        for (double c : cs)
            for (double d : ds) {
                Row r;
                r.c = c;
                r.d = d;
                r.joint = ousldp::rate_joint(params, c, d).value_or_inf();
                r.theta_rate = ousldp::rate_theta(args.theta, c).value_or_inf();
                r.gamma_rate = ousldp::rate_gamma(params, d);
                rows.push_back(r);
            }
    } else if (!cs.empty()) {
        for (double c : cs) {
            Row r;
            r.c = c;
            r.theta_rate = ousldp::rate_theta(args.theta, c).value_or_inf();
            rows.push_back(r);
        }
    } else {
        for (double d : ds) {
            Row r;
            r.d = d;
            r.gamma_rate = ousldp::rate_gamma(params, d);
            rows.push_back(r);
        }
    }

    std::ostringstream os;
    const auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string();
        return std::isinf(*v) ? std::string("inf") : fmt_double(*v);
    };
    if (args.format == "csv") {
        os << "c,d,I_joint,I_theta,I_gamma\n";
        for (const auto& r : rows)
            os << cell(r.c) << ',' << cell(r.d) << ',' << cell(r.joint) << ','
               << cell(r.theta_rate) << ',' << cell(r.gamma_rate) << '\n';
    } else {
        const auto jcell = [](const std::optional<double>& v) -> ordered_json {
            if (!v) return nullptr;
            if (std::isinf(*v)) return "inf";
            return *v;
        };
        for (const auto& r : rows) {
            ordered_json j;
            j["c"] = jcell(r.c);
            j["d"] = jcell(r.d);
            j["I_joint"] = jcell(r.joint);
            j["I_theta"] = jcell(r.theta_rate);
            j["I_gamma"] = jcell(r.gamma_rate);
            os << j.dump() << '\n';
        }
    }
    args.out.write(os.str());
    return 0;
}

// ---------------------------------------------------------------- tail ----

struct TailArgs {
    double theta = -1.0, gamma = 0.0, c = 0.0, T = 10.0;
    std::size_t mc_paths = 0;
    bool use_is = false;
    bool exact_c0 = false;
    double dt = 0.01;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::optional<double> tilt;
    Output out;
};

int run_tail(const TailArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    const ousldp::SldpReport rep = ousldp::tail_approx(params, args.c, args.T);

    ordered_json j;
    j["command"] = "tail";
    j["theta"] = args.theta;
    j["gamma"] = args.gamma;
    j["c"] = args.c;
    j["T"] = args.T;
    j["regime"] = ousldp::regime_name(rep.regime);
    j["tail"] = rep.lower_tail ? "lower" : "upper";
    j["rate"] = rep.rate;
    if (rep.easy) {
        j["a_c"] = rep.easy->a_c;
        j["sigma_c"] = rep.easy->sigma_c;
        j["J"] = rep.easy->j;
    }
    if (rep.general) {
        j["a_c"] = rep.general->a_c;
        j["sigma_c"] = rep.general->sigma_c;
        j["K"] = rep.general->k;
        j["b_c"] = rep.general->b_c;
    }
    if (rep.junction) {
        j["a_theta"] = rep.junction->a_theta;
        j["b_theta"] = rep.junction->b_theta;
        j["sigma_theta"] = rep.junction->sigma_theta;
    }
    if (rep.tilt) j["tilt_a_T"] = *rep.tilt;
    j["approx_prob"] = rep.approx_prob;
    j["pre_asymptotic_warning"] = rep.pre_asymptotic_warning;

    if (args.mc_paths > 0) {
        const auto steps = std::max<std::size_t>(
            static_cast<std::size_t>(std::lround(args.T / args.dt)), 2);
        ousldp::McConfig cfg(args.mc_paths, ousldp::SimGrid(args.T, steps));
        cfg.seed = args.seed;
        cfg.workers = args.workers;
        ousldp::TailEstimate est;
        if (args.use_is) {
            cfg.tilt = args.tilt ? *args.tilt : args.c;
            est = ousldp::estimate_tail_is(params, args.c, args.T, cfg);
        } else {
            est = ousldp::estimate_tail(params, args.c, args.T, cfg);
        }
        ordered_json m;
        m["method"] = est.method;
        m["n_paths"] = est.n_paths;
        m["dt"] = args.dt;
        m["seed"] = args.seed;
        m["p_hat"] = est.p_hat;
        m["stderr"] = est.std_err;
        m["ess"] = est.ess;
        if (!est.warnings.empty()) m["warnings"] = est.warnings;
        j["mc"] = m;
        j["ratio_approx_mc"] = est.p_hat > 0.0 ? rep.approx_prob / est.p_hat : 0.0;
    }
    if (args.exact_c0) {
        if (args.c != 0.0) throw std::invalid_argument("--exact-c0 requires --c 0");
        const double exact = ousldp::tail_exact_c0(params, args.T);
        j["exact_c0"] = exact;
        j["ratio_approx_exact"] = rep.approx_prob / exact;
    }
    args.out.write(j.dump() + "\n");
    return 0;
}

// ----------------------------------------------------------------- cgf ----

struct CgfArgs {
    double theta = -1.0, gamma = 0.0, a = 0.0, b = 0.0, T = 10.0;
    std::optional<double> triplet_c;
    Output out;
};

int run_cgf(const CgfArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    ordered_json j;
    j["command"] = "cgf";
    j["theta"] = args.theta;
    j["gamma"] = args.gamma;
    j["a"] = args.a;
    j["b"] = args.b;
    j["T"] = args.T;
    if (args.triplet_c) {
        j["c"] = *args.triplet_c;
        j["lambda_T"] =
            ousldp::lambda_cgf_exact(params, args.a, args.b, *args.triplet_c, args.T);
        j["lambda_limit"] =
            json_ext(ousldp::lambda_cgf(params, args.a, args.b, *args.triplet_c));
    } else {
        const auto br = ousldp::cgf_exact(params, args.a, args.b, args.T);
        j["value_exact"] = br.value_exact;
        j["leading"] = br.leading;
        j["correction"] = br.correction;
        j["remainder"] = br.remainder;
    }
    args.out.write(j.dump() + "\n");
    return 0;
}

// ------------------------------------------------------------- spectral ---

struct SpectralArgs {
    double theta = -1.0, gamma = 0.0, a = 0.0, b = 1.0, T = 50.0;
    std::size_t steps = 5000;
    int p = 2;
    Output out;
};

int run_spectral(const SpectralArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    const ousldp::SimGrid grid(args.T, args.steps);
    const auto dec = ousldp::decompose(params, args.a, args.b, grid);
    ordered_json j;
    j["command"] = "spectral";
    j["theta"] = args.theta;
    j["gamma"] = args.gamma;
    j["a"] = args.a;
    j["b"] = args.b;
    j["T"] = args.T;
    j["n_steps"] = args.steps;
    j["p"] = args.p;
    j["mean"] = dec.mean;
    j["max_abs_alpha"] = dec.max_abs_alpha();
    j["sum_beta_sq"] = dec.sum_beta_sq();
    j["spectral_moment"] = ousldp::spectral_moment(dec, args.p);
    j["spectral_limit"] = ousldp::spectral_limit(args.theta, args.b, args.p);
    args.out.write(j.dump() + "\n");
    return 0;
}

// ------------------------------------------------------------- simulate ---

struct SimulateArgs {
    double theta = -1.0, gamma = 0.0, T = 10.0;
    std::size_t steps = 1000, paths = 1;
    std::uint64_t seed = 1;
    std::string format = "csv";
    Output out;
};

int run_simulate(const SimulateArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    const ousldp::SimGrid grid(args.T, args.steps);
    std::ostringstream os;
    if (args.format == "csv") os << "path,t,x\n";
    for (std::size_t p = 0; p < args.paths; ++p) {
        const auto path = ousldp::simulate_path(params, grid, args.seed + p);
        for (std::size_t k = 0; k <= args.steps; ++k) {
            const double t = grid.dt() * static_cast<double>(k);
            if (args.format == "csv") {
                os << p << ',' << fmt_double(t) << ',' << fmt_double(path.values[k]) << '\n';
            } else {
                ordered_json j;
                j["path"] = p;
                j["t"] = t;
                j["x"] = path.values[k];
                os << j.dump() << '\n';
            }
        }
    }
    args.out.write(os.str());
    return 0;
}

// ------------------------------------------------------------- estimate ---

struct EstimateArgs {
    double theta = -1.0, gamma = 0.0, T = 10.0;
    std::size_t steps = 1000, paths = 1;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string format = "jsonl";
    Output out;
};

int run_estimate(const EstimateArgs& args) {
    ousldp::ModelParams params(args.theta, args.gamma);
    const ousldp::SimGrid grid(args.T, args.steps);
    std::vector<ousldp::SuffStats> stats(args.paths);
    ousldp::run_paths(params, grid, args.paths, args.seed, args.workers,
                      [&](std::size_t i, const ousldp::SuffStats& st) { stats[i] = st; });
    std::ostringstream os;
    if (args.format == "csv")
        os << "path,x_T,int_x,int_x2,int_x_dx,s_T,theta_hat,gamma_hat,theta_tilde,gamma_tilde\n";
    for (std::size_t i = 0; i < args.paths; ++i) {
        const auto& st = stats[i];
        const auto hat = ousldp::mle(st);
        const auto tilde = ousldp::mle_tilde(st);
        if (args.format == "csv") {
            os << i << ',' << fmt_double(st.x_T) << ',' << fmt_double(st.int_x) << ','
               << fmt_double(st.int_x2) << ',' << fmt_double(st.int_x_dx) << ','
               << fmt_double(st.s_T) << ',' << fmt_double(hat.theta) << ','
               << fmt_double(hat.gamma) << ',' << fmt_double(tilde.theta) << ','
               << fmt_double(tilde.gamma) << '\n';
        } else {
            ordered_json j;
            j["path"] = i;
            j["x_T"] = st.x_T;
            j["int_x"] = st.int_x;
            j["int_x2"] = st.int_x2;
            j["int_x_dx"] = st.int_x_dx;
            j["s_T"] = st.s_T;
            j["theta_hat"] = hat.theta;
            j["gamma_hat"] = hat.gamma;
            j["theta_tilde"] = tilde.theta;
            j["gamma_tilde"] = tilde.gamma;
            os << j.dump() << '\n';
        }
    }
    args.out.write(os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-deviation toolkit for drift/shift estimation of the "
                 "Ornstein-Uhlenbeck process with shift"};
    app.require_subcommand(1);
    app.set_config("--config");

    RateArgs rate_args;
    auto* rate = app.add_subcommand("rate", "rate-function tables (I_joint, I_theta, I_gamma)");
    add_theta_gamma(rate, rate_args.theta, rate_args.gamma);
    rate->add_option("--c", rate_args.c_spec, "drift value or range lo:hi:step");
    rate->add_option("--d", rate_args.d_spec, "shift value or range lo:hi:step");
    rate->add_option("--c-range", rate_args.c_spec, "alias of --c taking a range");
    rate->add_option("--d-range", rate_args.d_spec, "alias of --d taking a range");
    rate->add_option("--format", rate_args.format)->check(CLI::IsMember({"csv", "jsonl"}));
    rate->add_option("--output", rate_args.out.path, "write to file instead of stdout");

    TailArgs tail_args;
    auto* tail = app.add_subcommand("tail", "sharp tail approximation, optional MC / exact checks");
    add_theta_gamma(tail, tail_args.theta, tail_args.gamma);
    tail->add_option("--c", tail_args.c, "tail threshold for theta_hat")->required();
    tail->add_option("--T", tail_args.T, "horizon")->required();
    tail->add_option("--mc", tail_args.mc_paths, "Monte Carlo path count");
    tail->add_flag("--is", tail_args.use_is, "importance sampling (tilt defaults to c)");
    tail->add_option("--tilt", tail_args.tilt, "importance-sampling drift (< 0)");
    tail->add_flag("--exact-c0", tail_args.exact_c0, "exact quadrature oracle (c = 0 only)");
    tail->add_option("--dt", tail_args.dt, "MC step size")->check(CLI::PositiveNumber);
    tail->add_option("--seed", tail_args.seed);
    tail->add_option("--workers", tail_args.workers);
    tail->add_option("--output", tail_args.out.path);

    CgfArgs cgf_args;
    auto* cgf = app.add_subcommand("cgf", "exact finite-horizon cumulant generating functions");
    add_theta_gamma(cgf, cgf_args.theta, cgf_args.gamma);
    cgf->add_option("--a", cgf_args.a)->required();
    cgf->add_option("--b", cgf_args.b)->required();
    cgf->add_option("--T", cgf_args.T)->required();
    cgf->add_option("--c", cgf_args.triplet_c,
                    "evaluate the triplet CGF Lambda_T(a,b,c) instead");
    cgf->add_option("--output", cgf_args.out.path);

    SpectralArgs spectral_args;
    auto* spectral = app.add_subcommand("spectral", "chaos decomposition and spectral moments");
    add_theta_gamma(spectral, spectral_args.theta, spectral_args.gamma);
    spectral->add_option("--a", spectral_args.a);
    spectral->add_option("--b", spectral_args.b)->required();
    spectral->add_option("--T", spectral_args.T)->required();
    spectral->add_option("--steps", spectral_args.steps)->check(CLI::PositiveNumber);
    spectral->add_option("--p", spectral_args.p, "moment order (>= 2)");
    spectral->add_option("--output", spectral_args.out.path);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "exact-transition path simulation");
    add_theta_gamma(sim, sim_args.theta, sim_args.gamma);
    sim->add_option("--T", sim_args.T)->required();
    sim->add_option("--steps", sim_args.steps)->check(CLI::PositiveNumber);
    sim->add_option("--paths", sim_args.paths)->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_args.seed);
    sim->add_option("--format", sim_args.format)->check(CLI::IsMember({"csv", "jsonl"}));
    sim->add_option("--output", sim_args.out.path);

    EstimateArgs est_args;
    auto* est = app.add_subcommand("estimate", "sufficient statistics and estimator pairs");
    add_theta_gamma(est, est_args.theta, est_args.gamma);
    est->add_option("--T", est_args.T)->required();
    est->add_option("--steps", est_args.steps)->check(CLI::PositiveNumber);
    est->add_option("--paths", est_args.paths)->check(CLI::PositiveNumber);
    est->add_option("--seed", est_args.seed);
    est->add_option("--workers", est_args.workers);
    est->add_option("--format", est_args.format)->check(CLI::IsMember({"csv", "jsonl"}));
    est->add_option("--output", est_args.out.path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (rate->parsed()) return run_rate(rate_args);
        if (tail->parsed()) return run_tail(tail_args);
        if (cgf->parsed()) return run_cgf(cgf_args);
        if (spectral->parsed()) return run_spectral(spectral_args);
        if (sim->parsed()) return run_simulate(sim_args);
        if (est->parsed()) return run_estimate(est_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
