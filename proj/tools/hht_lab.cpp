// hht-lab: command-line front end for the HHT solver library.
//
// Subcommands wire the models, schemes, controllers and analyses to JSON
// configuration and CSV/SVG outputs. Exit codes: 0 ok, 1 usage/config error,
// 2 numerical failure.

#include "hht/hht.hpp"
#include "hht/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using hht::Json;

Json default_config() {
    return Json{
        {"model", "disease"},
        {"solver", "icn"},
        {"S", nullptr},
        {"dt", 0.01},
        {"dt0", 0.01},
        {"T", 500.0},
        {"eps_fp", 1e-7},
        {"eps_t", 1e-7},
        {"max_iter", 10},
        {"max_iter_j", 10},
        {"m", 2},
        {"dt_min", 1e-10},
        {"dt_max", 10.0},
        {"safety", 1.0},
        {"growth_cap", 5.0},
        {"s_min", 0.0},
        {"s_max", 400.0},
        {"s_step", 1.0},
        {"plane_offset", 40.0},
        {"direction", "up"},
        {"transient", 500.0},
        {"renorm_interval", 1.0},
        {"levels", 8},
        {"threads", 0},
        {"pid_profile", "default"},
        {"repetitions", 5},
        {"cluster_tol", 0.5},
        {"tol", 1e-10},
        {"params", Json::object()},
    };
}

std::vector<const char*> allowed_config_keys() {
    return {"model",  "solver",    "S",          "dt",        "dt0",       "T",
            "eps_fp", "eps_t",     "max_iter",   "max_iter_j", "m",        "dt_min",
            "dt_max", "safety",    "growth_cap", "s_min",     "s_max",     "s_step",
            "plane_offset",        "direction",  "transient", "renorm_interval",
            "levels", "threads",   "pid_profile", "repetitions", "cluster_tol", "tol",
            "params"};
}

struct Cli {
    CLI::App app{"solver laboratory for Hodgkin-Huxley type systems", "hht-lab"};
    Json cfg = default_config();
    std::string config_path;
    std::string dump_config_path;
    std::string out_path;

    // flag storage; applied over the config file according to what was given
    std::string model, solver, direction, pid_profile;
    double S = 0, dt = 0, dt0 = 0, T = 0, eps_fp = 0, eps_t = 0;
    double s_min = 0, s_max = 0, s_step = 0, plane_offset = 0, transient = 0;
    double renorm_interval = 0, cluster_tol = 0, tol = 0;
    double dt_min = 0, dt_max = 0, safety = 0, growth_cap = 0;
    int max_iter = 0, max_iter_j = 0, m = 0, levels = 0, threads = 0, repetitions = 0;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        cmd->add_option("--dump-config", dump_config_path,
                        "write the effective configuration to this path");
        cmd->add_option("--out", out_path, "output file path");
        cmd->add_option("--model", model, "model id (disease, vdp, fhn, hh)");
        cmd->add_option("--solver", solver,
                        "solver id (isie, icn, isv, mmrk4, irk4, rk45-baseline, "
                        "pidicn, aicn, ark4, airk4)");
        cmd->add_option("--S", S, "external input level (disease model)");
        cmd->add_option("--dt", dt, "fixed step size");
        cmd->add_option("--dt0", dt0, "initial step size of adaptive solvers");
        cmd->add_option("--T", T, "time horizon");
        cmd->add_option("--eps-fp", eps_fp, "fixed-point tolerance");
        cmd->add_option("--eps-t", eps_t, "step controller tolerance");
        cmd->add_option("--max-iter", max_iter, "fixed-point iteration cap");
        cmd->add_option("--max-iter-j", max_iter_j, "corrector iteration cap");
        cmd->add_option("--m", m, "substep count of the step-doubling controllers");
        cmd->add_option("--dt-min", dt_min, "lower step clamp");
        cmd->add_option("--dt-max", dt_max, "upper step clamp");
        cmd->add_option("--safety", safety, "multiplier on the proposed step");
        cmd->add_option("--growth-cap", growth_cap, "max per-step growth ratio");
        cmd->add_option("--s-min", s_min, "scan start");
        cmd->add_option("--s-max", s_max, "scan end");
        cmd->add_option("--s-step", s_step, "scan increment");
        cmd->add_option("--plane-offset", plane_offset, "section plane level (default 40)");
        cmd->add_option("--direction", direction, "crossing direction (up, down, both)");
        cmd->add_option("--transient", transient, "settling time discarded before analysis");
        cmd->add_option("--renorm-interval", renorm_interval,
                        "tangent reorthonormalization interval");
        cmd->add_option("--levels", levels, "number of step-halving levels");
        cmd->add_option("--threads", threads, "worker threads (HHT_LAB_THREADS fallback)");
        cmd->add_option("--pid-profile", pid_profile, "PID profile (default, hand-tuned)");
        cmd->add_option("--repetitions", repetitions, "benchmark repetitions");
        cmd->add_option("--cluster-tol", cluster_tol, "ISI cluster threshold");
        cmd->add_option("--tol", tol, "rk45 baseline tolerance");
    }

    // defaults < config file < explicit flags
    void finalize(CLI::App* cmd) {
        if (!config_path.empty()) {
            Json file_cfg = hht::load_json_file(config_path);
            hht::reject_unknown_keys(file_cfg, {"model", "solver", "S", "dt", "dt0", "T",
                                                "eps_fp", "eps_t", "max_iter", "max_iter_j",
                                                "m", "dt_min", "dt_max", "safety",
                                                "growth_cap", "s_min", "s_max", "s_step",
                                                "plane_offset", "direction", "transient",
                                                "renorm_interval", "levels", "threads",
                                                "pid_profile", "repetitions", "cluster_tol",
                                                "tol", "params"},
                                     "config file");
            for (auto& [key, value] : file_cfg.items()) cfg[key] = value;
        }
        auto set_if = [&](const char* flag, const char* key, auto& value) {
            if (cmd->count(flag)) cfg[key] = value;
        };
        set_if("--model", "model", model);
        set_if("--solver", "solver", solver);
        set_if("--S", "S", S);
        set_if("--dt", "dt", dt);
        set_if("--dt0", "dt0", dt0);
        set_if("--T", "T", T);
        set_if("--eps-fp", "eps_fp", eps_fp);
        set_if("--eps-t", "eps_t", eps_t);
        set_if("--max-iter", "max_iter", max_iter);
        set_if("--max-iter-j", "max_iter_j", max_iter_j);
        set_if("--m", "m", m);
        set_if("--dt-min", "dt_min", dt_min);
        set_if("--dt-max", "dt_max", dt_max);
        set_if("--safety", "safety", safety);
        set_if("--growth-cap", "growth_cap", growth_cap);
        set_if("--s-min", "s_min", s_min);
        set_if("--s-max", "s_max", s_max);
        set_if("--s-step", "s_step", s_step);
        set_if("--plane-offset", "plane_offset", plane_offset);
        set_if("--direction", "direction", direction);
        set_if("--transient", "transient", transient);
        set_if("--renorm-interval", "renorm_interval", renorm_interval);
        set_if("--levels", "levels", levels);
        set_if("--threads", "threads", threads);
        set_if("--pid-profile", "pid_profile", pid_profile);
        set_if("--repetitions", "repetitions", repetitions);
        set_if("--cluster-tol", "cluster_tol", cluster_tol);
        set_if("--tol", "tol", tol);
        if (!dump_config_path.empty()) {
            std::ofstream out(dump_config_path);
            if (!out) throw hht::ConfigError("cannot open '" + dump_config_path + "'");
            out << cfg.dump(2) << "\n";
        }
    }

    double num(const char* key) const { return cfg[key].get<double>(); }
    int integer(const char* key) const { return cfg[key].get<int>(); }
    std::string str(const char* key) const { return cfg[key].get<std::string>(); }

    hht::FixedStepSettings fixed_settings() const {
        hht::FixedStepSettings s;
        s.dt = num("dt");
        s.T = num("T");
        s.eps_fp = num("eps_fp");
        s.max_fp_iters = integer("max_iter");
        s.max_corrector_iters = integer("max_iter_j");
        if (!(s.dt > 0.0) || !(s.T > 0.0) || !(s.eps_fp > 0.0) || s.max_fp_iters < 1 ||
            s.max_corrector_iters < 1) {
            throw hht::ConfigError("dt, T, eps_fp must be positive; iteration caps >= 1");
        }
        return s;
    }

    hht::AdaptiveSettings adaptive_settings() const {
        hht::AdaptiveSettings s;
        s.dt0 = num("dt0");
        s.T = num("T");
        s.eps_t = num("eps_t");
        s.eps_fp = num("eps_fp");
        s.substeps = integer("m");
        s.max_fp_iters = integer("max_iter");
        s.max_corrector_iters = integer("max_iter_j");
        s.dt_min = num("dt_min");
        s.dt_max = num("dt_max");
        s.safety = num("safety");
        s.growth_cap = num("growth_cap");
        if (!(s.dt0 > 0.0) || !(s.T > 0.0) || !(s.eps_t > 0.0) || !(s.eps_fp > 0.0) ||
            s.substeps < 2 || !(s.dt_min > 0.0) || !(s.dt_max >= s.dt_min) ||
            !(s.safety > 0.0) || !(s.growth_cap > 1.0)) {
            throw hht::ConfigError("invalid adaptive settings");
        }
        return s;
    }

    hht::PidParams pid() const {
        hht::PidParams p = hht::pid_profile(str("pid_profile"));
        p.eps_t = num("eps_t");
        return p;
    }

    hht::DiseaseParams disease_params() const {
        hht::DiseaseParams p = hht::disease_params_from_json(cfg["params"]);
        if (!cfg["S"].is_null()) p.S = cfg["S"].get<double>();
        return p;
    }
};

bool is_adaptive_solver(const std::string& id) {
    return id == "pidicn" || id == "aicn" || id == "ark4" || id == "airk4";
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

template <class M>
int simulate_model(const M& model, const Cli& cli, const std::vector<std::string>& state_cols) {
    const std::string solver = cli.str("solver");
    const std::string out = cli.out_path.empty() ? "trajectory.csv" : cli.out_path;
    hht::CsvWriter csv(out);

    std::vector<std::string> header = {"t"};
    header.insert(header.end(), state_cols.begin(), state_cols.end());
    header.insert(header.end(), {"iters", "converged", "dt"});

    long steps = 0, rejections = 0;
    std::map<int, long> iteration_histogram;

    if (is_adaptive_solver(solver)) {
        header.insert(header.end(), {"dt_star", "accepted", "rejections"});
        csv.row(header);
        hht::integrate_adaptive_observe(
            model, hht::parse_adaptive_scheme(solver), M::State::Zero(),
            cli.adaptive_settings(), cli.pid(),
            [&](double t, const typename M::State& u, const hht::AdaptiveStepMeta& meta) {
                auto row = csv.begin_row();
                row.col(t);
                for (int i = 0; i < M::dimension; ++i) row.col(u[i]);
                row.col(meta.iterations).col(meta.converged).col(meta.dt);
                row.col(meta.dt_star).col(meta.accepted).col(meta.rejections);
                if (meta.dt > 0) {
                    ++steps;
                    rejections += meta.rejections;
                    ++iteration_histogram[meta.iterations];
                }
            });
    } else if (solver == "rk45-baseline") {
        csv.row(header);
        hht::integrate_rk45_observe(
            model, M::State::Zero(), cli.num("T"), cli.num("tol"),
            [&, prev_t = 0.0](double t, const typename M::State& u) mutable {
                auto row = csv.begin_row();
                row.col(t);
                for (int i = 0; i < M::dimension; ++i) row.col(u[i]);
                row.col(0).col(true).col(t - prev_t);
                prev_t = t;
                if (t > 0) ++steps;
            },
            cli.num("dt"));
    } else {
        csv.row(header);
        hht::integrate_observe(
            model, hht::parse_scheme(solver), M::State::Zero(), cli.fixed_settings(),
            [&](double t, const typename M::State& u, const hht::StepMeta& meta) {
                auto row = csv.begin_row();
                row.col(t);
                for (int i = 0; i < M::dimension; ++i) row.col(u[i]);
                row.col(meta.iterations).col(meta.converged).col(meta.dt);
                if (meta.dt > 0) {
                    ++steps;
                    ++iteration_histogram[meta.iterations];
                }
            });
    }

    std::printf("wrote %s: %ld steps, %ld rejections\n", out.c_str(), steps, rejections);
    for (const auto& [iters, count] : iteration_histogram) {
        std::printf("  iterations=%d: %ld steps\n", iters, count);
    }
    return 0;
}

int cmd_simulate(const Cli& cli) {
    const std::string model = cli.str("model");
    if (model == "disease") {
        return simulate_model(hht::DiseaseModel(cli.disease_params()), cli,
                              {"x", "a_hi", "a_le", "a_li"});
    }
    if (!cli.cfg["S"].is_null()) {
        throw hht::ConfigError("--S applies to the disease model; use params for " + model);
    }
    if (model == "vdp") {
        return simulate_model(hht::VdpModel(hht::vdp_params_from_json(cli.cfg["params"])), cli,
                              {"x1", "x2"});
    }
    if (model == "fhn") {
        return simulate_model(hht::FhnModel(hht::fhn_params_from_json(cli.cfg["params"])), cli,
                              {"V", "w"});
    }
    if (model == "hh") {
        return simulate_model(hht::HodgkinHuxleyModel(hht::hh_params_from_json(cli.cfg["params"])),
                              cli, {"V", "n", "m", "h"});
    }
    throw hht::ConfigError("unknown model '" + model + "' (valid: disease, vdp, fhn, hh)");
}

// ---------------------------------------------------------------------------
// fixed points / eigenvalue sweep
// ---------------------------------------------------------------------------

int cmd_fixed_points(const Cli& cli, bool report_transitions) {
    const auto sweep = hht::eigenvalue_sweep(cli.num("s_min"), cli.num("s_max"),
                                             cli.num("s_step"), cli.disease_params());
    const std::string out = cli.out_path.empty() ? "fixed_points.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"S", "x_star", "a_hi", "a_le", "a_li", "re1", "im1", "re2", "im2", "re3", "im3",
             "re4", "im4"});
    for (const auto& fp : sweep.points) {
        auto row = csv.begin_row();
        row.col(fp.S).col(fp.x_star).col(fp.a_star[0]).col(fp.a_star[1]).col(fp.a_star[2]);
        for (const auto& ev : fp.eigenvalues) row.col(ev.real()).col(ev.imag());
    }
    std::printf("wrote %s: %zu fixed points\n", out.c_str(), sweep.points.size());
    if (report_transitions) {
        for (const auto& [a, b] : sweep.stability_sign_changes) {
            std::printf("max real part changes sign in S interval [%g, %g]\n", a, b);
        }
        for (const auto& [a, b] : sweep.real_to_complex_transitions) {
            std::printf("real/complex eigenvalue transition in S interval [%g, %g]\n", a, b);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// lyapunov
// ---------------------------------------------------------------------------

int cmd_lyapunov(const Cli& cli) {
    hht::LyapunovSettings ls;
    ls.horizon = cli.num("T");
    ls.transient = cli.num("transient");
    ls.renorm_interval = cli.num("renorm_interval");
    ls.dt = cli.num("dt");
    ls.scheme = hht::parse_scheme(cli.str("solver"));
    ls.eps_fp = cli.num("eps_fp");
    ls.max_fp_iters = cli.integer("max_iter");

    std::vector<double> grid;
    if (!cli.cfg["S"].is_null()) {
        grid.push_back(cli.cfg["S"].get<double>());
    } else {
        grid = hht::scan_grid(cli.num("s_min"), cli.num("s_max"), cli.num("s_step"));
    }
    std::vector<hht::DiseaseLyapunov> results(grid.size());
    std::vector<std::string> errors(grid.size());
    const hht::DiseaseParams base = cli.disease_params();
    hht::parallel_for_index(grid.size(), hht::resolve_threads(cli.integer("threads")),
                            [&](std::size_t i) {
                                try {
                                    results[i] = hht::disease_lyapunov(grid[i], base, ls);
                                } catch (const std::exception& e) {
                                    errors[i] = e.what();
                                }
                            });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!errors[i].empty()) {
            throw hht::NumericsError("lyapunov failed at S=" + std::to_string(grid[i]) + ": " +
                                     errors[i]);
        }
    }

    const std::string out = cli.out_path.empty() ? "lyapunov.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"S", "l1", "l2", "l3", "l4"});
    for (const auto& r : results) {
        csv.begin_row()
            .col(r.S)
            .col(r.spectrum.exponents[0])
            .col(r.spectrum.exponents[1])
            .col(r.spectrum.exponents[2])
            .col(r.spectrum.exponents[3]);
    }
    std::printf("wrote %s: %zu spectra\n", out.c_str(), results.size());
    return 0;
}

// ---------------------------------------------------------------------------
// poincare / isi-sweep
// ---------------------------------------------------------------------------

hht::SweepSettings sweep_settings(const Cli& cli, double s_lo, double s_hi, double s_step) {
    hht::SweepSettings s;
    s.s_min = s_lo;
    s.s_max = s_hi;
    s.s_step = s_step;
    s.scheme = hht::parse_scheme(cli.str("solver"));
    s.dt = cli.num("dt");
    s.horizon = cli.num("T");
    s.transient = cli.num("transient");
    s.plane_offset = cli.num("plane_offset");
    s.direction = hht::parse_direction(cli.str("direction"));
    s.eps_fp = cli.num("eps_fp");
    s.max_fp_iters = cli.integer("max_iter");
    s.threads = cli.integer("threads");
    if (!(s.transient < s.horizon)) throw hht::ConfigError("transient must be below T");
    return s;
}

int cmd_poincare(const Cli& cli) {
    double s_lo, s_hi, s_step;
    if (!cli.cfg["S"].is_null()) {
        s_lo = s_hi = cli.cfg["S"].get<double>();
        s_step = 1.0;
    } else {
        s_lo = cli.num("s_min");
        s_hi = cli.num("s_max");
        s_step = cli.num("s_step");
    }
    const auto diagram = hht::bifurcation_sweep(cli.disease_params(),
                                                sweep_settings(cli, s_lo, s_hi, s_step));
    const std::string out = cli.out_path.empty() ? "poincare.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"S", "t", "x", "a_hi", "a_le", "a_li"});
    std::size_t total = 0;
    for (const auto& entry : diagram.entries) {
        if (entry.failed) throw hht::NumericsError("sweep failed at S=" +
                                                   std::to_string(entry.S) + ": " + entry.error);
        for (const auto& c : entry.crossings) {
            csv.begin_row().col(entry.S).col(c.t).col(c.state[0]).col(c.state[1])
                .col(c.state[2]).col(c.state[3]);
            ++total;
        }
    }
    std::printf("wrote %s: %zu crossings\n", out.c_str(), total);
    return 0;
}

int cmd_isi_sweep(const Cli& cli) {
    const auto diagram = hht::bifurcation_sweep(
        cli.disease_params(),
        sweep_settings(cli, cli.num("s_min"), cli.num("s_max"), cli.num("s_step")));
    const std::string out = cli.out_path.empty() ? "isi.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"S", "isi"});
    std::size_t total = 0, failures = 0;
    for (const auto& entry : diagram.entries) {
        if (entry.failed) {
            ++failures;
            std::fprintf(stderr, "S=%g failed: %s\n", entry.S, entry.error.c_str());
            continue;
        }
        for (double isi : entry.isis) {
            csv.begin_row().col(entry.S).col(isi);
            ++total;
        }
    }
    std::printf("wrote %s: %zu intervals (%zu failed S values)\n", out.c_str(), total, failures);

    const auto report = hht::detect_branch_points(diagram, cli.num("cluster_tol"));
    for (const auto& ev : report.events) {
        std::printf("cluster count %d -> %d at S=%g\n", ev.clusters_before, ev.clusters_after,
                    ev.S);
    }
    if (report.feigenbaum_ratio) {
        std::printf("period-doubling interval ratio: %.6f\n", *report.feigenbaum_ratio);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// converge / norms / bench
// ---------------------------------------------------------------------------

template <class M>
int converge_model(const M& model, const Cli& cli) {
    const auto report = hht::convergence_study(
        model, hht::parse_scheme(cli.str("solver")), M::State::Zero(), cli.num("dt0"),
        cli.integer("levels"), cli.num("T"), cli.num("eps_fp"), cli.integer("max_iter"));
    const std::string out = cli.out_path.empty() ? "convergence.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"level", "dt", "integral_error", "runtime_ns"});
    for (const auto& level : report.levels) {
        csv.begin_row()
            .col(level.level)
            .col(level.dt)
            .col(level.integral_error)
            .col(static_cast<long long>(level.runtime_ns));
    }
    if (report.aborted) {
        throw hht::NumericsError("convergence study aborted: " + report.abort_reason);
    }
    std::printf("wrote %s: fitted order %.4f\n", out.c_str(), report.slope);
    return 0;
}

int cmd_converge(const Cli& cli) {
    const std::string model = cli.str("model");
    if (model == "disease") return converge_model(hht::DiseaseModel(cli.disease_params()), cli);
    if (model == "vdp")
        return converge_model(hht::VdpModel(hht::vdp_params_from_json(cli.cfg["params"])), cli);
    if (model == "fhn")
        return converge_model(hht::FhnModel(hht::fhn_params_from_json(cli.cfg["params"])), cli);
    if (model == "hh")
        return converge_model(
            hht::HodgkinHuxleyModel(hht::hh_params_from_json(cli.cfg["params"])), cli);
    throw hht::ConfigError("unknown model '" + model + "'");
}

int cmd_norms(const Cli& cli) {
    const hht::DiseaseModel model(cli.disease_params());
    const double S = model.params().S;
    std::vector<std::string> solvers;
    if (cli.cfg.contains("solver") && cli.cfg["solver"].is_string() &&
        cli.cfg["solver"].get<std::string>() != "all") {
        solvers.push_back(cli.cfg["solver"].get<std::string>());
    } else {
        solvers = {"isie", "icn", "isv", "mmrk4", "irk4", "pidicn", "aicn", "ark4", "airk4"};
    }

    const std::string out = cli.out_path.empty() ? "norms.csv" : cli.out_path;
    hht::CsvWriter csv(out);
    csv.row({"scheme", "S", "global_state_norm", "global_derivative_norm", "expectation",
             "variance"});
    for (const auto& id : solvers) {
        hht::NormAccumulator<4> acc;
        if (is_adaptive_solver(id)) {
            hht::integrate_adaptive_observe(
                model, hht::parse_adaptive_scheme(id), hht::Vec4::Zero(),
                cli.adaptive_settings(), cli.pid(),
                [&](double t, const hht::Vec4& u, const hht::AdaptiveStepMeta&) {
                    acc.feed(t, u);
                });
        } else {
            hht::FixedStepSettings s = cli.fixed_settings();
            hht::integrate_observe(model, hht::parse_scheme(id), hht::Vec4::Zero(), s,
                                   [&](double t, const hht::Vec4& u, const hht::StepMeta&) {
                                       acc.feed(t, u);
                                   });
        }
        csv.begin_row()
            .col(id)
            .col(S)
            .col(acc.global_state_norm())
            .col(acc.global_derivative_norm())
            .col(acc.mean_local_state_norm())
            .col(acc.variance_local_state_norm());
        std::printf("%s: state %.6f derivative %.6f expectation %.6f variance %.6f\n",
                    id.c_str(), acc.global_state_norm(), acc.global_derivative_norm(),
                    acc.mean_local_state_norm(), acc.variance_local_state_norm());
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_bench(const Cli& cli) {
    const hht::DiseaseModel model(cli.disease_params());
    const std::string id = cli.str("solver");
    const int reps = cli.integer("repetitions");

    auto job = [&] {
        if (is_adaptive_solver(id)) {
            hht::integrate_adaptive_observe(model, hht::parse_adaptive_scheme(id),
                                            hht::Vec4::Zero(), cli.adaptive_settings(),
                                            cli.pid(),
                                            [](double, const hht::Vec4&,
                                               const hht::AdaptiveStepMeta&) {});
        } else {
            hht::integrate_observe(model, hht::parse_scheme(id), hht::Vec4::Zero(),
                                   cli.fixed_settings(),
                                   [](double, const hht::Vec4&, const hht::StepMeta&) {});
        }
    };
    const auto r = hht::runtime_benchmark(job, reps);
    std::printf("%s S=%g: min %.6f s, mean %.6f s, max %.6f s over %d repetitions\n",
                id.c_str(), model.params().S, r.min_s, r.mean_s, r.max_s, r.repetitions);
    if (!cli.out_path.empty()) {
        hht::CsvWriter csv(cli.out_path);
        csv.row({"scheme", "S", "min_s", "mean_s", "max_s", "repetitions"});
        csv.begin_row()
            .col(id)
            .col(model.params().S)
            .col(r.min_s)
            .col(r.mean_s)
            .col(r.max_s)
            .col(r.repetitions);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

int cmd_plot(const std::string& in_path, const std::string& kind, const std::string& x_col,
             const std::string& y_col, const std::string& out_path) {
    const auto table = hht::read_csv(in_path);
    const int xi = table.column_index(x_col);
    const int yi = table.column_index(y_col);
    if (xi < 0) throw hht::ConfigError("CSV has no column '" + x_col + "'");
    if (yi < 0) throw hht::ConfigError("CSV has no column '" + y_col + "'");
    std::vector<double> xs, ys;
    xs.reserve(table.rows.size());
    ys.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (static_cast<int>(row.size()) <= std::max(xi, yi)) continue;
        xs.push_back(row[xi]);
        ys.push_back(row[yi]);
    }
    const std::string out = out_path.empty() ? "plot.svg" : out_path;
    hht::write_svg_plot(out, xs, ys, x_col, y_col, hht::parse_plot_kind(kind));
    std::printf("wrote %s: %zu points\n", out.c_str(), xs.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Cli cli;
    cli.app.require_subcommand(1);

    auto* sim = cli.app.add_subcommand("simulate", "integrate one trajectory and write CSV");
    auto* fps = cli.app.add_subcommand("fixed-points", "fixed points and eigenvalues over S");
    auto* eig = cli.app.add_subcommand("eigen-sweep",
                                       "fixed-point sweep plus eigenvalue transition report");
    auto* lya = cli.app.add_subcommand("lyapunov", "Lyapunov spectra over S");
    auto* poi = cli.app.add_subcommand("poincare", "plane crossings of disease trajectories");
    auto* isi = cli.app.add_subcommand("isi-sweep", "interspike-interval bifurcation data");
    auto* con = cli.app.add_subcommand("converge", "step-halving convergence study");
    auto* nor = cli.app.add_subcommand("norms", "global norms and local-norm statistics");
    auto* ben = cli.app.add_subcommand("bench", "wall-clock benchmark of one solver");
    auto* plo = cli.app.add_subcommand("plot", "render a CSV as an SVG scatter/line plot");

    for (auto* cmd : {sim, fps, eig, lya, poi, isi, con, nor, ben}) cli.add_common(cmd);

    std::string plot_in, plot_kind = "scatter", plot_x, plot_y;
    plo->add_option("--in", plot_in, "input CSV")->required();
    plo->add_option("--kind", plot_kind, "scatter or line");
    plo->add_option("--x", plot_x, "x column name")->required();
    plo->add_option("--y", plot_y, "y column name")->required();
    plo->add_option("--out", cli.out_path, "output SVG path");

    CLI11_PARSE(cli.app, argc, argv);

    try {
        if (plo->parsed()) return cmd_plot(plot_in, plot_kind, plot_x, plot_y, cli.out_path);
        CLI::App* active = cli.app.get_subcommands().front();
        cli.finalize(active);
        if (sim->parsed()) return cmd_simulate(cli);
        if (fps->parsed()) return cmd_fixed_points(cli, false);
        if (eig->parsed()) return cmd_fixed_points(cli, true);
        if (lya->parsed()) return cmd_lyapunov(cli);
        if (poi->parsed()) return cmd_poincare(cli);
        if (isi->parsed()) return cmd_isi_sweep(cli);
        if (con->parsed()) return cmd_converge(cli);
        if (nor->parsed()) return cmd_norms(cli);
        if (ben->parsed()) return cmd_bench(cli);
    } catch (const hht::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const hht::NumericsError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
