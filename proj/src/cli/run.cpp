#include "splitlab/cli/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "splitlab/analysis/bounds.hpp"
#include "splitlab/analysis/diagnostics.hpp"
#include "splitlab/analysis/studies.hpp"
#include "splitlab/cli/config.hpp"
#include "splitlab/detail/parallel.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/kpp.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab::cli {

std::string usage() {
    return "usage: splitlab <subcommand> [--config FILE] [--key value ...]\n"
           "subcommands: local-error, global-error, simulate, bounds, wave-speed, bracket\n"
           "keys: k, D, kD-unit, x0, x-min, x-max, n-points, schemes, scheme, dt-list, dt-min, dt-max,\n"
           "      count, log-spaced, dt, t-final, snapshot-every, level, tol, ref-tol, max-substeps, output\n";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

struct Problem {
    Grid grid;
    ReactionModel model;
    DiffusionCoefficient D;
    WaveParameters wave;
    GridField u0;
};

Problem make_problem(const StudyConfig& cfg) {
    Grid grid(cfg.x_min, cfg.x_max, cfg.n_points);
    WaveParameters wave{cfg.k, cfg.D, cfg.x0};
    GridField u0 = kpp_wave_profile(grid, wave);
    return {grid, zeldovich_model(cfg.k), DiffusionCoefficient(cfg.D), wave, std::move(u0)};
}

void write_study_rows(std::ostream& os, const std::vector<ErrorStudyReport>& reports) {
    os << "scheme,dt,err_l2,err_linf,bound_classical,bound_alt15,bound_alt1,bound_effective,status\n";
    for (const auto& r : reports) {
        const bool lie = is_lie(r.scheme);
        for (const StudyRow& row : r.rows) {
            const BoundSet& b = row.bounds;
            os << to_string(r.scheme) << ',' << num(row.dt) << ',' << num(row.err_l2) << ',' << num(row.err_linf) << ','
               << num(lie ? b.classical : b.strang_classical) << ',' << num(lie ? b.alt_15 : b.strang_alt) << ','
               << num(b.alt_1) << ',' << num(b.effective) << ',' << row.status << '\n';
        }
    }
    os << "scheme,slope,window_lo,window_hi\n";
    for (const auto& r : reports)
        for (const SlopeFit& s : r.fitted_slopes)
            os << to_string(r.scheme) << ',' << num(s.slope) << ',' << num(s.window_lo) << ',' << num(s.window_hi)
               << '\n';
}

FlowTolerances tolerances(double tol, const StudyConfig& cfg) {
    FlowTolerances t = FlowTolerances::uniform(tol);
    t.max_substeps = static_cast<int>(cfg.max_substeps);
    return t;
}
FlowTolerances split_tolerances(const StudyConfig& cfg) { return tolerances(cfg.tol, cfg); }
FlowTolerances reference_tolerances(const StudyConfig& cfg) { return tolerances(cfg.ref_tol, cfg); }

void run_local(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    StudyOptions opt;
    opt.threads = threads_from_environment();
    write_study_rows(os, local_error_study(p.u0, cfg.dt_list, *cfg.schemes, p.model, p.D, split_tolerances(cfg),
                                           reference_tolerances(cfg), opt));
}

void run_global(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    StudyOptions opt;
    opt.threads = threads_from_environment();
    std::vector<ErrorStudyReport> reports;
    for (SchemeId s : *cfg.schemes)
        reports.push_back(global_error_study(p.u0, cfg.dt_list, s, *cfg.t_final, p.model, p.D, split_tolerances(cfg),
                                             reference_tolerances(cfg), opt));
    write_study_rows(os, reports);
}

void run_bounds(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    const BoundInputs in = bound_inputs(p.model, p.D, p.u0);
    os << "scheme,dt,bound_classical,bound_alt15,bound_alt1,bound_strang_classical,bound_strang_alt,bound_effective\n";
    for (SchemeId s : *cfg.schemes)
        for (double dt : cfg.dt_list) {
            const BoundSet b = evaluate_bounds(s, dt, in);
            os << to_string(s) << ',' << num(dt) << ',' << num(b.classical) << ',' << num(b.alt_15) << ','
               << num(b.alt_1) << ',' << num(b.strang_classical) << ',' << num(b.strang_alt) << ','
               << num(b.effective) << '\n';
        }
}

void run_bracket(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    const GridField bracket = lie_bracket_field(p.model, p.D, p.u0);
    os << "x,u,bracket\n";
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        os << num(p.grid.x(i)) << ',' << num(p.u0[i]) << ',' << num(bracket[i]) << '\n';
}

void write_snapshot(const std::filesystem::path& dir, double t, const GridField& u) {
    char name[64];
    std::snprintf(name, sizeof name, "snap_t%.6f.csv", t);
    std::ofstream f(dir / name);
    if (!f) throw InvalidArgument("cannot write snapshot " + (dir / name).string());
    f << "x,u\n";
    for (std::size_t i = 0; i < u.grid().size(); ++i) f << num(u.grid().x(i)) << ',' << num(u[i]) << '\n';
}

void run_simulate(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    const std::filesystem::path dir = cfg.output.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.output);
    std::filesystem::create_directories(dir);
    const std::size_t stride = step_count(cfg.snapshot_every, *cfg.dt);
    const SchemeId scheme = cfg.schemes->front();

    std::vector<std::pair<double, GridField>> snaps{{0.0, p.u0}};
    const GridField final_field =
        evolve(p.u0, *cfg.t_final, *cfg.dt, scheme, p.model, p.D, split_tolerances(cfg),
               [&](std::size_t step, double t, const GridField& u) {
                   if (step % stride == 0) snaps.emplace_back(t, u);
               });
    (void)final_field;
    for (const auto& [t, u] : snaps) write_snapshot(dir, t, u);

    os << "t,front_position\n";
    for (const auto& [t, u] : snaps) os << num(t) << ',' << num(front_position(u, cfg.level)) << '\n';
}

void run_wave_speed(const StudyConfig& cfg, std::ostream& os) {
    const Problem p = make_problem(cfg);
    const FlowTolerances tol = split_tolerances(cfg);
    const std::size_t n = step_count(*cfg.t_final, cfg.snapshot_every);
    std::vector<std::pair<double, GridField>> snaps{{0.0, p.u0}};
    for (std::size_t i = 1; i <= n; ++i)
        snaps.emplace_back(static_cast<double>(i) * cfg.snapshot_every,
                           coupled_flow(snaps.back().second, cfg.snapshot_every, p.model, p.D, tol));
    os << "t,front_position\n";
    for (const auto& [t, u] : snaps) os << num(t) << ',' << num(front_position(u, cfg.level)) << '\n';
    os << "speed,expected\n" << num(wave_speed_estimate(snaps, cfg.level)) << ',' << num(p.wave.speed()) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << usage();
        return kExitInvalid;
    }
    if (args[0] == "-h" || args[0] == "--help") {
        out << usage();
        return kExitOk;
    }
    const std::optional<Mode> mode = parse_mode(args[0]);
    if (!mode || args[0] == "local" || args[0] == "global") {
        err << "unknown subcommand '" << args[0] << "'\n" << usage();
        return kExitInvalid;
    }

    CLI::App app{"splitlab " + args[0]};
    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file");
    std::map<std::string, std::string> given;
    for (const std::string& key : config_keys()) {
        if (key == "mode") continue;
        CLI::Option* opt = app.add_option("--" + dashed(key), given[key]);
        if (key == "kD_unit" || key == "log_spaced") opt->expected(0, 1)->default_str("true");
    }

    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << usage();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << usage();
        return kExitInvalid;
    }

    StudyConfig cfg;
    std::ostringstream buffer;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw InvalidArgument("cannot read config file '" + config_path + "'");
            std::stringstream text;
            text << f.rdbuf();
            apply_config_text(cfg, text.str());
        }
        cfg.mode = *mode;
        for (const std::string& key : config_keys()) {
            if (key == "mode") continue;
            if (app.get_option("--" + dashed(key))->count() > 0)
                apply_setting(cfg, key, given[key], "--" + dashed(key));
        }
        cfg = resolve(std::move(cfg));

        switch (cfg.mode) {
            case Mode::Local: run_local(cfg, buffer); break;
            case Mode::Global: run_global(cfg, buffer); break;
            case Mode::Simulate: run_simulate(cfg, buffer); break;
            case Mode::Bounds: run_bounds(cfg, buffer); break;
            case Mode::WaveSpeed: run_wave_speed(cfg, buffer); break;
            case Mode::Bracket: run_bracket(cfg, buffer); break;
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const InsufficientPoints& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }

    // Simulate writes snapshot files into the output directory and the front track to stdout.
    if (cfg.output.empty() || cfg.mode == Mode::Simulate) {
        out << buffer.str();
    } else {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) {
            err << "error: cannot write '" << cfg.output << "'\n";
            return kExitInvalid;
        }
        f << buffer.str();
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace splitlab::cli
