//==============================================================================
// cli.cpp
// The `kakinuma` command line: dispersion tables, initial-data preparation,
// time stepping, state diagnostics, and a built-in selftest.  Every output
// directory receives a manifest and a copy of the resolved configuration.
//==============================================================================
#include "kakinuma/cli.hpp"

#include "kakinuma/csvio.hpp"
#include "kakinuma/diagnostics.hpp"
#include "kakinuma/errors.hpp"
#include "kakinuma/evolution.hpp"
#include "kakinuma/lintheory.hpp"
#include "kakinuma/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace kakinuma {
namespace {

//------------------------------------------------------------------- plumbing

int read_thread_cap() {
    const char* env = std::getenv("KAKINUMA_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || v < 1)
        throw ConfigError("KAKINUMA_THREADS must be a positive integer, got '" +
                          std::string(env) + "'");
    return static_cast<int>(v);
}

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

std::string run_id(const std::string& command, const std::string& resolved) {
    // FNV-1a 64-bit over the command name and the resolved configuration, so
    // identical runs share an id.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    mix(command);
    mix(resolved);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const fs::path& outdir, const std::string& command,
                    const std::string& config_path, const Config& cfg) {
    fs::create_directories(outdir);
    const std::string resolved = resolved_config_json(cfg);
    {
        std::ofstream out(outdir / "config.json");
        out << resolved << "\n";
    }
    std::ofstream out(outdir / "manifest.json");
    out << "{\n"
        << "  \"tool\": \"kakinuma 1.0.0\",\n"
        << "  \"command\": \"" << command << "\",\n"
        << "  \"config_path\": \"" << config_path << "\",\n"
        << "  \"run_id\": \"" << run_id(command, resolved) << "\",\n"
        << "  \"output_directory\": \"" << outdir.string() << "\",\n"
        << "  \"wall_clock\": \"" << iso_now() << "\"\n"
        << "}\n";
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "state_%.6f.csv", t);
    return buf;
}

//---------------------------------------------------------------- subcommands

int cmd_dispersion(const Config& cfg, const fs::path& outdir, double xi_min,
                   double xi_max, int samples) {
    auto table = dispersion_table(cfg.model, xi_min, xi_max, samples);
    Table csv;
    csv.header = {"xi", "cK2", "cIW2", "cSW2", "rel_error"};
    for (const auto& s : table)
        csv.rows.push_back({s.xi, s.cK2, s.cIW2, s.cSW2, s.rel_error});
    write_csv((outdir / "dispersion.csv").string(), csv);

    double order = std::numeric_limits<double>::quiet_NaN();
    try {
        order = convergence_order_scan(cfg.model, xi_min, xi_max, samples);
    } catch (const DegenerateFit&) {
        // error at rounding level across the scan; leave the order as NaN
    }
    const double hsum = cfg.model.h1 + cfg.model.h2;
    Table scan;
    scan.header = {"xi", "h_xi", "rel_error", "fitted_order"};
    for (const auto& s : table)
        scan.rows.push_back({s.xi, hsum * s.xi, s.rel_error, order});
    write_csv((outdir / "order_scan.csv").string(), scan);
    std::cout << "dispersion: " << table.size() << " samples, fitted order "
              << format_g17(order) << "\n";
    return 0;
}

int cmd_prepare(const Config& cfg, const fs::path& outdir,
                const std::string& input) {
    Grid1D grid(cfg.num.L, cfg.num.M);
    CanonicalState canon = read_canonical_csv(input, grid);
    Field b = make_bottom(cfg.num.bottom, grid);
    State state = prepare_initial_data(cfg.model, cfg.num, canon, b);
    write_state_csv((outdir / "state.csv").string(), state);
    std::cout << "prepare: wrote " << (outdir / "state.csv").string() << "\n";
    return 0;
}

int cmd_simulate(const Config& cfg, const fs::path& outdir,
                 const std::string& input, const std::string& state_input) {
    Grid1D grid(cfg.num.L, cfg.num.M);
    auto on_snapshot = [&outdir](double t, const State& s) {
        write_state_csv((outdir / snapshot_name(t)).string(), s);
    };
    SimResult result;
    if (!state_input.empty()) {
        State initial = read_state_csv(state_input, grid, cfg.model);
        result = simulate(cfg, initial, on_snapshot);
    } else if (!input.empty()) {
        CanonicalState initial = read_canonical_csv(input, grid);
        result = simulate(cfg, initial, on_snapshot);
    } else {
        throw ConfigError("simulate needs --input (canonical CSV) or "
                          "--state-input (state CSV)");
    }

    Table series;
    series.header = {"t",           "mass",           "energy",
                     "momentum",    "hamiltonian",    "stability_margin",
                     "compat_residual", "min_H1",     "min_H2"};
    for (const auto& r : result.series)
        series.rows.push_back({r.t, r.mass, r.energy, r.momentum, r.hamiltonian,
                               r.stability_margin, r.compat_residual, r.min_H1,
                               r.min_H2});
    write_csv((outdir / "series.csv").string(), series);
    write_state_csv((outdir / "state_final.csv").string(), result.final_state);

    if (result.aborted) {
        std::cerr << "simulate: aborted at t=" << format_g17(result.t_final)
                  << ": " << result.abort_reason << "\n";
        return 3;
    }
    std::cout << "simulate: reached t=" << format_g17(result.t_final) << ", "
              << result.series.size() << " series rows\n";
    return 0;
}

void write_stability_csv(const Config& cfg, const State& state, const Field& b,
                         const fs::path& path) {
    Grid1D grid = state.zeta.grid;
    Geometry geom = make_geometry(cfg.model, state.zeta, b, cfg.num.h_min);
    OperatorContext ctx(cfg.model, geom);
    TimeDerivatives derivs = compute_time_derivatives(cfg.model, cfg.num, state,
                                                      b, cfg.num.epsilon);
    StabilityContext sc = stability_context(ctx, state.phi1, state.phi2, derivs);
    Table csv;
    csv.header = {"x", "a", "margin"};
    for (int i = 0; i < grid.points; ++i)
        csv.rows.push_back({grid.node(i), sc.a.v[i], sc.margin.v[i]});
    write_csv(path.string(), csv);
}

// Local conservation-law residuals from a directory of equally spaced
// snapshots: the time derivative of the densities is a centered difference of
// neighbouring snapshots, the flux divergence is evaluated on the middle one.
void process_series(const Config& cfg, const fs::path& series_dir,
                    const fs::path& outdir) {
    Grid1D grid(cfg.num.L, cfg.num.M);
    std::vector<std::pair<double, fs::path>> snaps;
    for (const auto& entry : fs::directory_iterator(series_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("state_", 0) != 0 || name == "state_final.csv") continue;
        snaps.emplace_back(std::atof(name.c_str() + 6), entry.path());
    }
    std::sort(snaps.begin(), snaps.end());
    if (snaps.size() < 3)
        throw ConfigError("--series needs at least three state_<t>.csv files in " +
                          series_dir.string());

    Field b = make_bottom(cfg.num.bottom, grid);
    const bool flat = cfg.num.bottom.type == BottomSpec::Type::Flat;
    Table csv;
    csv.header = {"t", "energy_residual", "momentum_residual"};
    for (std::size_t m = 1; m + 1 < snaps.size(); ++m) {
        const double dt2 = snaps[m + 1].first - snaps[m - 1].first;
        State sm = read_state_csv(snaps[m - 1].second.string(), grid, cfg.model);
        State smid = read_state_csv(snaps[m].second.string(), grid, cfg.model);
        State sp = read_state_csv(snaps[m + 1].second.string(), grid, cfg.model);

        auto make_ctx = [&](const State& s) {
            return OperatorContext(cfg.model,
                                   make_geometry(cfg.model, s.zeta, b,
                                                 cfg.num.h_min));
        };
        OperatorContext cm = make_ctx(sm), cmid = make_ctx(smid),
                        cp = make_ctx(sp);
        TimeDerivatives dc = compute_time_derivatives(cfg.model, cfg.num, smid,
                                                      b, cfg.num.epsilon);

        Field em = energy_density(cm, sm.phi1, sm.phi2);
        Field ep = energy_density(cp, sp.phi1, sp.phi2);
        Field fe = energy_flux(cmid, smid.phi1, smid.phi2, dc.g1, dc.g2);
        double er = 0.0;
        Field dfe = spectral_derivative(fe);
        for (int i = 0; i < grid.points; ++i) {
            double r = (ep.v[i] - em.v[i]) / dt2 + dfe.v[i];
            er += r * r;
        }
        er = std::sqrt(er / grid.points);

        double mr = std::numeric_limits<double>::quiet_NaN();
        if (flat) {
            MomentumPair pm = momentum_and_flux(cm, sm.phi1, sm.phi2,
                                                Field(grid), sm.phi1, sm.phi2);
            MomentumPair pp = momentum_and_flux(cp, sp.phi1, sp.phi2,
                                                Field(grid), sp.phi1, sp.phi2);
            MomentumPair pc = momentum_and_flux(cmid, smid.phi1, smid.phi2,
                                                dc.g0, dc.g1, dc.g2);
            Field dfm = spectral_derivative(pc.flux);
            mr = 0.0;
            for (int i = 0; i < grid.points; ++i) {
                double r =
                    (pp.density.v[i] - pm.density.v[i]) / dt2 + dfm.v[i];
                mr += r * r;
            }
            mr = std::sqrt(mr / grid.points);
        }
        csv.rows.push_back({snaps[m].first, er, mr});
    }
    write_csv((outdir / "local_laws.csv").string(), csv);
}

int cmd_diagnose(const Config& cfg, const fs::path& outdir,
                 const std::string& input, bool stability,
                 const std::string& series_dir) {
    if (!series_dir.empty()) {
        process_series(cfg, series_dir, outdir);
        std::cout << "diagnose: wrote " << (outdir / "local_laws.csv").string()
                  << "\n";
        return 0;
    }
    if (input.empty())
        throw ConfigError("diagnose needs --input (state CSV) or --series");
    Grid1D grid(cfg.num.L, cfg.num.M);
    State state = read_state_csv(input, grid, cfg.model);
    Field b = make_bottom(cfg.num.bottom, grid);
    SeriesRow row = diagnostics_row(cfg.model, cfg.num, state, b, 0.0);

    Table csv;
    csv.header = {"t",           "mass",           "energy",
                  "momentum",    "hamiltonian",    "stability_margin",
                  "compat_residual", "min_H1",     "min_H2"};
    csv.rows.push_back({row.t, row.mass, row.energy, row.momentum,
                        row.hamiltonian, row.stability_margin,
                        row.compat_residual, row.min_H1, row.min_H2});
    write_csv((outdir / "diagnostics.csv").string(), csv);
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        std::cout << csv.header[i] << (i + 1 < csv.header.size() ? "," : "\n");
    for (std::size_t i = 0; i < csv.rows[0].size(); ++i)
        std::cout << format_g17(csv.rows[0][i])
                  << (i + 1 < csv.rows[0].size() ? "," : "\n");

    if (stability)
        write_stability_csv(cfg, state, b, outdir / "stability.csv");
    return 0;
}

//------------------------------------------------------------------- selftest

int cmd_selftest(const Config& cfg) {
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok,
                             const std::string& detail = "") {
        std::cout << "selftest: " << name << " ... " << (ok ? "ok" : "FAIL");
        if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    // Exact vertical-profile constants for the three standard expansions.
    {
        ModelParams p = cfg.model;
        p.N = 0;
        p.p_list = {0};
        bool ok = alpha_constant(build_matrices(p, Layer::Upper)) == Rational(1);
        p.N = 1;
        ok = ok &&
             alpha_constant(build_matrices(p, Layer::Upper)) == Rational(1, 6);
        p.p_list = {0, 1};
        ok = ok &&
             alpha_constant(build_matrices(p, Layer::Lower)) == Rational(1, 4);
        check("profile constants 1, 1/6, 1/4", ok);
    }

    // Spectral differentiation is exact on a resolved mode.
    {
        Grid1D grid(cfg.num.L, cfg.num.M);
        const double k = 2.0 * M_PI * 3.0 / grid.length;
        Field f(grid), g(grid);
        for (int i = 0; i < grid.points; ++i) {
            f.v[i] = std::sin(k * grid.node(i));
            g.v[i] = k * std::cos(k * grid.node(i));
        }
        Field df = spectral_derivative(f);
        df -= g;
        check("spectral derivative", max_abs(df) < 1e-10 * k);
    }

    // Long-wave limit of the model phase speed.
    {
        const double c0 = shallow_limit_speed2(cfg.model);
        const double ck = phase_speed_kakinuma(1e-8 / (cfg.model.h1 + cfg.model.h2),
                                               cfg.model);
        check("long-wave phase speed", std::abs(ck - c0) <= 1e-8 * c0);
    }

    // The rest state stays at rest and has the hydrostatic interface
    // coefficient.
    {
        Grid1D grid(cfg.num.L, cfg.num.M);
        Field b = make_bottom(cfg.num.bottom, grid);
        CanonicalState rest{Field(grid), Field(grid)};
        State state = prepare_initial_data(cfg.model, cfg.num, rest, b);
        TimeDerivatives derivs = compute_time_derivatives(
            cfg.model, cfg.num, state, b, cfg.num.epsilon);
        Geometry geom = make_geometry(cfg.model, state.zeta, b, cfg.num.h_min);
        OperatorContext ctx(cfg.model, geom);
        Field a = compute_a(ctx, state.phi1, state.phi2, derivs);
        const double a_exact = (cfg.model.rho2 - cfg.model.rho1) * cfg.model.grav;
        double coeff = 0.0;
        for (const auto& f : state.phi1) coeff = std::max(coeff, max_abs(f));
        for (const auto& f : state.phi2) coeff = std::max(coeff, max_abs(f));
        Field da = a;
        for (double& x : da.v) x -= a_exact;
        check("rest state",
              max_abs(derivs.g0) < 1e-12 && coeff < 1e-12 &&
                  max_abs(da) < 1e-10 * a_exact);
    }

    // prepare -> diagnose consistency: the energy of the recovered state
    // equals the Hamiltonian of the canonical data.
    {
        Grid1D grid(cfg.num.L, cfg.num.M);
        Field b = make_bottom(cfg.num.bottom, grid);
        const double k = 2.0 * M_PI / grid.length;
        CanonicalState canon{Field(grid), Field(grid)};
        const double amp = 0.01 * cfg.model.h1;
        for (int i = 0; i < grid.points; ++i) {
            canon.zeta.v[i] = amp * std::cos(k * grid.node(i));
            canon.phi.v[i] =
                amp * cfg.model.rho1 * cfg.model.grav * std::sin(k * grid.node(i));
        }
        State state = prepare_initial_data(cfg.model, cfg.num, canon, b);
        SeriesRow row = diagnostics_row(cfg.model, cfg.num, state, b, 0.0);
        check("energy equals Hamiltonian",
              std::abs(row.energy - row.hamiltonian) <=
                  1e-10 * std::abs(row.hamiltonian),
              "energy=" + format_g17(row.energy) +
                  " hamiltonian=" + format_g17(row.hamiltonian));
        check("constraint residual",
              row.compat_residual < 1e-7 * amp * cfg.model.grav);
    }

    if (failures > 0) {
        std::cerr << "selftest: " << failures << " check(s) failed\n";
        return 4;
    }
    std::cout << "selftest: all checks passed\n";
    return 0;
}

} // namespace

//-------------------------------------------------------------------- run_cli

int run_cli(int argc, char** argv) {
    CLI::App app{"Two-layer interfacial wave laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string outdir_str = "out";
    std::string input, state_input, series_dir, scheme_str;
    double xi_min = 0.0, xi_max = 0.0;
    int samples = 25;
    int reproject_every = -1;
    bool stability = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration JSON")
            ->required();
        sub->add_option("--output-dir", outdir_str, "output directory");
    };

    CLI::App* disp = app.add_subcommand("dispersion", "phase-speed tables");
    add_common(disp);
    disp->add_option("--xi-min", xi_min, "lowest wavenumber");
    disp->add_option("--xi-max", xi_max, "highest wavenumber");
    disp->add_option("--samples", samples, "number of wavenumbers");

    CLI::App* prep = app.add_subcommand("prepare", "constraint-consistent state "
                                                   "from canonical data");
    add_common(prep);
    prep->add_option("--input", input, "canonical CSV (x,zeta,phi)")->required();

    CLI::App* sim = app.add_subcommand("simulate", "time stepping");
    add_common(sim);
    sim->add_option("--input", input, "canonical CSV initial data");
    sim->add_option("--state-input", state_input, "full state CSV initial data");
    sim->add_option("--scheme", scheme_str, "canonical|direct");
    sim->add_option("--reproject-every", reproject_every,
                    "constraint re-solve cadence (direct scheme)");

    CLI::App* diag = app.add_subcommand("diagnose", "conserved-quantity report");
    add_common(diag);
    diag->add_option("--input", input, "state CSV");
    diag->add_flag("--stability", stability, "emit pointwise stability CSV");
    diag->add_option("--series", series_dir, "snapshot directory for "
                                             "conservation-law residuals");

    CLI::App* self = app.add_subcommand("selftest", "built-in invariant checks");
    add_common(self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        read_thread_cap(); // validated; the current build is single-threaded
        Config cfg = load_config(config_path);
        if (!scheme_str.empty()) {
            if (scheme_str == "canonical")
                cfg.num.scheme = Scheme::Canonical;
            else if (scheme_str == "direct")
                cfg.num.scheme = Scheme::Direct;
            else
                throw ConfigError("--scheme must be 'canonical' or 'direct', "
                                  "got '" + scheme_str + "'");
        }
        if (reproject_every > 0) cfg.num.reproject_every = reproject_every;
        if (xi_min <= 0.0) xi_min = 1e-2 / (cfg.model.h1 + cfg.model.h2);
        if (xi_max <= 0.0) xi_max = 1e-1 / (cfg.model.h1 + cfg.model.h2);

        const std::string command = app.get_subcommands().front()->get_name();
        fs::path outdir(outdir_str);
        if (command != "selftest")
            write_manifest(outdir, command, config_path, cfg);

        if (command == "dispersion")
            return cmd_dispersion(cfg, outdir, xi_min, xi_max, samples);
        if (command == "prepare") return cmd_prepare(cfg, outdir, input);
        if (command == "simulate")
            return cmd_simulate(cfg, outdir, input, state_input);
        if (command == "diagnose")
            return cmd_diagnose(cfg, outdir, input, stability, series_dir);
        if (command == "selftest") return cmd_selftest(cfg);
        throw ConfigError("unknown subcommand " + command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const StabilityViolated& e) {
        std::cerr << "stability abort: " << e.what() << "\n";
        return 3;
    } catch (const NonCavitation& e) {
        std::cerr << "cavitation abort: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace kakinuma
