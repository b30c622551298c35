// Experiment harness for the radially symmetric tumor-growth model:
// stationary-solution computation, time-dependent runs, parameter sweeps,
// and the singular-IVP oracle suite. Emits gnuplot/spreadsheet-ready CSV
// plus machine-readable JSON metadata.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "tumor/errors.hpp"
#include "tumor/io.hpp"
#include "tumor/model.hpp"
#include "tumor/oracles.hpp"
#include "tumor/stationary.hpp"
#include "tumor/timedep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tumor;

namespace {

struct Numerics {
    int grid_n = 512;    // simulation grid
    int shoot_n = 1024;  // stationary shooting grid
    double dt = 1e-3;
    double T = 40.0;
    double cadence = 0.5;
    double tol_R = 1e-6;

    void validate() const {
        if (grid_n < 8 || shoot_n < 16) fail(ErrorKind::BadConfig, "grid sizes too small");
        if (!(dt > 0.0) || !(T >= 0.0) || !(cadence > 0.0) || !(tol_R > 0.0))
            fail(ErrorKind::BadConfig, "numerics entries must be positive");
    }

    json to_json() const {
        return {{"grid_n", grid_n}, {"shoot_n", shoot_n}, {"dt", dt},
                {"T", T},           {"cadence", cadence}, {"tol_R", tol_R}};
    }
};

struct InitSpec {
    std::string kind = "perturbed"; // stationary | perturbed | file
    double amplitude = 0.05;
    std::uint64_t seed = 0;
    std::string path;

    void validate() const {
        if (kind != "stationary" && kind != "perturbed" && kind != "file")
            fail(ErrorKind::BadConfig, "init.kind must be stationary|perturbed|file");
        if (amplitude < 0.0 || amplitude > 0.5)
            fail(ErrorKind::BadConfig, "init.amplitude must lie in [0, 0.5]");
        if (kind == "file" && path.empty())
            fail(ErrorKind::BadConfig, "init.kind=file requires init.path");
    }

    json to_json() const {
        return {{"kind", kind}, {"amplitude", amplitude}, {"seed", seed}, {"path", path}};
    }
};

struct SweepSpec {
    std::string param = "mu";
    std::vector<double> values = {0.5, 3.0, 10.0};
};

struct RunConfig {
    ModelParams params;
    Numerics numerics;
    InitSpec init;
    SweepSpec sweep;
    fs::path out_dir = "out";
    int jobs = 1;
    bool paper_verbatim_transform = false;
};

void apply_json_config(RunConfig& cfg, const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "params") {
            cfg.params = params_from_json(it.value(), /*partial_ok=*/true);
        } else if (key == "numerics") {
            const json& n = it.value();
            for (auto nit = n.begin(); nit != n.end(); ++nit) {
                if (nit.key() == "grid_n") cfg.numerics.grid_n = nit.value().get<int>();
                else if (nit.key() == "shoot_n") cfg.numerics.shoot_n = nit.value().get<int>();
                else if (nit.key() == "dt") cfg.numerics.dt = nit.value().get<double>();
                else if (nit.key() == "T") cfg.numerics.T = nit.value().get<double>();
                else if (nit.key() == "cadence") cfg.numerics.cadence = nit.value().get<double>();
                else if (nit.key() == "tol_R") cfg.numerics.tol_R = nit.value().get<double>();
                else fail(ErrorKind::BadConfig, "unknown numerics key: " + nit.key());
            }
        } else if (key == "init") {
            const json& n = it.value();
            for (auto nit = n.begin(); nit != n.end(); ++nit) {
                if (nit.key() == "kind") cfg.init.kind = nit.value().get<std::string>();
                else if (nit.key() == "amplitude") cfg.init.amplitude = nit.value().get<double>();
                else if (nit.key() == "seed") cfg.init.seed = nit.value().get<std::uint64_t>();
                else if (nit.key() == "path") cfg.init.path = nit.value().get<std::string>();
                else fail(ErrorKind::BadConfig, "unknown init key: " + nit.key());
            }
        } else if (key == "sweep") {
            const json& n = it.value();
            for (auto nit = n.begin(); nit != n.end(); ++nit) {
                if (nit.key() == "param") cfg.sweep.param = nit.value().get<std::string>();
                else if (nit.key() == "values")
                    cfg.sweep.values = nit.value().get<std::vector<double>>();
                else fail(ErrorKind::BadConfig, "unknown sweep key: " + nit.key());
            }
        } else {
            fail(ErrorKind::BadConfig, "unknown config key: " + key);
        }
    }
}

// --param name=value with dotted paths; a bare name means params.<name>.
void apply_override(RunConfig& cfg, const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        fail(ErrorKind::BadConfig, "--param expects name=value, got: " + spec);
    std::string path = spec.substr(0, eq);
    std::string value = spec.substr(eq + 1);
    if (path.find('.') == std::string::npos) path = "params." + path;

    json leaf;
    try {
        leaf = json::parse(value);
    } catch (const json::exception&) {
        leaf = value; // plain string
    }
    json patch;
    json* cur = &patch;
    size_t pos = 0;
    while (true) {
        size_t dot = path.find('.', pos);
        std::string part = path.substr(pos, dot - pos);
        if (dot == std::string::npos) {
            (*cur)[part] = leaf;
            break;
        }
        cur = &(*cur)[part];
        pos = dot + 1;
    }
    // route through the strict config reader so typos are rejected
    json merged;
    if (patch.contains("params")) {
        merged = params_to_json(cfg.params);
        merged.merge_patch(patch["params"]);
        patch["params"] = merged;
    }
    apply_json_config(cfg, patch);
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::RadiusCollapse: return 3;
        default: return 2;
    }
}

void write_error_json(const RunConfig& cfg, const Error& e) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    json j = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    std::ofstream out(cfg.out_dir / "error.json");
    if (out) out << j.dump(2) << "\n";
}

json structural_to_json(const StructuralReport& rep) {
    json samples = json::array();
    for (const auto& v : rep.samples)
        samples.push_back({{"sigma", v.sigma}, {"E", v.E}, {"value", v.value},
                           {"condition", v.condition}});
    return {{"ok", rep.ok()},
            {"total_violations", rep.total_violations},
            {"grid", {rep.n_sigma, rep.n_E}},
            {"samples", samples}};
}

struct StationaryArtifacts {
    double R_star;
    StationarySolution sol;
};

StationaryArtifacts compute_stationary(const RunConfig& cfg) {
    ConstitutiveSet laws = default_laws(cfg.params);
    ShootOptions sopt{.grid_n = cfg.numerics.shoot_n};
    BracketOptions bopt;
    bopt.tol_R = cfg.numerics.tol_R;
    double R_star = find_R_star(cfg.params, laws, sopt, bopt);
    return {R_star, assemble_stationary(cfg.params, laws, R_star, cfg.numerics.shoot_n)};
}

int cmd_check(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.numerics.validate();
    cfg.init.validate();
    ConstitutiveSet laws = default_laws(cfg.params);
    StructuralReport rep = check_structural(cfg.params, laws);
    json out = {{"valid", true},
                {"params", params_to_json(cfg.params)},
                {"warnings", cfg.params.range_warnings()},
                {"structural", structural_to_json(rep)}};
    fs::create_directories(cfg.out_dir);
    write_json_file(cfg.out_dir / "check_report.json", out);
    std::cout << "params valid; " << out["warnings"].size() << " range warning(s); structural "
              << (rep.ok() ? "conditions hold" : "violations: ")
              << (rep.ok() ? "" : std::to_string(rep.total_violations)) << " (sampled "
              << rep.n_sigma << "x" << rep.n_E << ")\n";
    for (const auto& w : out["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
    return 0;
}

int cmd_stationary(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.numerics.validate();
    auto t0 = std::chrono::steady_clock::now();
    StationaryArtifacts art = compute_stationary(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ConstitutiveSet laws = default_laws(cfg.params);
    fs::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir / "stationary_profile.csv");
    if (!csv) fail(ErrorKind::IoError, "cannot write stationary_profile.csv");
    write_profile_csv(art.sol, csv);

    json meta = {{"R_star", art.R_star},
                 {"viability", viability(art.R_star, cfg.params)},
                 {"residuals",
                  {{"sigma", art.sol.residuals.sigma},
                   {"E", art.sol.residuals.E},
                   {"u", art.sol.residuals.u}}},
                 {"structural", structural_to_json(check_structural(cfg.params, laws))},
                 {"params", params_to_json(cfg.params)},
                 {"numerics", cfg.numerics.to_json()},
                 {"runtime_seconds", secs}};
    write_json_file(cfg.out_dir / "stationary_meta.json", meta);
    std::cout << "R_star = " << art.R_star << "  (residuals: sigma " << art.sol.residuals.sigma
              << ", E " << art.sol.residuals.E << ", u " << art.sol.residuals.u << ")\n";
    return 0;
}

InitialData build_init(const RunConfig& cfg, const StationarySolution& sol) {
    const ModelParams& p = cfg.params;
    if (cfg.init.kind == "stationary") return stationary_init(sol, p, cfg.numerics.grid_n);
    if (cfg.init.kind == "perturbed")
        return perturbed_init(sol, p, cfg.numerics.grid_n, cfg.init.amplitude, cfg.init.seed);
    return read_initial_csv(cfg.init.path, cfg.numerics.grid_n);
}

json run_simulation(const RunConfig& cfg, const StationaryArtifacts& art, TimeSeries* series_out) {
    ConstitutiveSet laws = default_laws(cfg.params);
    SimOptions opts;
    opts.paper_verbatim_transform = cfg.paper_verbatim_transform;
    InitialData init = build_init(cfg, art.sol);
    TimeSeries series = simulate(cfg.params, laws, init, cfg.numerics.T, cfg.numerics.dt,
                                 cfg.numerics.cadence, opts, &art.sol);
    ConvergenceVerdict verdict = assess_convergence(series);
    double min_R = series.scalars.front().R;
    for (const auto& s : series.scalars) min_R = std::min(min_R, s.R);
    const Scalars& last = series.scalars.back();
    json summary = {{"R_star", art.R_star},
                    {"converged", verdict.converged},
                    {"monotone_tail", verdict.monotone_tail},
                    {"final",
                     {{"t", last.t},
                      {"R", last.R},
                      {"dist_sigma", last.dist_sigma},
                      {"dist_E", last.dist_E},
                      {"dist_m", last.dist_m}}},
                    {"min_R", min_R},
                    {"init", cfg.init.to_json()},
                    {"params", params_to_json(cfg.params)},
                    {"numerics", cfg.numerics.to_json()},
                    {"paper_verbatim_transform", cfg.paper_verbatim_transform}};
    if (series_out) *series_out = std::move(series);
    return summary;
}

int cmd_simulate(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.numerics.validate();
    cfg.init.validate();
    StationaryArtifacts art = compute_stationary(cfg);
    TimeSeries series;
    json summary = run_simulation(cfg, art, &series);

    fs::create_directories(cfg.out_dir);
    {
        std::ofstream f(cfg.out_dir / "series.csv");
        if (!f) fail(ErrorKind::IoError, "cannot write series.csv");
        write_series_csv(series, f);
    }
    {
        std::ofstream f(cfg.out_dir / "snapshots.csv");
        if (!f) fail(ErrorKind::IoError, "cannot write snapshots.csv");
        write_snapshots_csv(series, f);
    }
    write_json_file(cfg.out_dir / "summary.json", summary);
    std::cout << "simulated to t=" << summary["final"]["t"] << "; converged="
              << (summary["converged"].get<bool>() ? "true" : "false")
              << " final sup distances (sigma,E,m) = (" << summary["final"]["dist_sigma"] << ", "
              << summary["final"]["dist_E"] << ", " << summary["final"]["dist_m"] << ")\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.numerics.validate();
    cfg.init.validate();
    if (cfg.sweep.values.empty()) fail(ErrorKind::BadConfig, "sweep.values is empty");

    struct Row {
        double value;
        bool ok = false;
        double R_star = 0, d_sigma = 0, d_E = 0, d_m = 0, min_R = 0;
        bool viable = false, converged = false;
        std::string error;
    };
    std::vector<Row> rows(cfg.sweep.values.size());

    std::counting_semaphore<64> slots(std::max(1, std::min(cfg.jobs, 64)));
    std::vector<std::future<void>> futs;
    for (size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        futs.push_back(std::async(std::launch::async, [&, i]() {
            slots.acquire();
            Row& row = rows[i];
            row.value = cfg.sweep.values[i];
            RunConfig local = cfg;
            char tag[64];
            std::snprintf(tag, sizeof tag, "%s_%02zu", cfg.sweep.param.c_str(), i);
            local.out_dir = cfg.out_dir / "rows" / tag;
            try {
                json pj = params_to_json(local.params);
                if (!pj.contains(cfg.sweep.param))
                    fail(ErrorKind::BadConfig, "unknown sweep parameter: " + cfg.sweep.param);
                pj[cfg.sweep.param] = row.value;
                local.params = params_from_json(pj);
                local.params.validate();
                StationaryArtifacts art = compute_stationary(local);
                json summary = run_simulation(local, art, nullptr);
                fs::create_directories(local.out_dir);
                write_json_file(local.out_dir / "summary.json", summary);
                row.R_star = art.R_star;
                row.viable = viability(art.R_star, local.params);
                row.converged = summary["converged"].get<bool>();
                row.d_sigma = summary["final"]["dist_sigma"].get<double>();
                row.d_E = summary["final"]["dist_E"].get<double>();
                row.d_m = summary["final"]["dist_m"].get<double>();
                row.min_R = summary["min_R"].get<double>();
                row.ok = true;
            } catch (const Error& e) {
                row.error = e.what();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            slots.release();
        }));
    }
    for (auto& f : futs) f.get();

    fs::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir / "sweep.csv");
    if (!csv) fail(ErrorKind::IoError, "cannot write sweep.csv");
    csv << "param,value,R_star,viable,converged,final_dist_sigma,final_dist_E,final_dist_m,min_R,"
           "error\n";
    int ok_count = 0;
    for (const Row& row : rows) {
        char buf[320];
        if (row.ok) {
            ++ok_count;
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,\n",
                          cfg.sweep.param.c_str(), row.value, row.R_star, int(row.viable),
                          int(row.converged), row.d_sigma, row.d_E, row.d_m, row.min_R);
        } else {
            std::snprintf(buf, sizeof buf, "%s,%.17g,,,,,,,,\"%s\"\n", cfg.sweep.param.c_str(),
                          row.value, row.error.c_str());
        }
        csv << buf;
        std::cout << buf;
    }
    if (ok_count == 0) fail(ErrorKind::BadConfig, "every sweep row failed");
    return 0;
}

int cmd_oracles(const RunConfig& cfg) {
    std::vector<OracleResult> results = run_oracle_suite();
    bool all = true;
    json rows = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "[ok]   " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        rows.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    fs::create_directories(cfg.out_dir);
    write_json_file(cfg.out_dir / "oracles_report.json",
                    {{"all_pass", all}, {"count", results.size()}, {"results", rows}});
    std::cout << (all ? "all oracles pass" : "oracle failures detected") << " (" << results.size()
              << " oracles)\n";
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radially symmetric tumor-growth solver suite"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed_flag;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--jobs", cfg.jobs, "max concurrent sweep rows");
    app.add_option("--seed", seed_flag, "64-bit perturbation seed (overrides init.seed)");
    app.add_flag("--paper-verbatim-transform", cfg.paper_verbatim_transform,
                 "use the published sigma-equation advection term (no c factor)");
    app.add_option("--param", overrides,
                   "override config entries, e.g. --param mu=0.5 --param numerics.dt=5e-4");

    auto* c_check = app.add_subcommand("check", "validate parameters and structural conditions");
    auto* c_stat = app.add_subcommand("stationary", "compute the stationary solution");
    auto* c_sim = app.add_subcommand("simulate", "run the time-dependent solver");
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep of stationary + simulate");
    auto* c_orac = app.add_subcommand("oracles", "run the singular-IVP oracle suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) apply_json_config(cfg, read_json_file(config_path));
        for (const auto& ov : overrides) apply_override(cfg, ov);
        if (seed_flag) cfg.init.seed = *seed_flag;

        if (c_check->parsed()) return cmd_check(cfg);
        if (c_stat->parsed()) return cmd_stationary(cfg);
        if (c_sim->parsed()) return cmd_simulate(cfg);
        if (c_sweep->parsed()) return cmd_sweep(cfg);
        if (c_orac->parsed()) return cmd_oracles(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_json(cfg, e);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
