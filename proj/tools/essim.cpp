// Command-line front end: single runs, scenario sweeps, price validation.

#include "essim/config.hpp"
#include "essim/metrics.hpp"
#include "essim/simulation.hpp"
#include "essim/sweep.hpp"
#include "essim/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_config = 2;

struct Common {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon_years;
};

struct Loaded {
    essim::EnvironmentConfig env;
    essim::Scenario scenario;
    essim::SweepSpec sweep = essim::SweepSpec::desk();
};

json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw essim::ConfigError(what, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw essim::ConfigError(what, std::string("invalid JSON: ") + e.what());
    }
}

essim::SweepSpec preset(const std::string& name) {
    if (name == "full") {
        essim::SweepSpec s;
        return s;
    }
    return essim::SweepSpec::desk();
}

Loaded load(const Common& c, const std::string& grid_path = {}) {
    json doc = json::object();
    if (!c.config_path.empty()) doc = read_json_file(c.config_path, "--config");
    if (!doc.is_object()) throw essim::ConfigError("<root>", "expected an object");
    for (const auto& o : c.overrides) essim::apply_override(doc, o);
    for (const auto& [key, _] : doc.items()) {
        if (key != "environment" && key != "scenario" && key != "sweep") {
            throw essim::ConfigError(key, "unknown top-level key");
        }
    }
    Loaded l;
    if (doc.contains("environment")) l.env = doc["environment"].get<essim::EnvironmentConfig>();
    if (doc.contains("scenario")) l.scenario = doc["scenario"].get<essim::Scenario>();
    if (doc.contains("sweep")) l.sweep = doc["sweep"].get<essim::SweepSpec>();
    if (!grid_path.empty()) {
        if (!fs::exists(grid_path) && (grid_path == "desk" || grid_path == "full")) {
            l.sweep = preset(grid_path);
        } else {
            json g = read_json_file(grid_path, "--grid");
            if (g.is_object() && g.contains("sweep")) g = g["sweep"];
            l.sweep = essim::SweepSpec::desk();
            l.sweep = g.get<essim::SweepSpec>();
        }
    }
    l.env.validate();
    l.scenario.validate();
    return l;
}

fs::path output_dir(const Common& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("ESSIM_OUT"); env && *env) return env;
    return "essim_out";
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON configuration file");
    cmd->add_option("--out", c.out_dir, "Output directory (default $ESSIM_OUT or ./essim_out)");
    cmd->add_option("--set", c.overrides, "Dotted override, e.g. scenario.ess_desirability_pct=50");
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--horizon-years", c.horizon_years, "Simulated years");
}

int cmd_run(const Common& c) {
    const Loaded l = load(c);
    const std::uint64_t seed = c.seed.value_or(1);
    const int years = c.horizon_years.value_or(20);
    if (years < 1) throw essim::ConfigError("--horizon-years", "must be >= 1");
    const auto record =
        essim::run_simulation(l.scenario, l.env, seed, essim::Clock::ticks_for_years(years));
    const auto m = essim::run_metrics(record, 0, 0, seed);

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    std::ofstream trace(dir / "trace.csv");
    essim::write_trace_csv(trace, record);

    auto opt = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.6f}", *v) : std::string("NA");
    };
    std::cout << fmt::format("run_npv={} mean_price={} blackout_hours={} total_co2={:.6f} "
                             "no_trade_ticks={}\n",
                             opt(m.run_npv_eur), opt(m.run_price_eur_per_mwh),
                             m.run_blackout_hours, m.run_emission_tco2, m.no_trade_ticks);
    return 0;
}

int cmd_sweep(const Common& c, const std::string& grid, std::optional<int> workers,
              std::optional<int> reps, bool resume, bool dry_run, bool quiet) {
    Loaded l = load(c, grid);
    if (workers) l.sweep.worker_count = *workers;
    if (reps) l.sweep.replications = *reps;
    if (c.horizon_years) l.sweep.horizon_years = *c.horizon_years;
    if (c.seed) l.sweep.base_seed = *c.seed;
    l.sweep.validate();

    if (dry_run) {
        std::cout << fmt::format("scenarios={} replications={} experiments={}\n",
                                 l.sweep.grid.size(), l.sweep.replications,
                                 l.sweep.experiment_count());
        return 0;
    }

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    essim::SweepOptions opts;
    opts.journal = dir / "journal.csv";
    opts.resume = resume;
    if (!quiet) {
        opts.on_progress = [](const essim::SweepProgress& p) {
            if (p.done % 100 == 0 || p.done == p.total) {
                std::cerr << fmt::format("\r{}/{} runs", p.done, p.total) << std::flush;
                if (p.done == p.total) std::cerr << '\n';
            }
        };
    }
    const auto results = essim::run_sweep(l.sweep, l.env, opts);
    essim::write_sweep_csvs(results, dir);
    std::cout << fmt::format("scenarios={} runs={} executed={} threshold={:.6f}{}\n",
                             results.scenarios.size(), results.runs.size(), results.executed,
                             results.threshold.value, results.threshold.clamped ? " (clamped)" : "");
    return 0;
}

int cmd_validate(const Common& c, const std::string& reference_path) {
    const Loaded l = load(c);
    const auto reference = essim::load_series_csv(reference_path).values();
    if (reference.size() % essim::Clock::days_per_year != 0) {
        throw essim::ConfigError("--reference", "must cover whole years of monthly values");
    }
    const int ref_years = static_cast<int>(reference.size()) / essim::Clock::days_per_year;
    const int years = c.horizon_years.value_or(ref_years);
    const std::uint64_t seed = c.seed.value_or(1);
    const auto record =
        essim::run_simulation(l.scenario, l.env, seed, essim::Clock::ticks_for_years(years));
    const auto monthly = essim::monthly_prices(record);
    const auto report = essim::compare_prices(monthly, reference);

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "validation.csv");
        essim::write_validation_csv(out, report);
    }
    {
        std::ofstream out(dir / "simulated_monthly.csv");
        essim::write_monthly_csv(out, monthly);
    }
    essim::write_validation_csv(std::cout, report);
    return 0;
}

int cmd_emit_defaults(const std::string& grid) {
    json doc{{"environment", essim::EnvironmentConfig{}},
             {"scenario", essim::Scenario{}},
             {"sweep", preset(grid)}};
    std::cout << doc.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based electricity market simulator with storage business models"};
    app.require_subcommand(1);

    Common common;
    auto* run = app.add_subcommand("run", "Simulate one scenario and write a per-tick trace");
    add_common(run, common);

    std::string grid;
    std::optional<int> workers, reps;
    bool resume = false, dry_run = false, quiet = false;
    auto* sweep = app.add_subcommand("sweep", "Run the full-factorial scenario sweep");
    add_common(sweep, common);
    sweep->add_option("--grid", grid, "Sweep spec JSON file, or the preset 'desk' or 'full'");
    sweep->add_option("--workers", workers, "Worker threads");
    sweep->add_option("--reps", reps, "Replications per scenario");
    sweep->add_flag("--resume", resume, "Skip pairs already recorded in the journal");
    sweep->add_flag("--dry-run", dry_run, "Only count scenarios and experiments");
    sweep->add_flag("--quiet", quiet, "No progress output");

    std::string reference;
    auto* validate = app.add_subcommand("validate", "Compare simulated prices with a reference");
    add_common(validate, common);
    validate->add_option("--reference", reference, "Monthly reference prices (month_index,value)")
        ->required();

    std::string defaults_grid = "desk";
    auto* defaults = app.add_subcommand("emit-defaults", "Print the default configuration");
    defaults->add_option("--grid", defaults_grid, "Sweep preset to include: desk or full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_config;
    }

    try {
        if (*run) return cmd_run(common);
        if (*sweep) return cmd_sweep(common, grid, workers, reps, resume, dry_run, quiet);
        if (*validate) return cmd_validate(common, reference);
        if (*defaults) return cmd_emit_defaults(defaults_grid);
    } catch (const essim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const essim::JournalError& e) {
        std::cerr << "journal error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
