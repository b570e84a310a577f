#include "essim/sweep.hpp"

#include "essim/rng.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace essim {

using nlohmann::json;

namespace {

template <typename T>
void require_axis(const std::vector<T>& axis, const char* name) {
    if (axis.empty()) throw ConfigError(std::string("sweep.grid.") + name, "axis must not be empty");
}

std::string number(double v) { return fmt::format("{:.12g}", v); }
std::string exact(double v) { return fmt::format("{:.17g}", v); }
std::string opt_number(const std::optional<double>& v) { return v ? number(*v) : "NA"; }
std::string opt_exact(const std::optional<double>& v) { return v ? exact(*v) : "NA"; }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::string_view journal_magic = "# essim-journal v1 fingerprint=";
constexpr std::string_view journal_columns =
    "scenario_id,rep,status,run_npv,run_price,blackout_hours,emission_tco2,no_trade_ticks";

std::string journal_line(const RunMetrics& m) {
    return fmt::format("{},{},done,{},{},{},{},{}", m.scenario_id, m.rep, opt_exact(m.run_npv_eur),
                       opt_exact(m.run_price_eur_per_mwh), exact(m.run_blackout_hours),
                       exact(m.run_emission_tco2), m.no_trade_ticks);
}

std::optional<double> parse_opt(const std::string& s) {
    if (s == "NA") return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
}

using PairKey = std::pair<std::int64_t, int>;

std::map<PairKey, RunMetrics> read_journal(const std::filesystem::path& path,
                                           std::uint64_t fingerprint, std::size_t n_scenarios,
                                           int reps, const SweepSpec& spec) {
    std::ifstream in(path);
    if (!in) throw JournalError("cannot open journal " + path.string());
    std::string line;
    if (!std::getline(in, line) || !line.starts_with(journal_magic)) {
        throw JournalError("journal header missing or unreadable");
    }
    if (line.substr(journal_magic.size()) != fmt::format("{:016x}", fingerprint)) {
        throw JournalError("journal belongs to a different sweep specification");
    }
    if (!std::getline(in, line) || line != journal_columns) {
        throw JournalError("journal column header missing");
    }
    std::map<PairKey, RunMetrics> done;
    int line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        const auto bad = [&](const std::string& why) {
            return JournalError(fmt::format("journal line {} corrupt: {}", line_no, why));
        };
        if (f.size() != 8 || f[2] != "done") throw bad("unexpected field layout");
        RunMetrics m;
        try {
            m.scenario_id = std::stoll(f[0]);
            m.rep = std::stoi(f[1]);
            m.run_npv_eur = parse_opt(f[3]);
            m.run_price_eur_per_mwh = parse_opt(f[4]);
            m.run_blackout_hours = std::stod(f[5]);
            m.run_emission_tco2 = std::stod(f[6]);
            m.no_trade_ticks = std::stoi(f[7]);
        } catch (const std::exception&) {
            throw bad("unparseable value");
        }
        if (m.scenario_id < 0 || static_cast<std::size_t>(m.scenario_id) >= n_scenarios ||
            m.rep < 0 || m.rep >= reps) {
            throw bad("pair outside the sweep");
        }
        m.seed = pair_seed(spec.base_seed, static_cast<std::uint64_t>(m.scenario_id),
                           static_cast<std::uint64_t>(m.rep));
        const PairKey key{m.scenario_id, m.rep};
        if (auto it = done.find(key); it != done.end()) {
            if (journal_line(it->second) != journal_line(m)) throw bad("conflicting duplicate");
            continue;
        }
        done.emplace(key, m);
    }
    return done;
}

struct Task {
    std::int64_t scenario_id;
    int rep;
    int attempts = 0;
};

struct Completion {
    Task task;
    std::optional<RunMetrics> metrics;
    std::string error;
};

} // namespace

std::size_t ScenarioGrid::size() const {
    return business_model.size() * ess_desirability_pct.size() * grid_ess_capacity_mw.size() *
           max_ess_energy_rating_mwh.size() * ess_power_capex_keur_per_mw.size() *
           ess_energy_capex_keur_per_mwh.size() * ess_roundtrip_eff_pct.size() *
           res_growth_pct_per_y.size() * nonres_growth_pct_per_y.size() *
           co2_price_growth_pct_per_y.size() * demand_growth_pct_per_y.size();
}

void ScenarioGrid::validate() const {
    require_axis(business_model, "business_model");
    require_axis(ess_desirability_pct, "ess_desirability_pct");
    require_axis(grid_ess_capacity_mw, "grid_ess_capacity_mw");
    require_axis(max_ess_energy_rating_mwh, "max_ess_energy_rating_mwh");
    require_axis(ess_power_capex_keur_per_mw, "ess_power_capex_keur_per_mw");
    require_axis(ess_energy_capex_keur_per_mwh, "ess_energy_capex_keur_per_mwh");
    require_axis(ess_roundtrip_eff_pct, "ess_roundtrip_eff_pct");
    require_axis(res_growth_pct_per_y, "res_growth_pct_per_y");
    require_axis(nonres_growth_pct_per_y, "nonres_growth_pct_per_y");
    require_axis(co2_price_growth_pct_per_y, "co2_price_growth_pct_per_y");
    require_axis(demand_growth_pct_per_y, "demand_growth_pct_per_y");
    for (const auto& s : enumerate_scenarios(*this)) s.validate();
}

ScenarioGrid ScenarioGrid::desk() {
    ScenarioGrid g;
    g.ess_desirability_pct = {0, 100};
    g.ess_roundtrip_eff_pct = {70, 100};
    g.nonres_growth_pct_per_y = {-10, 10};
    g.demand_growth_pct_per_y = {0, 4};
    return g;
}

void SweepSpec::validate() const {
    grid.validate();
    if (replications < 1) throw ConfigError("sweep.replications", "must be >= 1");
    if (horizon_years < 1) throw ConfigError("sweep.horizon_years", "must be >= 1");
    if (worker_count < 1) throw ConfigError("sweep.worker_count", "must be >= 1");
}

SweepSpec SweepSpec::desk() {
    SweepSpec s;
    s.grid = ScenarioGrid::desk();
    s.replications = 3;
    s.horizon_years = 5;
    return s;
}

void to_json(json& j, const ScenarioGrid& g) {
    json bm = json::array();
    for (auto m : g.business_model) bm.push_back(to_string(m));
    j = json{{"business_model", bm},
             {"ess_desirability_pct", g.ess_desirability_pct},
             {"grid_ess_capacity_mw", g.grid_ess_capacity_mw},
             {"max_ess_energy_rating_mwh", g.max_ess_energy_rating_mwh},
             {"ess_power_capex_keur_per_mw", g.ess_power_capex_keur_per_mw},
             {"ess_energy_capex_keur_per_mwh", g.ess_energy_capex_keur_per_mwh},
             {"ess_roundtrip_eff_pct", g.ess_roundtrip_eff_pct},
             {"res_growth_pct_per_y", g.res_growth_pct_per_y},
             {"nonres_growth_pct_per_y", g.nonres_growth_pct_per_y},
             {"co2_price_growth_pct_per_y", g.co2_price_growth_pct_per_y},
             {"demand_growth_pct_per_y", g.demand_growth_pct_per_y}};
}

void from_json(const json& j, ScenarioGrid& g) {
    if (!j.is_object()) throw ConfigError("sweep.grid", "expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string field = "sweep.grid." + key;
        if (!value.is_array()) throw ConfigError(field, "expected an array");
        try {
            if (key == "business_model") {
                g.business_model.clear();
                for (const auto& v : value) {
                    g.business_model.push_back(business_model_from_string(v.get<std::string>()));
                }
                continue;
            }
            std::vector<double> values = value.get<std::vector<double>>();
            if (key == "ess_desirability_pct") g.ess_desirability_pct = values;
            else if (key == "grid_ess_capacity_mw") g.grid_ess_capacity_mw = values;
            else if (key == "max_ess_energy_rating_mwh") g.max_ess_energy_rating_mwh = values;
            else if (key == "ess_power_capex_keur_per_mw") g.ess_power_capex_keur_per_mw = values;
            else if (key == "ess_energy_capex_keur_per_mwh") g.ess_energy_capex_keur_per_mwh = values;
            else if (key == "ess_roundtrip_eff_pct") g.ess_roundtrip_eff_pct = values;
            else if (key == "res_growth_pct_per_y") g.res_growth_pct_per_y = values;
            else if (key == "nonres_growth_pct_per_y") g.nonres_growth_pct_per_y = values;
            else if (key == "co2_price_growth_pct_per_y") g.co2_price_growth_pct_per_y = values;
            else if (key == "demand_growth_pct_per_y") g.demand_growth_pct_per_y = values;
            else throw ConfigError(field, "unknown key");
        } catch (const json::exception& e) {
            throw ConfigError(field, std::string("bad value: ") + e.what());
        } catch (const ConfigError& e) {
            if (e.field() == field) throw;
            throw ConfigError(field, e.what());
        }
    }
}

void to_json(json& j, const SweepSpec& s) {
    j = json{{"grid", s.grid},
             {"replications", s.replications},
             {"horizon_years", s.horizon_years},
             {"base_seed", s.base_seed},
             {"worker_count", s.worker_count}};
}

void from_json(const json& j, SweepSpec& s) {
    if (!j.is_object()) throw ConfigError("sweep", "expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string field = "sweep." + key;
        try {
            if (key == "grid") s.grid = value.get<ScenarioGrid>();
            else if (key == "replications") s.replications = value.get<int>();
            else if (key == "horizon_years") s.horizon_years = value.get<int>();
            else if (key == "base_seed") s.base_seed = value.get<std::uint64_t>();
            else if (key == "worker_count") s.worker_count = value.get<int>();
            else throw ConfigError(field, "unknown key");
        } catch (const json::exception& e) {
            throw ConfigError(field, std::string("bad value: ") + e.what());
        }
    }
}

std::vector<Scenario> enumerate_scenarios(const ScenarioGrid& g) {
    std::vector<Scenario> out;
    out.reserve(g.size());
    Scenario s;
    for (auto bm : g.business_model) {
        s.business_model = bm;
        for (double a : g.ess_desirability_pct) {
            s.ess_desirability_pct = a;
            for (double b : g.grid_ess_capacity_mw) {
                s.grid_ess_capacity_mw = b;
                for (double c : g.max_ess_energy_rating_mwh) {
                    s.max_ess_energy_rating_mwh = c;
                    for (double d : g.ess_power_capex_keur_per_mw) {
                        s.ess_power_capex_keur_per_mw = d;
                        for (double e : g.ess_energy_capex_keur_per_mwh) {
                            s.ess_energy_capex_keur_per_mwh = e;
                            for (double f : g.ess_roundtrip_eff_pct) {
                                s.ess_roundtrip_eff_pct = f;
                                for (double h : g.res_growth_pct_per_y) {
                                    s.res_growth_pct_per_y = h;
                                    for (double i : g.nonres_growth_pct_per_y) {
                                        s.nonres_growth_pct_per_y = i;
                                        for (double k : g.co2_price_growth_pct_per_y) {
                                            s.co2_price_growth_pct_per_y = k;
                                            for (double l : g.demand_growth_pct_per_y) {
                                                s.demand_growth_pct_per_y = l;
                                                out.push_back(s);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

RunMetrics simulate_run(const Scenario& scenario, const EnvironmentConfig& env,
                        std::uint64_t seed, int horizon_ticks, std::int64_t scenario_id, int rep) {
    const RunRecord record = run_simulation(scenario, env, seed, horizon_ticks);
    return run_metrics(record, scenario_id, rep, seed);
}

std::uint64_t sweep_fingerprint(const SweepSpec& spec, const EnvironmentConfig& env) {
    const json j{{"grid", spec.grid},
                 {"replications", spec.replications},
                 {"horizon_years", spec.horizon_years},
                 {"base_seed", spec.base_seed},
                 {"environment", env}};
    return fnv1a(j.dump());
}

SweepResults run_sweep(const SweepSpec& spec, const EnvironmentConfig& env,
                       const SweepOptions& options) {
    spec.validate();
    env.validate();

    SweepResults results;
    results.scenarios = enumerate_scenarios(spec.grid);
    const std::size_t n_scen = results.scenarios.size();
    const int reps = spec.replications;
    const int horizon = Clock::ticks_for_years(spec.horizon_years);
    const std::uint64_t fingerprint = sweep_fingerprint(spec, env);

    std::map<PairKey, RunMetrics> done;
    std::ofstream journal;
    if (options.journal) {
        const auto& path = *options.journal;
        if (options.resume && std::filesystem::exists(path)) {
            done = read_journal(path, fingerprint, n_scen, reps, spec);
            journal.open(path, std::ios::app);
        } else {
            journal.open(path, std::ios::trunc);
            journal << journal_magic << fmt::format("{:016x}", fingerprint) << '\n'
                    << journal_columns << '\n';
            journal.flush();
        }
        if (!journal) throw JournalError("cannot write journal " + path.string());
    }

    std::deque<Task> pending;
    for (std::size_t s = 0; s < n_scen; ++s) {
        for (int r = 0; r < reps; ++r) {
            if (!done.contains({static_cast<std::int64_t>(s), r})) {
                pending.push_back({static_cast<std::int64_t>(s), r});
            }
        }
    }

    const std::size_t total = n_scen * static_cast<std::size_t>(reps);
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Completion> completed;
    bool stop = false;
    int in_flight = 0;

    auto worker = [&] {
        for (;;) {
            Task task;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return stop || !pending.empty() || in_flight == 0; });
                if (stop || pending.empty()) return;
                task = pending.front();
                pending.pop_front();
                ++in_flight;
            }
            Completion c{task, std::nullopt, {}};
            try {
                const auto seed = pair_seed(spec.base_seed,
                                            static_cast<std::uint64_t>(task.scenario_id),
                                            static_cast<std::uint64_t>(task.rep));
                c.metrics = options.run(results.scenarios[static_cast<std::size_t>(task.scenario_id)],
                                        env, seed, horizon, task.scenario_id, task.rep);
            } catch (const std::exception& e) {
                c.error = e.what();
            }
            {
                std::lock_guard lock(mu);
                completed.push_back(std::move(c));
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const int n_workers = std::max(1, spec.worker_count);
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);

    // Aggregator: the only writer of `done` and the journal.
    std::string failure;
    {
        std::unique_lock lock(mu);
        for (;;) {
            cv.wait(lock, [&] {
                return !completed.empty() || (in_flight == 0 && (pending.empty() || stop));
            });
            if (completed.empty()) break;
            Completion c = std::move(completed.front());
            completed.pop_front();
            --in_flight;
            if (stop) continue; // interrupted: drop work finished after the stop
            if (!c.metrics) {
                if (++c.task.attempts < options.max_attempts) {
                    pending.push_back(c.task);
                } else if (failure.empty()) {
                    failure = fmt::format("scenario {} rep {} failed after {} attempts: {}",
                                          c.task.scenario_id, c.task.rep, c.task.attempts, c.error);
                    stop = true;
                }
                cv.notify_all();
                continue;
            }
            const PairKey key{c.task.scenario_id, c.task.rep};
            if (done.emplace(key, *c.metrics).second) {
                ++results.executed;
                if (journal.is_open()) {
                    journal << journal_line(*c.metrics) << '\n';
                    journal.flush();
                }
                if (options.on_progress) options.on_progress({done.size(), total});
            }
            if (options.stop_after && results.executed >= *options.stop_after) stop = true;
            cv.notify_all();
        }
        stop = true;
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
    if (!failure.empty()) throw std::runtime_error(failure);

    results.complete = done.size() == total;
    results.runs.reserve(done.size());
    for (auto& [_, m] : done) results.runs.push_back(m);
    if (!results.complete) return results;

    for (std::size_t s = 0; s < n_scen; ++s) {
        const auto first = results.runs.begin() + static_cast<std::ptrdiff_t>(s * reps);
        results.scenario_metrics.push_back(
            scenario_aggregate(std::span<const RunMetrics>(&*first, static_cast<std::size_t>(reps))));
    }
    results.normalization = normalize_scores(results.scenario_metrics);
    results.threshold = profitability_threshold(results.scenario_metrics);
    return results;
}

void write_sweep_csvs(const SweepResults& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (!r.complete) throw std::logic_error("cannot write results of an incomplete sweep");

    std::ofstream runs(dir / "runs.csv");
    runs << "scenario_id,rep,seed,run_npv_eur,run_price_eur_per_mwh,run_blackout_hours,"
            "run_emission_tco2,no_trade_ticks\n";
    for (const auto& m : r.runs) {
        runs << fmt::format("{},{},{},{},{},{},{},{}\n", m.scenario_id, m.rep, m.seed,
                            opt_number(m.run_npv_eur), opt_number(m.run_price_eur_per_mwh),
                            number(m.run_blackout_hours), number(m.run_emission_tco2),
                            m.no_trade_ticks);
    }

    const auto& norm = r.normalization;
    std::ofstream scen(dir / "scenarios.csv");
    scen << "scenario_id,business_model,ess_desirability_pct,grid_ess_capacity_mw,"
            "max_ess_energy_rating_mwh,ess_power_capex_keur_per_mw,ess_energy_capex_keur_per_mwh,"
            "ess_roundtrip_eff_pct,res_growth_pct_per_y,nonres_growth_pct_per_y,"
            "co2_price_growth_pct_per_y,demand_growth_pct_per_y,npv_eur,price_eur_per_mwh,"
            "blackout_hours,emission_tco2,no_trade_ticks,absolute_profitability,profitability,"
            "affordability,acceptability,availability,government_goal\n";
    for (std::size_t i = 0; i < r.scenarios.size(); ++i) {
        const auto& s = r.scenarios[i];
        const auto& m = r.scenario_metrics[i];
        const auto& g = norm.scores[i];
        scen << fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i,
            to_string(s.business_model), number(s.ess_desirability_pct),
            number(s.grid_ess_capacity_mw), number(s.max_ess_energy_rating_mwh),
            number(s.ess_power_capex_keur_per_mw), number(s.ess_energy_capex_keur_per_mwh),
            number(s.ess_roundtrip_eff_pct), number(s.res_growth_pct_per_y),
            number(s.nonres_growth_pct_per_y), number(s.co2_price_growth_pct_per_y),
            number(s.demand_growth_pct_per_y), opt_number(m.npv_eur),
            opt_number(m.price_eur_per_mwh), number(m.blackout_hours), number(m.emission_tco2),
            number(m.no_trade_ticks), m.absolute_profitability ? 1 : 0,
            opt_number(g.profitability), number(g.affordability), number(g.acceptability),
            number(g.availability), number(g.government_goal));
    }

    std::ofstream scores(dir / "scores.csv");
    scores << "scenario_id,profitability,affordability,acceptability,availability,"
              "government_goal,profitability_threshold,threshold_clamped,degenerate_criteria\n";
    std::string degenerate;
    auto flag = [&](bool on, const char* name) {
        if (!on) return;
        if (!degenerate.empty()) degenerate += ';';
        degenerate += name;
    };
    flag(norm.profitability_degenerate, "profitability");
    flag(norm.affordability_degenerate, "affordability");
    flag(norm.acceptability_degenerate, "acceptability");
    flag(norm.availability_degenerate, "availability");
    for (std::size_t i = 0; i < r.scenarios.size(); ++i) {
        const auto& g = norm.scores[i];
        scores << fmt::format("{},{},{},{},{},{},{},{},{}\n", i, opt_number(g.profitability),
                              number(g.affordability), number(g.acceptability),
                              number(g.availability), number(g.government_goal),
                              number(r.threshold.value), r.threshold.clamped ? 1 : 0, degenerate);
    }
}

} // namespace essim
