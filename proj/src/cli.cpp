#include "orchsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "orchsim/simulation.hpp"

namespace orchsim {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ORCHESTRA_SIM_OUT"); env != nullptr && *env != '\0') return env;
    return "out";
}

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << content;
}

struct RunArtifacts {
    RunResult result;
    fs::path dir;
};

// Directory name for one run's artifacts: the scenario name, or the file
// stem when the scenario leaves its name empty.
std::string artifact_dir_name(const Scenario& scenario, const std::string& path) {
    if (!scenario.name.empty()) return scenario.name;
    return fs::path(path).stem().string();
}

RunArtifacts execute(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                     const std::string& out_dir, bool write_trace) {
    ScenarioLoadResult loaded = load_scenario_file(scenario_path);
    if (!loaded.ok()) {
        std::string all;
        for (const std::string& e : loaded.errors) all += e + "\n";
        throw ValidationError(all.empty() ? "invalid scenario: " + scenario_path : all);
    }
    const std::string dir_name = artifact_dir_name(*loaded.scenario, scenario_path);
    RunArtifacts art;
    art.result = run_scenario(std::move(*loaded.scenario), seed);
    art.dir = fs::path(out_dir) / dir_name;
    fs::create_directories(art.dir);
    write_file(art.dir / "report.json", art.result.report.to_json());
    write_file(art.dir / "pending.csv", art.result.report.series_csv(false));
    write_file(art.dir / "workers.csv", art.result.report.series_csv(true));
    if (write_trace) write_file(art.dir / "trace.jsonl", art.result.log.to_jsonl());
    return art;
}

void print_summary(const RunReport& r, std::ostream& out) {
    out << "scenario     " << r.scenario << "\n";
    out << "seed         " << r.seed << "\n";
    out << "pods         " << r.pods_submitted << " submitted, " << r.pods_bound << " bound, " << r.pods_succeeded
        << " succeeded, " << r.pods_failed << " failed\n";
    out << "avg delay    " << fixed2(r.avg_scheduling_delay_min) << " min\n";
    if (r.duration_degenerate) {
        out << "duration     degenerate (no span between first submission and last binding)\n";
        out << "throughput   n/a\n";
    } else {
        out << "duration     " << fixed2(r.total_scheduling_duration_min) << " min\n";
        out << "throughput   " << fixed2(r.throughput_pods_per_min) << " pods/min\n";
    }
    out << "cost         $" << r.cost_usd << "\n";
    out << "evictions    " << r.evictions << "\n";
    out << "workers      " << r.workers_final << " at end, " << r.launches << " launched\n";
    out << "qos          " << r.qos_violations << " violations\n";
}

int classify(const std::exception& ex, std::ostream& err) {
    err << ex.what();
    const std::string what = ex.what();
    if (what.empty() || what.back() != '\n') err << "\n";
    return dynamic_cast<const ValidationError*>(&ex) != nullptr ? k_exit_invalid_input : k_exit_sim_failure;
}

}  // namespace

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        RunArtifacts art = execute(opt.scenario_path, opt.seed, opt.out_dir, opt.write_trace);
        print_summary(art.result.report, out);
        out << "artifacts    " << art.dir.string() << "\n";
        return k_exit_ok;
    } catch (const std::exception& ex) {
        return classify(ex, err);
    }
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<std::future<RunArtifacts>> futures;
    futures.reserve(opt.scenario_paths.size());
    for (const std::string& path : opt.scenario_paths) {
        futures.push_back(std::async(std::launch::async, [&opt, path] {
            return execute(path, opt.seed, opt.out_dir, /*write_trace=*/false);
        }));
    }

    std::vector<RunReport> reports;
    int rc = k_exit_ok;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            reports.push_back(futures[i].get().result.report);
        } catch (const std::exception& ex) {
            err << opt.scenario_paths[i] << ":\n";
            rc = classify(ex, err);
        }
    }
    if (rc != k_exit_ok) return rc;

    // Rank columns: 1 = best (lowest delay, lowest cost, highest
    // throughput). Degenerate durations rank last on throughput.
    auto rank_of = [&](std::size_t i, auto key, bool higher_is_better) {
        int rank = 1;
        for (std::size_t j = 0; j < reports.size(); ++j) {
            if (j == i) continue;
            const double a = key(reports[i]);
            const double b = key(reports[j]);
            if (higher_is_better ? b > a : b < a) ++rank;
        }
        return rank;
    };

    std::ostringstream csv;
    csv << "scenario,seed,avg_delay_min,duration_min,throughput_pods_min,cost_usd,evictions,launches,"
           "workers_final\n";
    nlohmann::json jall = nlohmann::json::array();

    out << std::left << std::setw(14) << "scenario" << std::right << std::setw(12) << "delay_min" << std::setw(14)
        << "duration_min" << std::setw(12) << "pods/min" << std::setw(10) << "cost" << std::setw(8) << "rank_d"
        << std::setw(8) << "rank_t" << std::setw(8) << "rank_c" << "\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const RunReport& r = reports[i];
        const double thr = r.duration_degenerate ? 0.0 : r.throughput_pods_per_min;
        out << std::left << std::setw(14) << r.scenario << std::right << std::setw(12)
            << fixed2(r.avg_scheduling_delay_min) << std::setw(14) << fixed2(r.total_scheduling_duration_min)
            << std::setw(12) << fixed2(thr) << std::setw(10) << ("$" + r.cost_usd) << std::setw(8)
            << rank_of(i, [](const RunReport& x) { return x.avg_scheduling_delay_min; }, false) << std::setw(8)
            << rank_of(i, [](const RunReport& x) { return x.duration_degenerate ? 0.0 : x.throughput_pods_per_min; },
                       true)
            << std::setw(8) << rank_of(i, [](const RunReport& x) { return static_cast<double>(x.cost_micro); }, false)
            << "\n";

        csv << r.scenario << ',' << r.seed << ',' << fixed2(r.avg_scheduling_delay_min) << ','
            << fixed2(r.total_scheduling_duration_min) << ',' << fixed2(thr) << ',' << r.cost_usd << ','
            << r.evictions << ',' << r.launches << ',' << r.workers_final << "\n";
        jall.push_back(nlohmann::json::parse(r.to_json()));
    }

    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "compare.csv", csv.str());
    write_file(fs::path(opt.out_dir) / "compare.json", jall.dump(2) + "\n");
    out << "artifacts    " << opt.out_dir << "\n";
    return k_exit_ok;
}

int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
    int rc = k_exit_ok;
    for (const std::string& path : opt.scenario_paths) {
        ScenarioLoadResult loaded = load_scenario_file(path);
        if (loaded.ok()) {
            out << "ok: " << path << "\n";
        } else {
            rc = k_exit_invalid_input;
            for (const std::string& e : loaded.errors) err << path << ": " << e << "\n";
        }
    }
    return rc;
}

}  // namespace orchsim
