#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orchsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"discrete-event simulator for container orchestration on elastic clusters"};
    app.require_subcommand(1);

    std::string out_flag;
    std::optional<std::uint64_t> seed;

    // run
    auto* run = app.add_subcommand("run", "run one scenario and write its report and series");
    std::string run_scenario_path;
    bool run_trace = false;
    run->add_option("scenario", run_scenario_path, "scenario JSON file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_flag, "output directory (default: $ORCHESTRA_SIM_OUT or ./out)");
    run->add_flag("--trace", run_trace, "also write the full event trace (trace.jsonl)");

    // compare
    auto* compare = app.add_subcommand("compare", "run several scenarios and tabulate them side by side");
    std::vector<std::string> compare_paths;
    compare->add_option("scenarios", compare_paths, "scenario JSON files")->required()->expected(-2);
    compare->add_option("--seed", seed, "override every scenario's seed");
    compare->add_option("--out", out_flag, "output directory (default: $ORCHESTRA_SIM_OUT or ./out)");

    // validate
    auto* validate = app.add_subcommand("validate", "check scenario files without running them");
    std::vector<std::string> validate_paths;
    validate->add_option("scenarios", validate_paths, "scenario JSON files")->required()->expected(-1);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        orchsim::RunOptions opt;
        opt.scenario_path = run_scenario_path;
        opt.seed = seed;
        opt.out_dir = orchsim::resolve_out_dir(out_flag);
        opt.write_trace = run_trace;
        return orchsim::cmd_run(opt, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        orchsim::CompareOptions opt;
        opt.scenario_paths = compare_paths;
        opt.seed = seed;
        opt.out_dir = orchsim::resolve_out_dir(out_flag);
        return orchsim::cmd_compare(opt, std::cout, std::cerr);
    }
    orchsim::ValidateOptions opt;
    opt.scenario_paths = validate_paths;
    return orchsim::cmd_validate(opt, std::cout, std::cerr);
}
