#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hazefuse/errors.hpp"
#include "hazefuse/harness.hpp"
#include "hazefuse/metrics.hpp"
#include "hazefuse/scenario.hpp"

namespace {

void require_readable(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw hazefuse::IoError("cannot read '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hazefuse::IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hazefuse::IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw hazefuse::IoError("write failed for '" + path + "'");
}

int do_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
           const std::string& log_path, const std::string& metrics_path,
           const std::string& save_dict_path) {
    require_readable(scenario_path);
    hazefuse::Scenario scenario = hazefuse::load_scenario(scenario_path);
    if (seed) scenario.seed = *seed;

    hazefuse::RunOptions options;
    if (const char* dict = std::getenv("HAZEFUSE_DICT"); dict && *dict) {
        require_readable(dict);
        options.dictionary_path = dict;
    }
    if (!save_dict_path.empty()) options.save_dictionary_path = save_dict_path;

    const hazefuse::RunResult result = hazefuse::run_scenario(scenario, options);
    write_file(log_path, result.log.text());
    if (!metrics_path.empty()) {
        const hazefuse::MetricsReport report =
            hazefuse::compute_metrics(result.log.text(), scenario);
        write_file(metrics_path, hazefuse::metrics_to_json(report).dump(2) + "\n");
    }
    std::cout << result.log.lines().size() << " records -> " << log_path << "\n";
    return 0;
}

int do_validate(const std::string& scenario_path) {
    require_readable(scenario_path);
    const std::vector<std::string> diagnostics =
        hazefuse::validate_scenario_file(scenario_path);
    if (diagnostics.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const std::string& d : diagnostics) std::cerr << d << "\n";
    return 2;
}

int do_metrics(const std::string& log_path, const std::string& scenario_path) {
    require_readable(scenario_path);
    require_readable(log_path);
    const hazefuse::Scenario scenario = hazefuse::load_scenario(scenario_path);
    const hazefuse::MetricsReport report =
        hazefuse::compute_metrics(read_file(log_path), scenario);
    std::cout << hazefuse::metrics_to_json(report).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive multi-sensor fusion harness"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string log_path;
    std::string metrics_path;
    std::string save_dict_path;
    std::optional<std::uint64_t> seed;

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write the event log");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--log", log_path, "output JSONL event log")->required();
    run->add_option("--metrics", metrics_path, "also score the run into this JSON file");
    run->add_option("--save-dict", save_dict_path, "persist the learned weather dictionary");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* metrics = app.add_subcommand("metrics", "score an existing log");
    metrics->add_option("--log", log_path, "JSONL event log")->required();
    metrics->add_option("--scenario", scenario_path, "scenario that produced it")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return do_run(scenario_path, seed, log_path, metrics_path, save_dict_path);
        }
        if (validate->parsed()) return do_validate(scenario_path);
        return do_metrics(log_path, scenario_path);
    } catch (const hazefuse::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hazefuse::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
