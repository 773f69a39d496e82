#ifndef HAZEFUSE_HARNESS_HPP
#define HAZEFUSE_HARNESS_HPP

#include <optional>
#include <string>

#include "hazefuse/event_log.hpp"
#include "hazefuse/scenario.hpp"
#include "hazefuse/weather_engine.hpp"

namespace hazefuse {

// ── Simulation harness ──
// Drives a full closed-loop run: world stepping, sensor polling, weather
// evaluation, schedule and weight adaptation, fusion, risk grading, and the
// canonical log. Runs with equal inputs produce byte-identical logs.

struct RunOptions {
    std::optional<std::string> dictionary_path;  // overrides the built-in dictionary
    std::optional<std::string> save_dictionary_path;  // persist the learned network here
    double eval_interval_s = 10.0;
    double feature_window_s = 20.0;
};

struct RunResult {
    EventLog log;
    WeatherStateNetwork network;  // post-run state, including learned templates
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace hazefuse

#endif  // HAZEFUSE_HARNESS_HPP
