#ifndef HAZEFUSE_METRICS_HPP
#define HAZEFUSE_METRICS_HPP

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hazefuse/scenario.hpp"

namespace hazefuse {

// ── Post-run metrics ──
// Replays the scenario's deterministic ground truth against a finished log
// and scores detection quality per sensor and for the fused output.

struct PrStats {
    long long truth_instances = 0;  // (truth object, tick) pairs
    long long matched = 0;          // truth instances covered within the match radius
    long long reported = 0;         // records attributed to this source
    long long relevant = 0;         // reported records within the radius of some truth
    double recall = 0.0;
    double precision = 0.0;
};

struct WeatherLatency {
    std::string label;                  // expected template at the transition
    double t_start_s = 0.0;             // segment start
    std::optional<double> latency_s;    // first matching weather_state minus start
};

struct RiskLead {
    std::string label;       // track label of the alerted object
    double t_alert_s = 0.0;  // first high-risk alert
    double lead_s = 0.0;     // projected time to closest approach at that alert
};

struct MetricsReport {
    std::map<std::string, PrStats> per_sensor;  // keyed by source name
    PrStats fused;
    std::vector<WeatherLatency> weather_latencies;  // one per segment transition
    std::vector<RiskLead> risk_leads;               // one per alerted track
    long long need_to_learn_high = 0;               // records with score >= 0.5
};

inline constexpr double kMatchRadiusM = 150.0;

// Scores a JSONL log against the scenario that produced it. Throws
// ParseError on malformed lines and MismatchedScenarioError when the log
// refers to senders or times the scenario cannot have produced.
MetricsReport compute_metrics(const std::string& log_text, const Scenario& scenario);

nlohmann::json metrics_to_json(const MetricsReport& m);

}  // namespace hazefuse

#endif  // HAZEFUSE_METRICS_HPP
