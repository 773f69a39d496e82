#include "hazefuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hazefuse/errors.hpp"
#include "hazefuse/event_log.hpp"
#include "hazefuse/world.hpp"

namespace hazefuse {

namespace {

using nlohmann::json;

// Lazily replayed ground-truth positions per tick: moving vessels other
// than the own ship, then fixed obstacles.
class TruthReplay {
  public:
    explicit TruthReplay(const Scenario& scenario) : scenario_(scenario) {
        n_ticks_ = static_cast<long long>(
            std::floor(scenario.duration_s / scenario.dt_s + 1e-9));
    }

    long long tick_count() const { return n_ticks_ + 1; }

    long long tick_of(double t_s) const {
        long long k = std::llround(t_s / scenario_.dt_s);
        return std::clamp<long long>(k, 0, n_ticks_);
    }

    const std::vector<Vec2>& at_tick(long long k) {
        while (static_cast<long long>(frames_.size()) <= k) {
            world_ = frames_.empty() ? initial_world_state(scenario_)
                                     : step_world(world_, scenario_);
            std::vector<Vec2> frame;
            for (const auto& [id, state] : world_.vessel_states) {
                if (id != scenario_.amv.id) frame.push_back(state.position_m);
            }
            for (const Obstacle& o : scenario_.obstacles) frame.push_back(o.position_m);
            frames_.push_back(std::move(frame));
        }
        return frames_[static_cast<std::size_t>(k)];
    }

  private:
    const Scenario& scenario_;
    long long n_ticks_ = 0;
    WorldState world_;
    std::vector<std::vector<Vec2>> frames_;
};

Vec2 position_from(const json& payload, int line_no) {
    const auto it = payload.find("position_m");
    if (it == payload.end() || !it->is_array() || it->size() != 2 ||
        !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad position_m");
    }
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

bool near_any(Vec2 p, const std::vector<Vec2>& truths) {
    for (Vec2 t : truths) {
        if (distance(p, t) <= kMatchRadiusM) return true;
    }
    return false;
}

void finalize(PrStats& s) {
    s.recall = s.truth_instances == 0
                   ? 1.0
                   : static_cast<double>(s.matched) / static_cast<double>(s.truth_instances);
    s.precision = s.reported == 0
                      ? 1.0
                      : static_cast<double>(s.relevant) / static_cast<double>(s.reported);
}

json pr_json(const PrStats& s) {
    return json{{"matched", s.matched},       {"precision", s.precision},
                {"recall", s.recall},         {"relevant", s.relevant},
                {"reported", s.reported},     {"truth_instances", s.truth_instances}};
}

}  // namespace

MetricsReport compute_metrics(const std::string& log_text, const Scenario& scenario) {
    std::set<std::string> known_kinds;
    for (const std::string& k : event_kind_order()) known_kinds.insert(k);

    std::set<std::string> ais_senders;
    std::set<std::string> vessel_senders;
    for (const VesselSpec& v : scenario.vessels) {
        if (v.ais_equipped) {
            ais_senders.insert(v.id);
            vessel_senders.insert(v.id);
        }
    }
    for (const RemoteStation& s : scenario.remote_stations) ais_senders.insert(s.id);

    // (tick, source) -> reported positions; source "" holds the fused records.
    std::map<std::pair<long long, std::string>, std::vector<Vec2>> reports;
    std::vector<std::pair<double, json>> weather_states;
    std::map<std::string, std::pair<double, double>> first_alert;  // label -> (t, t_cpa)
    long long need_high = 0;

    TruthReplay truth(scenario);
    std::istringstream in(log_text);
    std::string line;
    int line_no = 0;
    long long record_count = 0;
    double prev_t = -1.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!rec.is_object() || rec.size() != 3 || !rec.contains("kind") ||
            !rec.contains("payload") || !rec.contains("t_s") || !rec["kind"].is_string() ||
            !rec["t_s"].is_number()) {
            throw ParseError("line " + std::to_string(line_no) + ": bad record envelope");
        }
        const std::string kind = rec["kind"].get<std::string>();
        const double t = rec["t_s"].get<double>();
        const json& payload = rec["payload"];
        if (known_kinds.count(kind) == 0) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown kind '" + kind +
                             "'");
        }
        if (t < prev_t - 1e-9) {
            throw ParseError("line " + std::to_string(line_no) + ": log out of time order");
        }
        prev_t = std::max(prev_t, t);
        if (t < -1e-9 || t > scenario.duration_s + 1e-9) {
            throw MismatchedScenarioError("record at t=" + std::to_string(t) +
                                          " outside the scenario duration");
        }
        ++record_count;
        const long long k = truth.tick_of(t);

        if (kind == "detection") {
            const auto src = payload.contains("source") && payload["source"].is_string()
                                 ? source_from(payload["source"].get<std::string>())
                                 : std::nullopt;
            if (!src) {
                throw ParseError("line " + std::to_string(line_no) + ": bad detection source");
            }
            reports[{k, std::string(source_name(*src))}].push_back(
                position_from(payload, line_no));
        } else if (kind == "ais") {
            const std::string sender = payload.value("sender", std::string());
            if (ais_senders.count(sender) == 0) {
                throw MismatchedScenarioError("ais record from unknown sender '" + sender +
                                              "'");
            }
            // Shore stations are infrastructure, not targets; only vessel
            // traffic is scored.
            if (vessel_senders.count(sender) != 0) {
                reports[{k, "ais"}].push_back(position_from(payload, line_no));
            }
        } else if (kind == "broadcast") {
            if (payload.value("sender", std::string()) != scenario.amv.id) {
                throw MismatchedScenarioError("broadcast sender is not the own ship");
            }
        } else if (kind == "fused") {
            reports[{k, ""}].push_back(position_from(payload, line_no));
        } else if (kind == "weather_state") {
            weather_states.emplace_back(t, payload);
        } else if (kind == "risk_alert") {
            const std::string label = payload.value("label", std::string());
            if (first_alert.count(label) == 0) {
                first_alert[label] = {t, payload.value("t_cpa_s", 0.0)};
            }
        } else if (kind == "need_to_learn") {
            if (payload.value("score", 0.0) >= 0.5) ++need_high;
        }
    }
    if (record_count == 0) {
        throw MismatchedScenarioError("log holds no records");
    }

    MetricsReport report;
    report.need_to_learn_high = need_high;

    std::vector<std::string> sensor_keys;
    for (Source s : {Source::radar, Source::eo_ir, Source::eo_vis, Source::ais, Source::sonar}) {
        sensor_keys.emplace_back(source_name(s));
    }
    for (const std::string& key : sensor_keys) report.per_sensor[key];

    long long total_truth = 0;
    for (long long k = 0; k < truth.tick_count(); ++k) {
        const std::vector<Vec2>& frame = truth.at_tick(k);
        total_truth += static_cast<long long>(frame.size());

        auto score_tick = [&](PrStats& stats, const std::string& key) {
            const auto it = reports.find({k, key});
            const std::vector<Vec2>* reported =
                it == reports.end() ? nullptr : &it->second;
            for (Vec2 tp : frame) {
                if (reported && near_any(tp, *reported)) ++stats.matched;
            }
            if (reported) {
                stats.reported += static_cast<long long>(reported->size());
                for (Vec2 rp : *reported) {
                    if (near_any(rp, frame)) ++stats.relevant;
                }
            }
        };
        for (const std::string& key : sensor_keys) score_tick(report.per_sensor[key], key);
        score_tick(report.fused, "");
    }
    for (auto& [key, stats] : report.per_sensor) {
        stats.truth_instances = total_truth;
        finalize(stats);
    }
    report.fused.truth_instances = total_truth;
    finalize(report.fused);

    for (std::size_t i = 1; i < scenario.weather_timeline.size(); ++i) {
        const WeatherSegment& seg = scenario.weather_timeline[i];
        WeatherLatency lat;
        lat.label = seg.label;
        lat.t_start_s = seg.t_start_s;
        for (const auto& [t, payload] : weather_states) {
            if (t >= seg.t_start_s - 1e-9 &&
                payload.value("primary", std::string()) == seg.label) {
                lat.latency_s = t - seg.t_start_s;
                break;
            }
        }
        report.weather_latencies.push_back(std::move(lat));
    }

    for (const auto& [label, alert] : first_alert) {
        report.risk_leads.push_back({label, alert.first, alert.second});
    }
    return report;
}

json metrics_to_json(const MetricsReport& m) {
    json per_sensor = json::object();
    for (const auto& [key, stats] : m.per_sensor) per_sensor[key] = pr_json(stats);
    json latencies = json::array();
    for (const WeatherLatency& lat : m.weather_latencies) {
        latencies.push_back(json{{"label", lat.label},
                                 {"latency_s", lat.latency_s ? json(*lat.latency_s) : json()},
                                 {"t_start_s", lat.t_start_s}});
    }
    json leads = json::array();
    for (const RiskLead& lead : m.risk_leads) {
        leads.push_back(json{
            {"label", lead.label}, {"lead_s", lead.lead_s}, {"t_alert_s", lead.t_alert_s}});
    }
    return json{{"fused", pr_json(m.fused)},
                {"need_to_learn_high", m.need_to_learn_high},
                {"per_sensor", per_sensor},
                {"risk_leads", leads},
                {"weather_latencies", latencies}};
}

}  // namespace hazefuse
