#include "hazefuse/harness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hazefuse/awareness.hpp"
#include "hazefuse/errors.hpp"
#include "hazefuse/fusion.hpp"
#include "hazefuse/history.hpp"
#include "hazefuse/rng.hpp"
#include "hazefuse/sensor_manager.hpp"
#include "hazefuse/sensors.hpp"
#include "hazefuse/world.hpp"

namespace hazefuse {

namespace {

using nlohmann::json;

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json readings_json(const WeatherReadings& r) {
    json out = json::object();
    for (WeatherChannel c : kAllWeatherChannels) {
        out[std::string(channel_key(c))] = r.get(c);
    }
    return out;
}

json detection_json(const Detection& d) {
    json out{{"confidence", d.confidence},
             {"position_m", vec_json(d.position_m)},
             {"source", std::string(source_name(d.source))}};
    if (d.object_hint) out["object_hint"] = *d.object_hint;
    if (d.velocity_mps) out["velocity_mps"] = vec_json(*d.velocity_mps);
    if (d.size_class_estimate) {
        out["size_class"] = std::string(size_class_name(*d.size_class_estimate));
    }
    return out;
}

json settings_json(const SettingsDirective& s) {
    auto eo = [](const EoSettings& e) {
        return json{{"color_mode", std::string(color_mode_name(e.color_mode))},
                    {"dynamic_range", std::string(dynamic_range_name(e.dynamic_range))},
                    {"focus", std::string(focus_mode_name(e.focus))},
                    {"gain", e.gain},
                    {"gamma", e.gamma}};
    };
    return json{{"ir", eo(s.ir)}, {"radar_calibration", s.radar_calibration},
                {"vis", eo(s.vis)}};
}

json profile_json(const WeightProfile& profile) {
    json zones = json::array();
    for (const WeightZone& z : profile.zones) {
        zones.push_back(json{{"d_hi_m", std::isfinite(z.d_hi_m) ? json(z.d_hi_m) : json()},
                             {"d_lo_m", z.d_lo_m},
                             {"eo_ir", z.weights.eo_ir},
                             {"eo_vis", z.weights.eo_vis},
                             {"radar", z.weights.radar}});
    }
    return json{{"ais_weight", profile.ais_weight}, {"zones", zones}};
}

// Feature means with the latest sample carried forward for channels whose
// polling period outruns the window. The strict path throws instead; the
// loop prefers it so the contract stays exercised.
WeatherFeatures features_with_carryforward(const ChannelHistories& histories,
                                           double window_s, double now_t) {
    WeatherFeatures f;
    for (WeatherChannel c : kAllWeatherChannels) {
        const HistoryBuffer& buf = histories[static_cast<int>(c)];
        const auto mean = buf.mean_in_window(now_t - window_s, now_t);
        if (mean) {
            f.set(c, *mean);
        } else if (const auto last = buf.latest()) {
            f.set(c, last->second);
        } else {
            throw EmptyWindowError("no samples at all for channel '" +
                                   std::string(channel_sensor_name(c)) + "'");
        }
    }
    return f;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunResult result;
    result.network =
        options.dictionary_path ? load_network(*options.dictionary_path) : bootstrap_network();
    WeatherStateNetwork& network = result.network;
    EventLog& log = result.log;

    const SensorConfig cfg;
    Rng radar_rng = Rng::substream(scenario.seed, "radar");
    Rng sonar_rng = Rng::substream(scenario.seed, "sonar");
    Rng weather_rng = Rng::substream(scenario.seed, "weather");

    ChannelHistories histories;
    RadarVelocityEstimator radar_vel;
    TrackBook tracks;
    ManeuverMonitor maneuvers;
    RareEventTracker events;

    std::string current = rank_templates(network, 0.0).front();
    WeatherAssessment boot;
    boot.matched = {{current, 1.0}};
    PollScheduler scheduler(resolve_schedule(network, boot), 0.0);

    WeightProfile profile;
    std::optional<json> last_schedule_payload;
    std::optional<json> last_settings_payload;
    std::optional<json> last_profile_payload;

    const long long eval_every =
        std::max<long long>(1, std::llround(options.eval_interval_s / scenario.dt_s));
    const long long n_ticks =
        static_cast<long long>(std::floor(scenario.duration_s / scenario.dt_s + 1e-9));

    WorldState world;
    for (long long k = 0; k <= n_ticks; ++k) {
        world = (k == 0) ? initial_world_state(scenario) : step_world(world, scenario);
        const double t = world.t_s;
        const VesselState& own = world.vessel_states.at(scenario.amv.id);
        const WeatherReadings local_truth = true_weather_at(scenario, own.position_m, t);

        // 1. Poll weather sensors that are due under the active schedule.
        for (const std::string& sensor : scheduler.due(t)) {
            const WeatherChannel channel = *channel_from_sensor(sensor);
            const double value =
                read_weather_channel(local_truth, channel, cfg.weather_noise, weather_rng);
            histories[static_cast<int>(channel)].push(t, value);
            log.emit(t, "weather_reading", json{{"sensor", sensor}, {"value", value}});
        }

        // 2. AIS traffic in, own broadcast out.
        const std::vector<AISMessage> ais_msgs = ais_receive(world, scenario);
        std::vector<Detection> detections;
        std::vector<WeatherSample> remote_samples;
        for (const AISMessage& msg : ais_msgs) {
            json payload{{"heading_rad", msg.heading_rad},
                         {"position_m", vec_json(msg.position_m)},
                         {"sender", msg.sender_id},
                         {"velocity_mps", vec_json(msg.velocity_mps)}};
            if (msg.weather_annex) {
                payload["weather_annex"] = readings_json(*msg.weather_annex);
                remote_samples.push_back({msg.position_m, *msg.weather_annex});
            }
            log.emit(t, "ais", payload);
            const bool from_vessel =
                std::any_of(scenario.vessels.begin(), scenario.vessels.end(),
                            [&](const VesselSpec& v) { return v.id == msg.sender_id; });
            if (from_vessel) detections.push_back(detection_from_ais(msg));
        }
        log.emit(t, "broadcast",
                 json{{"heading_rad", own.heading_rad},
                      {"position_m", vec_json(own.position_m)},
                      {"sender", scenario.amv.id},
                      {"velocity_mps", vec_json(own.velocity_mps)}});

        // 3. Weather evaluation on its own cadence.
        if (k % eval_every == 0) {
            WeatherFeatures features;
            try {
                features = extract_features(histories, options.feature_window_s, t);
            } catch (const EmptyWindowError&) {
                features = features_with_carryforward(histories, options.feature_window_s, t);
            }
            const WeatherAssessment assessment = detect_weather(features, network, current, t);
            // Learning pressure is judged against what was known before this
            // evaluation registers anything new.
            const double need =
                need_to_learn(assessment, network.thresholds.theta_new, events, t);
            const std::string matched = learn(network, assessment, features, t, current);
            const bool state_changed = matched != current || k == 0;
            if (assessment.novel) events.record("weather_novel", t);
            if (matched != current) events.record("weather_state:" + matched, t);
            current = matched;

            json state_payload{{"distance", assessment.distance},
                               {"novel", assessment.novel},
                               {"primary", assessment.matched.front().name}};
            json components = json::array();
            for (const BlendComponent& part : assessment.matched) {
                components.push_back(json{{"name", part.name}, {"weight", part.weight}});
            }
            state_payload["components"] = components;
            state_payload["forecast"] = json(forecast(network, current));
            const WeatherGrid grid = interpolate_weather(own.position_m, remote_samples);
            if (grid.pocket_bearing_rad) {
                state_payload["pocket_bearing_rad"] = *grid.pocket_bearing_rad;
                state_payload["pocket_severity"] = grid.pocket_severity;
            }
            log.emit(t, "weather_state", state_payload);
            log.emit(t, "need_to_learn",
                     json{{"distance", assessment.distance},
                          {"novel", assessment.novel},
                          {"score", need}});

            if (state_changed) {
                const auto schedule = resolve_schedule(network, assessment);
                scheduler.apply(schedule, t);
                json schedule_payload{{"periods", json(schedule)}};
                if (last_schedule_payload != schedule_payload) {
                    log.emit(t, "schedule_update", schedule_payload);
                    last_schedule_payload = schedule_payload;
                }
                const double visibility =
                    visibility_from_aerosol(std::max(0.0, features.get(WeatherChannel::psi)));
                profile = resolve_weight_profile(network, assessment, visibility);
                json profile_payload = profile_json(profile);
                if (last_profile_payload != profile_payload) {
                    log.emit(t, "weight_profile", profile_payload);
                    last_profile_payload = profile_payload;
                }
                json settings_payload = settings_json(resolve_settings(network, assessment));
                if (last_settings_payload != settings_payload) {
                    log.emit(t, "settings", settings_payload);
                    last_settings_payload = settings_payload;
                }
            }
        }

        // 4. Imaging scans run every tick; EO attenuation follows the true
        // local aerosol load.
        std::vector<Detection> radar_dets =
            radar_scan(world, scenario, scenario.amv.id, cfg, radar_rng);
        radar_vel.annotate(radar_dets, scenario.dt_s);
        const std::vector<Detection> ir_dets =
            eo_scan(world, scenario, scenario.amv.id, cfg, EoBand::ir, local_truth.psi);
        const std::vector<Detection> vis_dets =
            eo_scan(world, scenario, scenario.amv.id, cfg, EoBand::vis, local_truth.psi);
        const std::vector<Detection> sonar_dets =
            sonar_scan(world, scenario, scenario.amv.id, cfg, sonar_rng);
        const std::vector<Detection>* batches[] = {&radar_dets, &ir_dets, &vis_dets,
                                                   &sonar_dets};
        for (const auto* batch : batches) {
            for (const Detection& d : *batch) {
                log.emit(t, "detection", detection_json(d));
                detections.push_back(d);
            }
        }

        // 5. Associate, fuse, and grade risk.
        const AssociationResult assoc = associate(detections, own.position_m, profile);
        const std::vector<FusedObject> objects =
            tracks.update(t, assoc, own.position_m, profile, cfg.radar);
        for (const FusedObject& obj : objects) {
            if (obj.identity && obj.velocity_mps && norm(*obj.velocity_mps) > 0.1) {
                maneuvers.observe(obj.label, t, heading_of(*obj.velocity_mps));
            }
            const RiskAssessment risk =
                assess_risk(obj, own.position_m, own.velocity_mps, maneuvers, t);
            json contributors = json::array();
            for (const Detection& d : obj.contributing) {
                contributors.push_back(std::string(source_name(d.source)));
            }
            json fused_payload{{"category", std::string(track_category_name(obj.category))},
                               {"contributors", contributors},
                               {"d_cpa_m", risk.d_cpa_m},
                               {"fid", obj.fid},
                               {"flags", risk.flags},
                               {"label", obj.label},
                               {"position_m", vec_json(obj.position_m)},
                               {"risk", std::string(risk_level_name(risk.risk))},
                               {"t_cpa_s", risk.t_cpa_s}};
            if (obj.identity) fused_payload["identity"] = *obj.identity;
            if (obj.velocity_mps) fused_payload["velocity_mps"] = vec_json(*obj.velocity_mps);
            log.emit(t, "fused", fused_payload);
            for (const std::string& flag : risk.flags) events.record("risk:" + flag, t);
            if (risk.risk == RiskLevel::high) {
                log.emit(t, "risk_alert",
                         json{{"d_cpa_m", risk.d_cpa_m},
                              {"fid", obj.fid},
                              {"flags", risk.flags},
                              {"label", obj.label},
                              {"position_m", vec_json(obj.position_m)},
                              {"t_cpa_s", risk.t_cpa_s}});
            }
        }

        log.flush_tick();
    }

    if (options.save_dictionary_path) {
        save_network(network, *options.save_dictionary_path);
    }
    return result;
}

}  // namespace hazefuse
