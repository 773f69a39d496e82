#include "hazefuse/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hazefuse/errors.hpp"

namespace hazefuse {

double beta_vis(double psi) {
    if (psi < 0.0) throw DomainError("aerosol index must be >= 0");
    return std::max(kBetaClearPerM, kPsiToBetaPerM * psi);
}

double visibility_from_aerosol(double psi) {
    if (psi < 0.0) throw DomainError("aerosol index must be >= 0");
    const double beta_haze = kPsiToBetaPerM * psi;
    // At or below the clear-air floor the ceiling applies exactly.
    if (beta_haze <= kBetaClearPerM) return kMaxVisibilityM;
    return 3.912 / beta_haze;
}

namespace {

struct Target {
    std::string id;
    Vec2 position_m;
    SizeClass size_class;
    double contrast;
};

double vessel_contrast(const VesselSpec& v) {
    return v.contrast > 0.0 ? v.contrast : default_contrast(v.size_class);
}

// Surface targets in a fixed order: vessels sorted by id (excluding the own
// ship), then surface obstacles by index. The order pins per-scan RNG
// consumption for replay.
std::vector<Target> surface_targets(const WorldState& world, const Scenario& scenario,
                                    const std::string& own_id) {
    std::vector<Target> targets;
    for (const VesselSpec& v : scenario.vessels) {
        if (v.id == own_id) continue;
        targets.push_back({v.id, world.vessel_states.at(v.id).position_m, v.size_class,
                           vessel_contrast(v)});
    }
    if (scenario.amv.id != own_id) {
        targets.push_back({scenario.amv.id, world.vessel_states.at(scenario.amv.id).position_m,
                           scenario.amv.size_class, vessel_contrast(scenario.amv)});
    }
    std::sort(targets.begin(), targets.end(),
              [](const Target& a, const Target& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
        const Obstacle& o = scenario.obstacles[i];
        if (o.submerged) continue;
        const SizeClass cls = obstacle_size_class(o);
        targets.push_back({"obstacle-" + std::to_string(i), o.position_m, cls,
                           default_contrast(cls)});
    }
    return targets;
}

}  // namespace

std::vector<Detection> eo_scan(const WorldState& world, const Scenario& scenario,
                               const std::string& own_id, const SensorConfig& cfg,
                               EoBand band, double psi) {
    const double beta = beta_vis(psi) * (band == EoBand::ir ? cfg.eo.alpha_ir : 1.0);
    const Vec2 own = world.vessel_states.at(own_id).position_m;
    std::vector<Detection> out;
    for (const Target& tgt : surface_targets(world, scenario, own_id)) {
        const double d = distance(tgt.position_m, own);
        if (tgt.contrast <= cfg.eo.epsilon_contrast) continue;
        const double d_contrast = std::log(tgt.contrast / cfg.eo.epsilon_contrast) / beta;
        if (d > std::min(cfg.eo.hw_range_m, d_contrast)) continue;
        Detection det;
        det.source = band == EoBand::ir ? Source::eo_ir : Source::eo_vis;
        det.t_s = world.t_s;
        det.position_m = tgt.position_m;
        det.size_class_estimate = tgt.size_class;
        det.confidence = tgt.contrast * std::exp(-beta * d);
        out.push_back(det);
    }
    return out;
}

std::vector<Detection> radar_scan(const WorldState& world, const Scenario& scenario,
                                  const std::string& own_id, const SensorConfig& cfg,
                                  Rng& rng) {
    const Vec2 own = world.vessel_states.at(own_id).position_m;
    std::vector<Detection> out;
    for (const Target& tgt : surface_targets(world, scenario, own_id)) {
        // Exactly one detection draw per candidate, in range or not.
        const bool hit = rng.bernoulli(cfg.radar.p_det_for(tgt.size_class));
        const double d = distance(tgt.position_m, own);
        if (!hit || d < cfg.radar.r_min_m || d > cfg.radar.r_max_m) continue;
        Detection det;
        det.source = Source::radar;
        det.t_s = world.t_s;
        det.position_m = {tgt.position_m.x + rng.normal(0.0, cfg.radar.sigma_pos_m),
                          tgt.position_m.y + rng.normal(0.0, cfg.radar.sigma_pos_m)};
        det.confidence = cfg.radar.p_det_for(tgt.size_class);
        out.push_back(det);
    }
    return out;
}

std::vector<Detection> sonar_scan(const WorldState& world, const Scenario& scenario,
                                  const std::string& own_id, const SensorConfig& cfg,
                                  Rng& rng) {
    const Vec2 own = world.vessel_states.at(own_id).position_m;
    std::vector<Detection> out;
    for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
        const Obstacle& o = scenario.obstacles[i];
        if (cfg.sonar.submerged_only && !o.submerged) continue;
        const bool hit = rng.bernoulli(cfg.sonar.p_det);
        const double d = distance(o.position_m, own);
        if (!hit || d > cfg.sonar.r_max_m) continue;
        Detection det;
        det.source = Source::sonar;
        det.t_s = world.t_s;
        det.position_m = {o.position_m.x + rng.normal(0.0, cfg.sonar.sigma_pos_m),
                          o.position_m.y + rng.normal(0.0, cfg.sonar.sigma_pos_m)};
        det.confidence = cfg.sonar.p_det;
        out.push_back(det);
    }
    return out;
}

std::vector<AISMessage> ais_receive(const WorldState& world, const Scenario& scenario) {
    std::vector<AISMessage> out;
    std::vector<const VesselSpec*> senders;
    for (const VesselSpec& v : scenario.vessels) {
        if (v.ais_equipped) senders.push_back(&v);
    }
    std::sort(senders.begin(), senders.end(),
              [](const VesselSpec* a, const VesselSpec* b) { return a->id < b->id; });
    for (const VesselSpec* v : senders) {
        const VesselState& st = world.vessel_states.at(v->id);
        AISMessage msg;
        msg.sender_id = v->id;
        msg.t_s = world.t_s;
        msg.position_m = st.position_m;
        msg.velocity_mps = st.velocity_mps;
        msg.heading_rad = st.heading_rad;
        msg.weather_annex = true_weather_at(scenario, st.position_m, world.t_s);
        out.push_back(msg);
    }
    std::vector<const RemoteStation*> stations;
    for (const RemoteStation& st : scenario.remote_stations) stations.push_back(&st);
    std::sort(stations.begin(), stations.end(),
              [](const RemoteStation* a, const RemoteStation* b) { return a->id < b->id; });
    for (const RemoteStation* st : stations) {
        AISMessage msg;
        msg.sender_id = st->id;
        msg.t_s = world.t_s;
        msg.position_m = st->position_m;
        msg.velocity_mps = {0.0, 0.0};
        msg.heading_rad = 0.0;
        if (st->weather_annex) {
            msg.weather_annex = true_weather_at(scenario, st->position_m, world.t_s);
        }
        out.push_back(msg);
    }
    return out;
}

double read_weather_channel(const WeatherReadings& truth, WeatherChannel channel,
                            const WeatherNoiseConfig& noise, Rng& rng) {
    double v = truth.get(channel) + rng.normal(0.0, noise.stddev_for(channel));
    if (v < 0.0) v = 0.0;
    if (channel == WeatherChannel::humidity && v > 100.0) v = 100.0;
    return v;
}

WeatherReadings weather_sensors_read(const WeatherReadings& truth,
                                     const WeatherNoiseConfig& noise, Rng& rng) {
    WeatherReadings r;
    for (WeatherChannel c : kAllWeatherChannels) {
        r.set(c, read_weather_channel(truth, c, noise, rng));
    }
    return r;
}

void RadarVelocityEstimator::annotate(std::vector<Detection>& current, double dt_s) {
    if (dt_s > 0.0) {
        for (Detection& det : current) {
            const Vec2* best = nullptr;
            double best_d = gate_m_;
            for (const Vec2& prev : previous_positions_) {
                const double d = distance(det.position_m, prev);
                if (d <= best_d) {
                    best_d = d;
                    best = &prev;
                }
            }
            if (best != nullptr) {
                det.velocity_mps = (det.position_m - *best) / dt_s;
            }
        }
    }
    previous_positions_.clear();
    for (const Detection& det : current) previous_positions_.push_back(det.position_m);
}

Detection detection_from_ais(const AISMessage& msg) {
    Detection det;
    det.source = Source::ais;
    det.t_s = msg.t_s;
    det.object_hint = msg.sender_id;
    det.position_m = msg.position_m;
    det.velocity_mps = msg.velocity_mps;
    det.confidence = 1.0;
    return det;
}

}  // namespace hazefuse
