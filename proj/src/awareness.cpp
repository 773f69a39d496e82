#include "hazefuse/awareness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hazefuse {

CpaResult closest_point_of_approach(Vec2 own_pos, Vec2 own_vel, Vec2 tgt_pos, Vec2 tgt_vel) {
    const Vec2 p = tgt_pos - own_pos;
    const Vec2 v = tgt_vel - own_vel;
    const double vv = dot(v, v);
    if (vv < 1e-9) {
        return {0.0, norm(p)};
    }
    const double t = std::max(0.0, -dot(p, v) / vv);
    return {t, norm(p + v * t)};
}

std::string_view track_category_name(TrackCategory c) {
    switch (c) {
        case TrackCategory::ais_confirmed: return "ais_confirmed";
        case TrackCategory::radar_eo: return "radar_eo";
        case TrackCategory::small_object: return "small_object";
        case TrackCategory::fixed_structure: return "fixed_structure";
        case TrackCategory::spurious: return "spurious";
        case TrackCategory::underwater: return "underwater";
    }
    return "spurious";
}

std::string_view risk_level_name(RiskLevel level) {
    switch (level) {
        case RiskLevel::none: return "none";
        case RiskLevel::watch: return "watch";
        case RiskLevel::high: return "high";
    }
    return "none";
}

namespace {

bool sources_within(const std::vector<TrackSnapshot>& history,
                    std::initializer_list<Source> allowed) {
    for (const TrackSnapshot& snap : history) {
        for (Source s : snap.sources) {
            if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) return false;
        }
    }
    return true;
}

}  // namespace

TrackCategory classify_unmatched(const std::vector<TrackSnapshot>& history, Vec2 own_pos,
                                 const RadarConfig& radar_cfg, double now_t) {
    if (history.empty()) return TrackCategory::spurious;
    const TrackSnapshot& latest = history.back();

    // (a) one-shot single-source blip
    std::size_t recent = 0;
    for (const TrackSnapshot& snap : history) {
        if (snap.t_s > now_t - 5.0) ++recent;
    }
    if (recent == 1 && latest.sources.size() == 1 && history.size() == 1) {
        return TrackCategory::spurious;
    }

    // (b) EO-only contact that radar plausibly cannot carry
    if (sources_within(history, {Source::eo_vis, Source::eo_ir}) && history.size() >= 3) {
        const bool in_shadow = distance(latest.position_m, own_pos) < radar_cfg.r_min_m;
        const bool small = latest.size_class_estimate == SizeClass::small;
        if (in_shadow || small) return TrackCategory::small_object;
    }

    // (c) persistent and stationary; measured over the whole retained
    // history so sensor noise averages out of the speed estimate
    if (history.size() >= 10) {
        const TrackSnapshot& oldest = history.front();
        const double dt = latest.t_s - oldest.t_s;
        if (dt > 0.0 && distance(latest.position_m, oldest.position_m) / dt < 0.2) {
            return TrackCategory::fixed_structure;
        }
    }

    // (d) sonar-only
    if (sources_within(history, {Source::sonar})) return TrackCategory::underwater;

    return TrackCategory::small_object;
}

const std::vector<TrackSnapshot>* TrackBook::history(const std::string& label) const {
    auto it = tracks_.find(label);
    return it == tracks_.end() ? nullptr : &it->second.history;
}

std::vector<FusedObject> TrackBook::update(double t_s, const AssociationResult& assoc,
                                           Vec2 own_pos, const WeightProfile& profile,
                                           const RadarConfig& radar_cfg) {
    struct TickObject {
        std::vector<Detection> members;
        FusedKinematics kin;
        std::optional<std::string> identity;
        TrackSnapshot snapshot;
        bool grouped = false;
    };

    std::vector<TickObject> tick;
    auto add_object = [&](std::vector<Detection> members, bool grouped) {
        TickObject obj;
        obj.kin = fuse_position(members, own_pos, profile);
        obj.grouped = grouped;
        obj.snapshot.t_s = t_s;
        obj.snapshot.position_m = obj.kin.position_m;
        for (const Detection& d : members) {
            obj.snapshot.sources.insert(d.source);
            if (d.source == Source::ais && d.object_hint) obj.identity = d.object_hint;
            if (d.size_class_estimate &&
                (!obj.snapshot.size_class_estimate ||
                 static_cast<int>(*d.size_class_estimate) >
                     static_cast<int>(*obj.snapshot.size_class_estimate))) {
                obj.snapshot.size_class_estimate = d.size_class_estimate;
            }
        }
        obj.members = std::move(members);
        tick.push_back(std::move(obj));
    };
    for (const std::vector<Detection>& group : assoc.groups) add_object(group, true);
    for (const Detection& d : assoc.unmatched) add_object({d}, false);

    // Forget tracks that have been silent past retention; bounded memory.
    for (auto it = tracks_.begin(); it != tracks_.end();) {
        it = (t_s - it->second.last_seen_t > retention_s_) ? tracks_.erase(it) : std::next(it);
    }

    // AIS-backed objects key on their identity; the rest continue the
    // nearest unclaimed anonymous track within the continuity gate.
    std::set<std::string> claimed;
    std::vector<std::pair<std::size_t, std::string>> labels(tick.size());
    for (std::size_t i = 0; i < tick.size(); ++i) {
        if (!tick[i].identity) continue;
        const std::string label = "ais:" + *tick[i].identity;
        labels[i] = {i, label};
        claimed.insert(label);
    }
    for (std::size_t i = 0; i < tick.size(); ++i) {
        if (tick[i].identity) continue;
        const TickObject& obj = tick[i];
        std::string best_label;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& [label, track] : tracks_) {
            if (track.ais_backed || claimed.count(label)) continue;
            const double gap_s = t_s - track.last_seen_t;
            const double gate = gate_m_per_s_ * std::max(gap_s, 1.0);
            const double d = distance(obj.snapshot.position_m, track.history.back().position_m);
            if (d <= gate && d < best_d) {
                best_d = d;
                best_label = label;
            }
        }
        if (best_label.empty()) {
            best_label = "track-" + std::to_string(next_label_++);
        }
        labels[i] = {i, best_label};
        claimed.insert(best_label);
    }

    std::vector<FusedObject> out;
    for (std::size_t i = 0; i < tick.size(); ++i) {
        TickObject& obj = tick[i];
        const std::string& label = labels[i].second;
        auto it = tracks_.find(label);
        if (it == tracks_.end()) {
            Track fresh;
            fresh.fid = next_fid_++;
            fresh.first_seen_t = t_s;
            fresh.ais_backed = obj.identity.has_value();
            it = tracks_.emplace(label, std::move(fresh)).first;
        }
        Track& track = it->second;
        track.last_seen_t = t_s;
        track.history.push_back(obj.snapshot);
        if (track.history.size() > 40) track.history.erase(track.history.begin());

        FusedObject fo;
        fo.fid = track.fid;
        fo.label = label;
        fo.contributing = std::move(obj.members);
        fo.position_m = obj.kin.position_m;
        fo.velocity_mps = obj.kin.velocity_mps;
        fo.identity = obj.identity;
        fo.first_seen_t = track.first_seen_t;
        fo.last_seen_t = t_s;
        if (obj.identity) {
            fo.category = TrackCategory::ais_confirmed;
        } else if (obj.grouped) {
            // Groups without AIS still get the history rules: an EO-only
            // pair in the radar shadow is a small object, a stationary
            // multi-sensor return a structure. Everything else is radar_eo.
            const TrackCategory by_rules =
                classify_unmatched(track.history, own_pos, radar_cfg, t_s);
            const bool eo_only =
                sources_within(track.history, {Source::eo_vis, Source::eo_ir});
            if (by_rules == TrackCategory::fixed_structure ||
                (by_rules == TrackCategory::small_object && eo_only)) {
                fo.category = by_rules;
            } else {
                fo.category = TrackCategory::radar_eo;
            }
        } else {
            fo.category = classify_unmatched(track.history, own_pos, radar_cfg, t_s);
        }
        out.push_back(std::move(fo));
    }
    std::sort(out.begin(), out.end(),
              [](const FusedObject& a, const FusedObject& b) { return a.fid < b.fid; });
    return out;
}

void ManeuverMonitor::observe(const std::string& label, double t_s, double heading_rad) {
    auto& track = samples_[label];
    double h = heading_rad;
    if (!track.empty()) {
        // Unwrap against the previous sample so variance ignores the seam.
        const double prev = track.back().second;
        while (h - prev > std::numbers::pi) h -= 2.0 * std::numbers::pi;
        while (h - prev < -std::numbers::pi) h += 2.0 * std::numbers::pi;
    }
    track.emplace_back(t_s, h);
    while (!track.empty() && track.front().first < t_s - 120.0) {
        track.erase(track.begin());
    }
}

double ManeuverMonitor::heading_variance(const std::string& label, double now_t,
                                         double window_s) const {
    auto it = samples_.find(label);
    if (it == samples_.end()) return 0.0;
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (const auto& [t, h] : it->second) {
        if (t >= now_t - window_s && t <= now_t) {
            sum += h;
            sum2 += h * h;
            ++n;
        }
    }
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    return std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
}

RiskAssessment assess_risk(const FusedObject& object, Vec2 own_pos, Vec2 own_vel,
                           const ManeuverMonitor& maneuvers, double now_t,
                           const RiskParams& params) {
    RiskAssessment r;
    r.fid = object.fid;

    const Vec2 tgt_vel = object.velocity_mps.value_or(Vec2{0.0, 0.0});
    const CpaResult cpa = closest_point_of_approach(own_pos, own_vel, object.position_m, tgt_vel);
    r.t_cpa_s = cpa.t_s;
    r.d_cpa_m = cpa.d_m;

    const double range = distance(object.position_m, own_pos);
    const double speed = object.velocity_mps ? norm(*object.velocity_mps) : 0.0;

    const bool cpa_breach = cpa.d_m < params.cpa_breach_m && cpa.t_s < params.cpa_horizon_s;
    const bool fast_mover = speed > params.fast_mover_mps;
    const bool close_quarters = range < params.close_quarters_m;
    const bool complex_maneuver =
        maneuvers.heading_variance(object.label, now_t, params.maneuver_window_s) >
        params.heading_var_rad2;
    const bool no_ais_small = object.category == TrackCategory::small_object;
    const bool path_intersect = cpa_breach && cpa.t_s > 0.0;

    if (close_quarters) r.flags.push_back("close_quarters");
    if (complex_maneuver) r.flags.push_back("complex_maneuver");
    if (cpa_breach) r.flags.push_back("cpa_breach");
    if (fast_mover) r.flags.push_back("fast_mover");
    if (no_ais_small) r.flags.push_back("no_ais_small");
    if (path_intersect) r.flags.push_back("path_intersect");

    if (cpa_breach || (close_quarters && fast_mover)) {
        r.risk = RiskLevel::high;
    } else if (!r.flags.empty()) {
        r.risk = RiskLevel::watch;
    }
    return r;
}

double severity_of(const WeatherReadings& r) {
    return clamp01(r.psi / 230.0) + clamp01(r.rain_mmph / 10.0) + clamp01(r.wind_mps / 20.0);
}

WeatherGrid interpolate_weather(Vec2 own_pos, const std::vector<WeatherSample>& samples) {
    constexpr int kBearings = 16;
    constexpr int kRadii = 8;
    constexpr double kStepM = 2500.0;
    constexpr double kEpsM = 1.0;

    WeatherGrid grid;
    std::array<double, kBearings> ray_mean{};
    for (int b = 0; b < kBearings; ++b) {
        const double bearing = 2.0 * std::numbers::pi * b / kBearings;
        const Vec2 dir{std::sin(bearing), std::cos(bearing)};
        double ray_sum = 0.0;
        for (int k = 1; k <= kRadii; ++k) {
            WeatherCell cell;
            cell.position_m = own_pos + dir * (kStepM * k);
            if (!samples.empty()) {
                double num = 0.0, den = 0.0;
                for (const WeatherSample& s : samples) {
                    const double d = distance(s.position_m, cell.position_m) + kEpsM;
                    const double w = 1.0 / (d * d);
                    num += w * severity_of(s.readings);
                    den += w;
                }
                cell.severity = num / den;
            }
            ray_sum += cell.severity;
            grid.cells.push_back(cell);
        }
        ray_mean[b] = ray_sum / kRadii;
    }
    if (!samples.empty()) {
        int best = 0;
        for (int b = 1; b < kBearings; ++b) {
            if (ray_mean[b] < ray_mean[best]) best = b;
        }
        grid.pocket_bearing_rad = 2.0 * std::numbers::pi * best / kBearings;
        grid.pocket_severity = ray_mean[best];
    }
    return grid;
}

void RareEventTracker::record(const std::string& kind, double t_s) {
    auto& times = events_[kind];
    times.push_back(t_s);
    // Trim anything already outside the longest window we are asked about.
    while (!times.empty() && times.front() < t_s - 7200.0) times.erase(times.begin());
}

double RareEventTracker::rare_rate(double now_t, double window_s) const {
    long long total = 0;
    long long rare = 0;
    for (const auto& [kind, times] : events_) {
        long long in_window = 0;
        for (double t : times) {
            if (t > now_t - window_s && t <= now_t) ++in_window;
        }
        total += in_window;
        if (in_window > 0 && in_window < 3) rare += in_window;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(rare) / static_cast<double>(total);
}

double need_to_learn(const WeatherAssessment& assessment, double theta_new,
                     const RareEventTracker& events, double now_t) {
    const double novelty =
        assessment.novel ? 1.0 : (theta_new > 0.0 ? assessment.distance / theta_new : 0.0);
    const double rarity = std::min(1.0, events.rare_rate(now_t));
    return clamp01(0.7 * novelty + 0.3 * rarity);
}

}  // namespace hazefuse
