#ifndef HAZEFUSE_AWARENESS_HPP
#define HAZEFUSE_AWARENESS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hazefuse/fusion.hpp"
#include "hazefuse/sensors.hpp"
#include "hazefuse/types.hpp"
#include "hazefuse/weather_engine.hpp"

namespace hazefuse {

// ── Situational awareness ──
// Everything downstream of association: track continuity and labeling,
// classification of unmatched contacts, closest-point-of-approach geometry,
// rule-based risk grading, the interpolated area weather picture, and the
// learning-pressure signal.

struct CpaResult {
    double t_s = 0.0;  // time of closest approach from now, clamped >= 0
    double d_m = 0.0;  // separation at that time
};

// Closest point of approach for constant-velocity motion. Relative speeds
// below 1e-9 (squared) degenerate to the current separation at t = 0.
CpaResult closest_point_of_approach(Vec2 own_pos, Vec2 own_vel, Vec2 tgt_pos, Vec2 tgt_vel);

// ── Fused objects and track continuity ──

enum class TrackCategory {
    ais_confirmed,    // group anchored by an AIS report
    radar_eo,         // multi-source group without AIS
    small_object,     // EO-only or otherwise radar-invisible contact
    fixed_structure,  // persistent and stationary
    spurious,         // one-shot single-source blip
    underwater,       // sonar-only contact
};

std::string_view track_category_name(TrackCategory c);

struct FusedObject {
    int fid = 0;
    std::string label;  // AIS identity when backed, else "track-<n>"
    std::vector<Detection> contributing;
    Vec2 position_m;
    std::optional<Vec2> velocity_mps;
    std::optional<std::string> identity;  // AIS sender id
    TrackCategory category = TrackCategory::spurious;
    double first_seen_t = 0.0;
    double last_seen_t = 0.0;
};

struct TrackSnapshot {
    double t_s = 0.0;
    Vec2 position_m;
    std::set<Source> sources;
    std::optional<SizeClass> size_class_estimate;
};

// Classification rules for a contact's short history, first match wins:
// single-source one-shot within the last 5 s -> spurious; EO-only and
// (inside the radar shadow or small) with >= 3 sightings -> small_object;
// >= 10 sightings moving slower than 0.2 mps -> fixed_structure; sonar-only
// -> underwater; anything else -> small_object.
TrackCategory classify_unmatched(const std::vector<TrackSnapshot>& history, Vec2 own_pos,
                                 const RadarConfig& radar_cfg, double now_t);

// Carries track labels across ticks by nearest-neighbour continuity
// (gate 200 m per second of gap); AIS-backed objects key on their identity.
// Owns the per-track history that classification and risk rules consult.
class TrackBook {
  public:
    std::vector<FusedObject> update(double t_s, const AssociationResult& assoc,
                                    Vec2 own_pos, const WeightProfile& profile,
                                    const RadarConfig& radar_cfg);

    const std::vector<TrackSnapshot>* history(const std::string& label) const;

  private:
    struct Track {
        int fid = 0;
        double first_seen_t = 0.0;
        double last_seen_t = 0.0;
        bool ais_backed = false;
        std::vector<TrackSnapshot> history;
    };

    std::map<std::string, Track> tracks_;
    int next_fid_ = 1;
    int next_label_ = 1;
    double gate_m_per_s_ = 200.0;
    double retention_s_ = 30.0;
};

// ── Risk grading ──

enum class RiskLevel { none, watch, high };
std::string_view risk_level_name(RiskLevel level);

struct RiskParams {
    double cpa_breach_m = 500.0;
    double cpa_horizon_s = 600.0;
    double fast_mover_mps = 15.0;
    double close_quarters_m = 1000.0;
    double heading_var_rad2 = 0.3;
    double maneuver_window_s = 30.0;
};

struct RiskAssessment {
    int fid = 0;
    double t_cpa_s = 0.0;
    double d_cpa_m = 0.0;
    std::vector<std::string> flags;  // sorted rule names
    RiskLevel risk = RiskLevel::none;
};

// Per-track heading history behind the complex_maneuver rule. Headings are
// unwrapped against the previous sample so variance ignores the 2pi seam.
class ManeuverMonitor {
  public:
    void observe(const std::string& label, double t_s, double heading_rad);

    // Population variance of unwrapped headings in [now - window, now].
    // Fewer than two samples give 0.
    double heading_variance(const std::string& label, double now_t, double window_s) const;

  private:
    std::map<std::string, std::vector<std::pair<double, double>>> samples_;
};

// Rule evaluation for one fused object. Flags: cpa_breach (d_cpa below the
// safe radius inside the horizon), fast_mover, close_quarters,
// complex_maneuver, no_ais_small (small_object category), path_intersect
// (breach with t_cpa > 0). High risk needs cpa_breach, or close_quarters
// together with fast_mover; any other firing flag grades watch. A missing
// velocity is treated as zero for the projection.
RiskAssessment assess_risk(const FusedObject& object, Vec2 own_pos, Vec2 own_vel,
                           const ManeuverMonitor& maneuvers, double now_t,
                           const RiskParams& params = {});

// ── Area weather picture ──

struct WeatherSample {
    Vec2 position_m;
    WeatherReadings readings;
};

struct WeatherCell {
    Vec2 position_m;
    double severity = 0.0;
};

struct WeatherGrid {
    std::vector<WeatherCell> cells;  // 16 bearings x 8 radii, bearing-major
    std::optional<double> pocket_bearing_rad;  // absent without remote reports
    double pocket_severity = 0.0;
};

// Normalized local severity in [0, 3]: haze, rain, and wind terms each
// clipped to [0, 1].
double severity_of(const WeatherReadings& r);

// Inverse-distance-squared interpolation of remote reports onto a polar
// grid around the own ship: 16 compass bearings, radii 2.5 km to 20 km in
// 2.5 km steps. The pocket is the ray with the lowest mean severity (ties
// go to the smaller bearing).
WeatherGrid interpolate_weather(Vec2 own_pos, const std::vector<WeatherSample>& samples);

// ── Learning pressure ──

// Counts environmental event occurrences by kind inside a sliding window.
class RareEventTracker {
  public:
    void record(const std::string& kind, double t_s);

    // Fraction of windowed events whose kind occurred fewer than 3 times in
    // the window; 0 when the window is empty.
    double rare_rate(double now_t, double window_s = 3600.0) const;

  private:
    std::map<std::string, std::vector<double>> events_;
};

// Blend of weather-space novelty and event rarity, clamped to [0, 1].
// Novelty contributes 0.7 (scaled by distance / theta_new for matched
// assessments), rarity 0.3.
double need_to_learn(const WeatherAssessment& assessment, double theta_new,
                     const RareEventTracker& events, double now_t);

}  // namespace hazefuse

#endif  // HAZEFUSE_AWARENESS_HPP
