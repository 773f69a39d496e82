#ifndef HAZEFUSE_SCENARIO_HPP
#define HAZEFUSE_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hazefuse/types.hpp"

namespace hazefuse {

// One constant-velocity motion segment. A vessel holds the first leg's
// position until that leg starts; afterwards position is
// leg.position_m + leg.velocity_mps * (t - leg.start_time_s) for the
// most recent leg.
struct MotionLeg {
    double start_time_s = 0.0;
    Vec2 position_m;
    Vec2 velocity_mps;
};

struct VesselSpec {
    std::string id;
    SizeClass size_class = SizeClass::medium;
    bool ais_equipped = false;
    std::vector<MotionLeg> legs;
    double contrast = 0.0;  // inherent contrast C0 in (0,1]; 0 in a file means "class default"
};

// Fixed object. Submerged obstacles are sonar targets; surface obstacles
// behave as radar/EO targets with a size class derived from extent.
struct Obstacle {
    Vec2 position_m;
    double extent_m = 0.0;
    bool submerged = false;
};

SizeClass obstacle_size_class(const Obstacle& o);

// Per-channel linear spatial gradient, units per km east/north of the origin.
using WeatherGradient = std::array<Vec2, kWeatherChannelCount>;

struct WeatherSegment {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    WeatherReadings values;
    std::string label;
    WeatherGradient gradient{};  // defaults to zero: spatially uniform weather
};

// Shore or buoy AIS transmitter; contributes traffic-free AIS messages and,
// when enabled, a remote weather annex.
struct RemoteStation {
    std::string id;
    Vec2 position_m;
    bool weather_annex = false;
};

struct Scenario {
    double duration_s = 0.0;
    double dt_s = 1.0;
    std::uint64_t seed = 0;
    VesselSpec amv;
    std::vector<VesselSpec> vessels;
    std::vector<Obstacle> obstacles;
    std::vector<WeatherSegment> weather_timeline;
    std::vector<RemoteStation> remote_stations;
};

// Reads and fully validates a scenario file (JSON). Throws ParseError when
// the file cannot be read or parsed, ValidationError naming the first
// violated invariant otherwise.
Scenario load_scenario(const std::string& path);

Scenario scenario_from_json_text(const std::string& text);

// All invariant violations as human-readable diagnostics; empty means valid.
// Never throws on invalid content (a parse failure becomes one diagnostic).
std::vector<std::string> validate_scenario_file(const std::string& path);

std::vector<std::string> validate_scenario_text(const std::string& text);

}  // namespace hazefuse

#endif  // HAZEFUSE_SCENARIO_HPP
