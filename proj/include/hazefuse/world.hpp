#ifndef HAZEFUSE_WORLD_HPP
#define HAZEFUSE_WORLD_HPP

#include <map>
#include <string>

#include "hazefuse/scenario.hpp"
#include "hazefuse/types.hpp"

namespace hazefuse {

struct VesselState {
    Vec2 position_m;
    Vec2 velocity_mps;
    double heading_rad = 0.0;  // compass convention; held through zero-speed legs
};

// Immutable ground-truth snapshot for one tick. Includes the AMV.
struct WorldState {
    double t_s = 0.0;
    std::map<std::string, VesselState> vessel_states;
    WeatherSegment active_weather;
};

WorldState initial_world_state(const Scenario& scenario);

// Advances by scenario.dt_s. Purely kinematic and deterministic.
// Throws EndOfScenarioError when the step would pass duration_s.
WorldState step_world(const WorldState& state, const Scenario& scenario);

// Active timeline segment at t. Throws OutOfRangeError outside [0, duration].
const WeatherSegment& active_segment(const Scenario& scenario, double t_s);

// Ground-truth weather sampled at a position and time: segment values plus
// the segment's linear spatial gradient, clamped to physical ranges.
WeatherReadings true_weather_at(const Scenario& scenario, Vec2 position_m, double t_s);

}  // namespace hazefuse

#endif  // HAZEFUSE_WORLD_HPP
