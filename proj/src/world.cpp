#include "hazefuse/world.hpp"

#include <cmath>

#include "hazefuse/errors.hpp"

namespace hazefuse {

namespace {

// Kinematics are evaluated analytically from the active leg rather than
// accumulated, so a state at time t never depends on the step history.
VesselState state_at(const VesselSpec& spec, double t_s, double prev_heading) {
    const MotionLeg* active = nullptr;
    for (const MotionLeg& leg : spec.legs) {
        if (leg.start_time_s <= t_s) active = &leg;
    }
    VesselState st;
    if (active == nullptr) {
        // Before the first leg starts the vessel waits at its start point.
        st.position_m = spec.legs.front().position_m;
        st.velocity_mps = {0.0, 0.0};
        st.heading_rad = prev_heading;
        return st;
    }
    st.position_m = active->position_m + active->velocity_mps * (t_s - active->start_time_s);
    st.velocity_mps = active->velocity_mps;
    st.heading_rad = norm(st.velocity_mps) > 0.0 ? heading_of(st.velocity_mps) : prev_heading;
    return st;
}

}  // namespace

WorldState initial_world_state(const Scenario& scenario) {
    WorldState w;
    w.t_s = 0.0;
    w.vessel_states[scenario.amv.id] = state_at(scenario.amv, 0.0, 0.0);
    for (const VesselSpec& v : scenario.vessels) {
        w.vessel_states[v.id] = state_at(v, 0.0, 0.0);
    }
    w.active_weather = active_segment(scenario, 0.0);
    return w;
}

WorldState step_world(const WorldState& state, const Scenario& scenario) {
    const double t_next = state.t_s + scenario.dt_s;
    if (t_next > scenario.duration_s + 1e-9) {
        throw EndOfScenarioError("step past scenario duration");
    }
    WorldState w;
    w.t_s = t_next;
    auto carry_heading = [&](const std::string& id) {
        auto it = state.vessel_states.find(id);
        return it == state.vessel_states.end() ? 0.0 : it->second.heading_rad;
    };
    w.vessel_states[scenario.amv.id] =
        state_at(scenario.amv, t_next, carry_heading(scenario.amv.id));
    for (const VesselSpec& v : scenario.vessels) {
        w.vessel_states[v.id] = state_at(v, t_next, carry_heading(v.id));
    }
    w.active_weather = active_segment(scenario, t_next);
    return w;
}

const WeatherSegment& active_segment(const Scenario& scenario, double t_s) {
    if (t_s < 0.0 || t_s > scenario.duration_s) {
        throw OutOfRangeError("time outside scenario horizon");
    }
    // Segments are half-open [start, end); the final boundary is inclusive.
    for (const WeatherSegment& seg : scenario.weather_timeline) {
        if (t_s >= seg.t_start_s && t_s < seg.t_end_s) return seg;
    }
    return scenario.weather_timeline.back();
}

WeatherReadings true_weather_at(const Scenario& scenario, Vec2 position_m, double t_s) {
    const WeatherSegment& seg = active_segment(scenario, t_s);
    WeatherReadings r = seg.values;
    const Vec2 position_km = position_m / 1000.0;
    for (WeatherChannel c : kAllWeatherChannels) {
        const Vec2 g = seg.gradient[static_cast<int>(c)];
        r.set(c, r.get(c) + dot(g, position_km));
    }
    r.clamp_physical();
    return r;
}

}  // namespace hazefuse
