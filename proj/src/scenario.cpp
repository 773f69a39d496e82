#include "hazefuse/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hazefuse/errors.hpp"

namespace hazefuse {

namespace {

using nlohmann::json;

// Fail-closed parsing: any key outside the declared set is a validation
// error so an unnoticed typo can never silently change a run.
void require_keys(const json& obj, const char* where, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    if (!obj.is_object()) {
        throw ValidationError(std::string(where) + " must be an object");
    }
    for (const char* key : required) {
        if (!obj.contains(key)) {
            throw ValidationError(std::string(where) + " missing key '" + key + "'");
        }
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : required) {
            if (key == k) known = true;
        }
        for (const char* k : optional) {
            if (key == k) known = true;
        }
        if (!known) {
            throw ValidationError(std::string(where) + " unknown key '" + key + "'");
        }
    }
}

double number_at(const json& obj, const char* key, const char* where) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ValidationError(std::string(where) + "." + key + " must be a number");
    }
    return v.get<double>();
}

Vec2 vec2_at(const json& obj, const char* key, const char* where) {
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError(std::string(where) + "." + key + " must be [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

VesselSpec parse_vessel(const json& obj, const char* where) {
    require_keys(obj, where, {"id", "size_class", "legs"}, {"ais_equipped", "contrast"});
    VesselSpec v;
    if (!obj.at("id").is_string() || obj.at("id").get<std::string>().empty()) {
        throw ValidationError(std::string(where) + ".id must be a non-empty string");
    }
    v.id = obj.at("id").get<std::string>();
    auto cls = obj.at("size_class").is_string()
                   ? size_class_from(obj.at("size_class").get<std::string>())
                   : std::nullopt;
    if (!cls) {
        throw ValidationError(std::string(where) + ".size_class must be small|medium|large");
    }
    v.size_class = *cls;
    if (obj.contains("ais_equipped")) {
        if (!obj.at("ais_equipped").is_boolean()) {
            throw ValidationError(std::string(where) + ".ais_equipped must be boolean");
        }
        v.ais_equipped = obj.at("ais_equipped").get<bool>();
    }
    if (obj.contains("contrast")) {
        v.contrast = number_at(obj, "contrast", where);
        if (!(v.contrast > 0.0 && v.contrast <= 1.0)) {
            throw ValidationError(std::string(where) + ".contrast must be in (0, 1]");
        }
    }
    const json& legs = obj.at("legs");
    if (!legs.is_array() || legs.empty()) {
        throw ValidationError(std::string(where) + ".legs must be a non-empty array");
    }
    for (const json& leg_json : legs) {
        require_keys(leg_json, (std::string(where) + ".legs[]").c_str(),
                     {"start_time_s", "position_m", "velocity_mps"}, {});
        MotionLeg leg;
        leg.start_time_s = number_at(leg_json, "start_time_s", where);
        leg.position_m = vec2_at(leg_json, "position_m", where);
        leg.velocity_mps = vec2_at(leg_json, "velocity_mps", where);
        if (leg.start_time_s < 0.0) {
            throw ValidationError(std::string(where) + ".legs start_time_s must be >= 0");
        }
        if (!v.legs.empty() && leg.start_time_s <= v.legs.back().start_time_s) {
            throw ValidationError(std::string(where) + ".legs must be ordered by start_time");
        }
        v.legs.push_back(leg);
    }
    return v;
}

WeatherGradient parse_gradient(const json& obj) {
    WeatherGradient g{};
    if (!obj.is_object()) {
        throw ValidationError("weather_timeline[].gradient must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (WeatherChannel c : kAllWeatherChannels) {
            if (key == channel_key(c)) {
                if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
                    !value[1].is_number()) {
                    throw ValidationError("gradient." + key + " must be [east, north] per km");
                }
                g[static_cast<int>(c)] = {value[0].get<double>(), value[1].get<double>()};
                known = true;
            }
        }
        if (!known) {
            throw ValidationError("gradient unknown key '" + key + "'");
        }
    }
    return g;
}

WeatherSegment parse_segment(const json& obj, std::size_t index) {
    const std::string where = "weather_timeline[" + std::to_string(index) + "]";
    require_keys(obj, where.c_str(),
                 {"t_start_s", "t_end_s", "psi", "rain_mmph", "wind_mps", "humidity_pct",
                  "luminance_lux", "label"},
                 {"gradient"});
    WeatherSegment seg;
    seg.t_start_s = number_at(obj, "t_start_s", where.c_str());
    seg.t_end_s = number_at(obj, "t_end_s", where.c_str());
    seg.values.psi = number_at(obj, "psi", where.c_str());
    seg.values.rain_mmph = number_at(obj, "rain_mmph", where.c_str());
    seg.values.wind_mps = number_at(obj, "wind_mps", where.c_str());
    seg.values.humidity_pct = number_at(obj, "humidity_pct", where.c_str());
    seg.values.luminance_lux = number_at(obj, "luminance_lux", where.c_str());
    if (!obj.at("label").is_string() || obj.at("label").get<std::string>().empty()) {
        throw ValidationError(where + ".label must be a non-empty string");
    }
    seg.label = obj.at("label").get<std::string>();
    if (obj.contains("gradient")) {
        seg.gradient = parse_gradient(obj.at("gradient"));
    }
    if (seg.t_end_s <= seg.t_start_s) {
        throw ValidationError(where + " t_end_s must exceed t_start_s");
    }
    for (WeatherChannel c : kAllWeatherChannels) {
        if (seg.values.get(c) < 0.0) {
            throw ValidationError(where + " magnitudes must be >= 0");
        }
    }
    if (seg.values.humidity_pct > 100.0) {
        throw ValidationError(where + " humidity_pct must be in [0, 100]");
    }
    return seg;
}

Scenario parse_scenario(const json& root) {
    require_keys(root, "scenario", {"duration_s", "seed", "amv", "weather_timeline"},
                 {"dt_s", "vessels", "obstacles", "remote_stations"});

    Scenario s;
    s.duration_s = number_at(root, "duration_s", "scenario");
    if (!(s.duration_s > 0.0)) throw ValidationError("duration_s must be > 0");
    if (root.contains("dt_s")) {
        s.dt_s = number_at(root, "dt_s", "scenario");
        if (!(s.dt_s > 0.0)) throw ValidationError("dt_s must be > 0");
    }
    if (!root.at("seed").is_number_unsigned()) {
        throw ValidationError("seed must be an unsigned integer");
    }
    s.seed = root.at("seed").get<std::uint64_t>();

    s.amv = parse_vessel(root.at("amv"), "amv");
    if (root.contains("vessels")) {
        const json& vessels = root.at("vessels");
        if (!vessels.is_array()) throw ValidationError("vessels must be an array");
        for (const json& vj : vessels) {
            s.vessels.push_back(parse_vessel(vj, "vessels[]"));
        }
    }

    std::set<std::string> ids{s.amv.id};
    for (const VesselSpec& v : s.vessels) {
        if (!ids.insert(v.id).second) {
            throw ValidationError("duplicate id '" + v.id + "'");
        }
    }

    if (root.contains("obstacles")) {
        const json& obstacles = root.at("obstacles");
        if (!obstacles.is_array()) throw ValidationError("obstacles must be an array");
        for (const json& oj : obstacles) {
            require_keys(oj, "obstacles[]", {"position_m", "extent_m"}, {"submerged"});
            Obstacle o;
            o.position_m = vec2_at(oj, "position_m", "obstacles[]");
            o.extent_m = number_at(oj, "extent_m", "obstacles[]");
            if (!(o.extent_m > 0.0)) throw ValidationError("obstacles[].extent_m must be > 0");
            if (oj.contains("submerged")) {
                if (!oj.at("submerged").is_boolean()) {
                    throw ValidationError("obstacles[].submerged must be boolean");
                }
                o.submerged = oj.at("submerged").get<bool>();
            }
            s.obstacles.push_back(o);
        }
    }

    const json& timeline = root.at("weather_timeline");
    if (!timeline.is_array() || timeline.empty()) {
        throw ValidationError("weather_timeline must be a non-empty array");
    }
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        s.weather_timeline.push_back(parse_segment(timeline[i], i));
    }
    if (s.weather_timeline.front().t_start_s != 0.0) {
        throw ValidationError("weather_timeline must start at t=0");
    }
    for (std::size_t i = 1; i < s.weather_timeline.size(); ++i) {
        const double prev_end = s.weather_timeline[i - 1].t_end_s;
        const double next_start = s.weather_timeline[i].t_start_s;
        if (next_start < prev_end) throw ValidationError("weather_timeline overlap");
        if (next_start > prev_end) throw ValidationError("weather_timeline gap");
    }
    if (s.weather_timeline.back().t_end_s < s.duration_s) {
        throw ValidationError("weather_timeline must cover [0, duration_s]");
    }

    if (root.contains("remote_stations")) {
        const json& stations = root.at("remote_stations");
        if (!stations.is_array()) throw ValidationError("remote_stations must be an array");
        for (std::size_t i = 0; i < stations.size(); ++i) {
            require_keys(stations[i], "remote_stations[]", {"position_m"},
                         {"id", "weather_annex"});
            RemoteStation st;
            st.position_m = vec2_at(stations[i], "position_m", "remote_stations[]");
            st.id = stations[i].contains("id") ? stations[i].at("id").get<std::string>()
                                               : "station-" + std::to_string(i);
            if (st.id.empty()) {
                throw ValidationError("remote_stations[].id must be non-empty");
            }
            if (stations[i].contains("weather_annex")) {
                if (!stations[i].at("weather_annex").is_boolean()) {
                    throw ValidationError("remote_stations[].weather_annex must be boolean");
                }
                st.weather_annex = stations[i].at("weather_annex").get<bool>();
            }
            if (!ids.insert(st.id).second) {
                throw ValidationError("duplicate id '" + st.id + "'");
            }
            s.remote_stations.push_back(st);
        }
    }

    return s;
}

}  // namespace

SizeClass obstacle_size_class(const Obstacle& o) {
    if (o.extent_m < 10.0) return SizeClass::small;
    if (o.extent_m < 50.0) return SizeClass::medium;
    return SizeClass::large;
}

Scenario scenario_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario parse: ") + e.what());
    }
    return parse_scenario(root);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::vector<std::string> validate_scenario_text(const std::string& text) {
    try {
        scenario_from_json_text(text);
    } catch (const Error& e) {
        return {e.what()};
    }
    return {};
}

std::vector<std::string> validate_scenario_file(const std::string& path) {
    try {
        load_scenario(path);
    } catch (const Error& e) {
        return {e.what()};
    }
    return {};
}

}  // namespace hazefuse
