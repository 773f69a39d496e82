#include "hazefuse/weather_engine.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hazefuse/errors.hpp"

namespace hazefuse {

namespace {

constexpr double kSigmaFloor = 1e-6;
constexpr double kRecentUpdateHorizonS = 3600.0;

std::string format_time_tag(double t_s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", t_s);
    return buf;
}

}  // namespace

WeatherFeatures extract_features(const ChannelHistories& history, double window_s,
                                 double now_t) {
    WeatherFeatures f;
    for (WeatherChannel c : kAllWeatherChannels) {
        const auto mean = history[static_cast<int>(c)].mean_in_window(now_t - window_s, now_t);
        if (!mean) {
            throw EmptyWindowError("no samples in window for channel '" +
                                   std::string(channel_sensor_name(c)) + "'");
        }
        f.set(c, *mean);
    }
    return f;
}

double template_distance(const WeatherFeatures& f, const WeatherTemplate& tpl) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kWeatherChannelCount; ++i) {
        const double z = (f.mean[i] - tpl.mu[i]) / tpl.sigma[i];
        acc += z * z;
    }
    return std::sqrt(acc / static_cast<double>(kWeatherChannelCount));
}

std::vector<std::string> rank_templates(const WeatherStateNetwork& network, double now_t) {
    if (network.nodes.empty()) throw EmptyDictionaryError("weather dictionary is empty");

    double max_used = -std::numeric_limits<double>::infinity();
    for (const auto& [name, tpl] : network.nodes) max_used = std::max(max_used, tpl.last_used_t);

    // Rank classes: 1 most recently used, 2 reinforced/updated within the
    // horizon, 3 event-linked from classes 1-2, 4 the rest.
    std::map<std::string, int> klass;
    for (const auto& [name, tpl] : network.nodes) {
        if (tpl.last_used_t == max_used) {
            klass[name] = 1;
        } else if (now_t - tpl.last_updated_t <= kRecentUpdateHorizonS) {
            klass[name] = 2;
        } else {
            klass[name] = 4;
        }
    }
    for (const auto& [name, tpl] : network.nodes) {
        if (klass[name] > 2) continue;
        for (const std::string& linked : tpl.event_links) {
            auto it = klass.find(linked);
            if (it != klass.end() && it->second > 2) it->second = 3;
        }
    }

    std::vector<std::string> order;
    for (const auto& [name, tpl] : network.nodes) order.push_back(name);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (klass[a] != klass[b]) return klass[a] < klass[b];
        const double ua = network.nodes.at(a).last_used_t;
        const double ub = network.nodes.at(b).last_used_t;
        if (ua != ub) return ua > ub;
        return a < b;
    });
    return order;
}

WeatherAssessment detect_weather(const WeatherFeatures& f, const WeatherStateNetwork& network,
                                 const std::string& current, double now_t) {
    if (network.nodes.empty()) throw EmptyDictionaryError("weather dictionary is empty");
    const auto cur_it = network.nodes.find(current);
    if (cur_it == network.nodes.end()) {
        throw UnknownTemplateError("unknown current template '" + current + "'");
    }

    WeatherAssessment a;
    a.t_s = now_t;

    // (1) Stay with the current template while features remain within the
    // deviation bound.
    const double d_cur = template_distance(f, cur_it->second);
    if (d_cur <= network.thresholds.theta_dev) {
        a.matched = {{current, 1.0}};
        a.distance = d_cur;
        return a;
    }

    // (2) Scan the ranked dictionary for the first template within bound.
    for (const std::string& name : rank_templates(network, now_t)) {
        const double d = template_distance(f, network.nodes.at(name));
        if (d <= network.thresholds.theta_dev) {
            a.matched = {{name, 1.0}};
            a.distance = d;
            return a;
        }
    }

    // Distances sorted ascending, name-ascending on ties, for cases (3)-(4).
    std::vector<std::pair<double, std::string>> by_distance;
    for (const auto& [name, tpl] : network.nodes) {
        by_distance.emplace_back(template_distance(f, tpl), name);
    }
    std::sort(by_distance.begin(), by_distance.end());

    // (3) A merely-degraded match: take the closest template.
    if (by_distance.front().first <= network.thresholds.theta_new) {
        a.matched = {{by_distance.front().second, 1.0}};
        a.distance = by_distance.front().first;
        return a;
    }

    // (4) Novel situation: blend the two closest with weights ~ 1/distance.
    a.novel = true;
    a.distance = by_distance.front().first;
    const std::size_t n = std::min<std::size_t>(2, by_distance.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += 1.0 / by_distance[i].first;
    for (std::size_t i = 0; i < n; ++i) {
        a.matched.push_back({by_distance[i].second, (1.0 / by_distance[i].first) / total});
    }
    std::sort(a.matched.begin(), a.matched.end(),
              [](const BlendComponent& x, const BlendComponent& y) {
                  if (x.weight != y.weight) return x.weight > y.weight;
                  return x.name < y.name;
              });
    return a;
}

std::map<std::string, double> forecast(const WeatherStateNetwork& network,
                                       const std::string& current) {
    if (!network.nodes.count(current)) {
        throw UnknownTemplateError("unknown template '" + current + "'");
    }
    std::map<std::string, double> dist;
    long long total = 0;
    for (const auto& [edge, count] : network.edges) {
        if (edge.first == current && count > 0) {
            dist[edge.second] = static_cast<double>(count);
            total += count;
        }
    }
    if (total == 0) {
        return {{current, 1.0}};
    }
    for (auto& [name, p] : dist) p /= static_cast<double>(total);
    return dist;
}

std::string learn(WeatherStateNetwork& network, const WeatherAssessment& assessment,
                  const WeatherFeatures& f, double now_t,
                  const std::optional<std::string>& previous) {
    if (!assessment.novel) {
        const std::string& name = assessment.matched.front().name;
        auto it = network.nodes.find(name);
        if (it == network.nodes.end()) {
            throw UnknownTemplateError("unknown template '" + name + "'");
        }
        WeatherTemplate& tpl = it->second;
        // Welford update seeded from the stored statistics: the template's
        // sigma encodes the spread of its prior `count` observations.
        const double n0 = static_cast<double>(tpl.count);
        const double n1 = n0 + 1.0;
        for (std::size_t i = 0; i < kWeatherChannelCount; ++i) {
            double m2 = tpl.sigma[i] * tpl.sigma[i] * n0;
            const double delta = f.mean[i] - tpl.mu[i];
            tpl.mu[i] += delta / n1;
            m2 += delta * (f.mean[i] - tpl.mu[i]);
            tpl.sigma[i] = std::max(std::sqrt(m2 / n1), kSigmaFloor);
        }
        tpl.count += 1;
        tpl.last_used_t = now_t;
        tpl.last_updated_t = now_t;
        if (previous && *previous != name) {
            network.edges[{*previous, name}] += 1;
        }
        return name;
    }

    // Novel situation: register a provisional template seeded from the
    // features, statistics and schedule blended from its parents, and make
    // it an event of each parent so ranking can surface it.
    std::string name = "novel-" + format_time_tag(now_t);
    while (network.nodes.count(name)) name += "+";

    WeatherTemplate tpl;
    tpl.name = name;
    tpl.mu = f.mean;
    tpl.count = 1;
    tpl.last_used_t = now_t;
    tpl.last_updated_t = now_t;
    tpl.provisional = true;

    const BlendComponent* heaviest = nullptr;
    for (const BlendComponent& part : assessment.matched) {
        if (!network.nodes.count(part.name)) {
            throw UnknownTemplateError("unknown template '" + part.name + "'");
        }
        if (heaviest == nullptr || part.weight > heaviest->weight) heaviest = &part;
    }
    for (std::size_t i = 0; i < kWeatherChannelCount; ++i) {
        double s = 0.0;
        for (const BlendComponent& part : assessment.matched) {
            s += part.weight * network.nodes.at(part.name).sigma[i];
        }
        tpl.sigma[i] = std::max(s, kSigmaFloor);
    }
    for (const BlendComponent& part : assessment.matched) {
        for (const auto& [sensor, period] : network.nodes.at(part.name).schedule) {
            tpl.schedule[sensor] += part.weight * period;
        }
    }
    for (auto& [sensor, period] : tpl.schedule) period = std::ceil(period);

    const WeatherTemplate& parent = network.nodes.at(heaviest->name);
    tpl.settings = parent.settings;
    if (assessment.matched.size() > 1 &&
        network.nodes.at(assessment.matched[0].name).weight_spec.family ==
            network.nodes.at(assessment.matched[1].name).weight_spec.family) {
        // Same family: blend the zone triples (convex, so sums stay 1).
        tpl.weight_spec.family = parent.weight_spec.family;
        const std::size_t zones = parent.weight_spec.zones.size();
        tpl.weight_spec.zones.resize(zones);
        for (const BlendComponent& part : assessment.matched) {
            const auto& pz = network.nodes.at(part.name).weight_spec.zones;
            for (std::size_t z = 0; z < zones; ++z) {
                tpl.weight_spec.zones[z].eo_vis += part.weight * pz[z].eo_vis;
                tpl.weight_spec.zones[z].eo_ir += part.weight * pz[z].eo_ir;
                tpl.weight_spec.zones[z].radar += part.weight * pz[z].radar;
            }
        }
    } else {
        tpl.weight_spec = parent.weight_spec;
    }

    for (const BlendComponent& part : assessment.matched) {
        WeatherTemplate& parent_tpl = network.nodes.at(part.name);
        if (std::find(parent_tpl.event_links.begin(), parent_tpl.event_links.end(), name) ==
            parent_tpl.event_links.end()) {
            parent_tpl.event_links.push_back(name);
        }
    }
    if (previous) {
        network.edges[{*previous, name}] += 1;
    }
    network.nodes[name] = std::move(tpl);
    return name;
}

// ── Bootstrap dictionary ──

namespace {

WeatherTemplate make_template(std::string name,
                              std::array<double, kWeatherChannelCount> mu,
                              std::array<double, kWeatherChannelCount> sigma,
                              std::map<std::string, double> schedule,
                              WeightProfileSpec weight_spec, SettingsDirective settings) {
    WeatherTemplate t;
    t.name = std::move(name);
    t.mu = mu;
    t.sigma = sigma;
    t.schedule = std::move(schedule);
    t.weight_spec = std::move(weight_spec);
    t.settings = std::move(settings);
    return t;
}

WeightProfileSpec clear_weights() {
    return {ProfileFamily::clear, {{0.7, 0.3, 0.0}, {0.3, 0.1, 0.6}}};
}

WeightProfileSpec haze_weights() {
    return {ProfileFamily::haze, {{0.6, 0.3, 0.1}, {0.1, 0.6, 0.3}, {0.0, 0.1, 0.9}}};
}

SettingsDirective clear_settings() {
    SettingsDirective s;
    s.vis = {DynamicRange::large, FocusMode::long_range, 1.0, 1.0, ColorMode::vivid};
    s.ir = {DynamicRange::large, FocusMode::long_range, 1.0, 1.0, ColorMode::vivid};
    s.radar_calibration = "standard";
    return s;
}

SettingsDirective haze_settings() {
    SettingsDirective s;
    s.vis = {DynamicRange::small, FocusMode::close, 1.0, 2.2, ColorMode::normal};
    s.ir = {DynamicRange::large, FocusMode::long_range, 1.0, 2.2, ColorMode::normal};
    s.radar_calibration = "standard";
    return s;
}

SettingsDirective rain_settings() {
    SettingsDirective s;
    s.vis = {DynamicRange::large, FocusMode::close, 1.0, 1.8, ColorMode::normal};
    s.ir = {DynamicRange::large, FocusMode::long_range, 1.0, 1.8, ColorMode::normal};
    s.radar_calibration = "rain-clutter";
    return s;
}

}  // namespace

WeatherStateNetwork bootstrap_network() {
    WeatherStateNetwork net;
    net.nodes["clear_sunny"] = make_template(
        "clear_sunny", {40.0, 0.0, 4.0, 60.0, 40000.0}, {20.0, 0.5, 2.0, 8.0, 15000.0},
        {{"aerosol", 300.0}, {"humidity", 300.0}, {"luminance", 60.0}, {"rain", 60.0},
         {"wind", 10.0}},
        clear_weights(), clear_settings());
    net.nodes["hazy"] = make_template(
        "hazy", {230.0, 0.0, 2.0, 70.0, 15000.0}, {40.0, 0.5, 2.0, 8.0, 8000.0},
        {{"aerosol", 10.0}, {"humidity", 30.0}, {"luminance", 600.0}, {"rain", 30.0},
         {"wind", 10.0}},
        haze_weights(), haze_settings());
    net.nodes["rainy"] = make_template(
        "rainy", {60.0, 8.0, 8.0, 90.0, 8000.0}, {30.0, 3.0, 3.0, 5.0, 5000.0},
        {{"aerosol", 60.0}, {"humidity", 10.0}, {"luminance", 600.0}, {"rain", 5.0},
         {"wind", 10.0}},
        haze_weights(), rain_settings());
    net.nodes["stormy"] = make_template(
        "stormy", {80.0, 25.0, 18.0, 95.0, 4000.0}, {30.0, 8.0, 5.0, 4.0, 3000.0},
        {{"aerosol", 60.0}, {"humidity", 10.0}, {"luminance", 600.0}, {"rain", 5.0},
         {"wind", 5.0}},
        haze_weights(), rain_settings());
    return net;
}

// ── Persistence ──

namespace {

using nlohmann::json;

json channel_map(const std::array<double, kWeatherChannelCount>& values) {
    json out = json::object();
    for (WeatherChannel c : kAllWeatherChannels) {
        out[std::string(channel_key(c))] = values[static_cast<int>(c)];
    }
    return out;
}

std::array<double, kWeatherChannelCount> channel_array(const json& obj, const char* where) {
    std::array<double, kWeatherChannelCount> out{};
    if (!obj.is_object()) throw ValidationError(std::string(where) + " must be an object");
    std::size_t seen = 0;
    for (WeatherChannel c : kAllWeatherChannels) {
        const std::string key(channel_key(c));
        if (!obj.contains(key) || !obj.at(key).is_number()) {
            throw ValidationError(std::string(where) + " missing channel '" + key + "'");
        }
        out[static_cast<int>(c)] = obj.at(key).get<double>();
        ++seen;
    }
    if (obj.size() != seen) {
        throw ValidationError(std::string(where) + " has unknown channels");
    }
    return out;
}

json settings_to_json(const SettingsDirective& s) {
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

EoSettings eo_settings_from_json(const json& obj, const char* where) {
    EoSettings e;
    auto dr = dynamic_range_from(obj.at("dynamic_range").get<std::string>());
    auto fm = focus_mode_from(obj.at("focus").get<std::string>());
    auto cm = color_mode_from(obj.at("color_mode").get<std::string>());
    if (!dr || !fm || !cm) throw ValidationError(std::string(where) + " bad settings enum");
    e.dynamic_range = *dr;
    e.focus = *fm;
    e.color_mode = *cm;
    e.gain = obj.at("gain").get<double>();
    e.gamma = obj.at("gamma").get<double>();
    if (!(e.gain > 0.0) || !(e.gamma > 0.0)) {
        throw ValidationError(std::string(where) + " gain and gamma must be > 0");
    }
    return e;
}

}  // namespace

std::string network_to_json_text(const WeatherStateNetwork& network) {
    json nodes = json::object();
    for (const auto& [name, tpl] : network.nodes) {
        json zones = json::array();
        for (const ZoneWeights& z : tpl.weight_spec.zones) {
            zones.push_back(json{{"eo_ir", z.eo_ir}, {"eo_vis", z.eo_vis}, {"radar", z.radar}});
        }
        nodes[name] = json{
            {"count", tpl.count},
            {"event_links", tpl.event_links},
            {"last_updated_t", tpl.last_updated_t},
            {"last_used_t", tpl.last_used_t},
            {"mu", channel_map(tpl.mu)},
            {"provisional", tpl.provisional},
            {"schedule", tpl.schedule},
            {"settings", settings_to_json(tpl.settings)},
            {"sigma", channel_map(tpl.sigma)},
            {"weight_profile",
             json{{"family", std::string(profile_family_name(tpl.weight_spec.family))},
                  {"zones", zones}}},
        };
    }
    json edges = json::array();
    for (const auto& [edge, count] : network.edges) {
        edges.push_back(json{{"count", count}, {"from", edge.first}, {"to", edge.second}});
    }
    return json{{"edges", edges}, {"nodes", nodes}}.dump(2) + "\n";
}

WeatherStateNetwork network_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("dictionary parse: ") + e.what());
    }
    if (!root.is_object() || !root.contains("nodes") || !root.contains("edges") ||
        root.size() != 2) {
        throw ValidationError("dictionary must hold exactly {nodes, edges}");
    }

    WeatherStateNetwork net;
    for (const auto& [name, body] : root.at("nodes").items()) {
        WeatherTemplate tpl;
        tpl.name = name;
        tpl.mu = channel_array(body.at("mu"), "mu");
        tpl.sigma = channel_array(body.at("sigma"), "sigma");
        for (double s : tpl.sigma) {
            if (!(s > 0.0)) throw ValidationError("template '" + name + "' sigma must be > 0");
        }
        tpl.count = body.at("count").get<long long>();
        if (tpl.count < 1) throw ValidationError("template '" + name + "' count must be >= 1");
        tpl.last_used_t = body.at("last_used_t").get<double>();
        tpl.last_updated_t = body.at("last_updated_t").get<double>();
        for (const auto& [sensor, period] : body.at("schedule").items()) {
            if (!channel_from_sensor(sensor)) {
                throw ValidationError("template '" + name + "' unknown sensor '" + sensor + "'");
            }
            const double p = period.get<double>();
            if (!(p > 0.0)) {
                throw ValidationError("template '" + name + "' periods must be > 0");
            }
            tpl.schedule[sensor] = p;
        }
        const json& wp = body.at("weight_profile");
        auto family = profile_family_from(wp.at("family").get<std::string>());
        if (!family) throw ValidationError("template '" + name + "' bad family");
        tpl.weight_spec.family = *family;
        for (const json& zj : wp.at("zones")) {
            ZoneWeights z;
            z.eo_vis = zj.at("eo_vis").get<double>();
            z.eo_ir = zj.at("eo_ir").get<double>();
            z.radar = zj.at("radar").get<double>();
            if (std::abs(z.sum() - 1.0) > 1e-9) {
                throw ValidationError("template '" + name + "' zone weights must sum to 1");
            }
            tpl.weight_spec.zones.push_back(z);
        }
        const std::size_t expected = tpl.weight_spec.family == ProfileFamily::clear ? 2 : 3;
        if (tpl.weight_spec.zones.size() != expected) {
            throw ValidationError("template '" + name + "' wrong zone count for family");
        }
        const json& settings = body.at("settings");
        tpl.settings.vis = eo_settings_from_json(settings.at("vis"), "settings.vis");
        tpl.settings.ir = eo_settings_from_json(settings.at("ir"), "settings.ir");
        tpl.settings.radar_calibration = settings.at("radar_calibration").get<std::string>();
        if (body.contains("event_links")) {
            tpl.event_links = body.at("event_links").get<std::vector<std::string>>();
        }
        if (body.contains("provisional")) {
            tpl.provisional = body.at("provisional").get<bool>();
        }
        net.nodes[name] = std::move(tpl);
    }
    if (net.nodes.empty()) throw EmptyDictionaryError("dictionary has no templates");

    for (const json& ej : root.at("edges")) {
        const std::string from = ej.at("from").get<std::string>();
        const std::string to = ej.at("to").get<std::string>();
        const long long count = ej.at("count").get<long long>();
        if (!net.nodes.count(from) || !net.nodes.count(to)) {
            throw ValidationError("edge endpoint not in nodes: " + from + " -> " + to);
        }
        if (count < 0) throw ValidationError("edge counts must be >= 0");
        net.edges[{from, to}] = count;
    }
    for (const auto& [name, tpl] : net.nodes) {
        for (const std::string& linked : tpl.event_links) {
            if (!net.nodes.count(linked)) {
                throw ValidationError("event link to unknown template '" + linked + "'");
            }
        }
    }
    return net;
}

WeatherStateNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dictionary file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_json_text(buf.str());
}

void save_network(const WeatherStateNetwork& network, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dictionary file '" + path + "'");
    out << network_to_json_text(network);
    if (!out) throw IoError("failed writing dictionary file '" + path + "'");
}

}  // namespace hazefuse
