#ifndef HAZEFUSE_WEATHER_ENGINE_HPP
#define HAZEFUSE_WEATHER_ENGINE_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hazefuse/history.hpp"
#include "hazefuse/profiles.hpp"
#include "hazefuse/types.hpp"

namespace hazefuse {

// ── Weather dictionary ──
// Each template is a learned weather situation: the feature statistics that
// recognise it plus the sensor schedule, fusion weight shape, and settings
// it recommends. Templates live in a directed state network whose edge
// counts drive Markov forecasting and whose recency drives ranking.

struct WeatherFeatures {
    // Per-channel means over the recent history window.
    std::array<double, kWeatherChannelCount> mean{};

    double get(WeatherChannel c) const { return mean[static_cast<int>(c)]; }
    void set(WeatherChannel c, double v) { mean[static_cast<int>(c)] = v; }
};

struct WeatherTemplate {
    std::string name;
    std::array<double, kWeatherChannelCount> mu{};
    std::array<double, kWeatherChannelCount> sigma{};  // all > 0
    long long count = 1;                               // reinforcement counter
    double last_used_t = 0.0;
    double last_updated_t = 0.0;
    std::map<std::string, double> schedule;            // sensor name -> period_s
    WeightProfileSpec weight_spec;
    SettingsDirective settings;
    std::vector<std::string> event_links;
    bool provisional = false;
};

struct DetectThresholds {
    double theta_dev = 3.0;  // stay-or-switch deviation bound (z-RMS)
    double theta_new = 6.0;  // beyond this, the situation is novel
};

struct WeatherStateNetwork {
    std::map<std::string, WeatherTemplate> nodes;
    std::map<std::pair<std::string, std::string>, long long> edges;  // transition counts
    DetectThresholds thresholds;
};

struct BlendComponent {
    std::string name;
    double weight = 0.0;
};

// Outcome of one weather evaluation. matched holds one component for a
// direct template hit, or the inverse-distance blend of the two closest
// templates when the situation is novel. Weights are nonnegative and sum
// to 1; components are ordered by descending weight.
struct WeatherAssessment {
    std::vector<BlendComponent> matched;
    double distance = 0.0;  // z-RMS to the closest matched template
    bool novel = false;
    double t_s = 0.0;

    const std::string& primary() const { return matched.front().name; }
};

using ChannelHistories = std::array<HistoryBuffer, kWeatherChannelCount>;

// Per-channel arithmetic mean over samples in [now - window, now].
// Throws EmptyWindowError naming the first starved channel.
WeatherFeatures extract_features(const ChannelHistories& history, double window_s,
                                 double now_t);

// Root-mean-square of per-channel z-scores.
double template_distance(const WeatherFeatures& f, const WeatherTemplate& tpl);

// Recency ranking of all templates: the most recently used first, then
// templates reinforced or updated within the last hour, then templates
// event-linked from either of those classes, then the rest. Ties break by
// descending last_used_t, then name.
std::vector<std::string> rank_templates(const WeatherStateNetwork& network, double now_t);

// Template matching. Keeps the current template while features stay within
// theta_dev; otherwise scans the ranked dictionary for a template within
// theta_dev; otherwise takes the globally closest template when within
// theta_new; otherwise reports a novel situation blending the two closest
// templates with weights proportional to 1/distance.
WeatherAssessment detect_weather(const WeatherFeatures& f, const WeatherStateNetwork& network,
                                 const std::string& current, double now_t);

// Markov forecast from normalized outgoing edge counts. A state without
// outgoing edges predicts itself with probability 1.
std::map<std::string, double> forecast(const WeatherStateNetwork& network,
                                       const std::string& current);

// Incremental learning. A matched assessment reinforces the template with a
// running mean/variance update and bumps the (previous -> matched) edge.
// A novel assessment registers a provisional template from the features,
// blending schedule and sigma from its parents, and links it as an event of
// each parent. Returns the name of the reinforced or created template.
std::string learn(WeatherStateNetwork& network, const WeatherAssessment& assessment,
                  const WeatherFeatures& f, double now_t,
                  const std::optional<std::string>& previous);

// ── Bootstrap dictionary and persistence ──

// Built-in dictionary with clear_sunny, hazy, rainy, and stormy templates.
// data/dictionary.json ships the same content for external editing.
WeatherStateNetwork bootstrap_network();

WeatherStateNetwork load_network(const std::string& path);
WeatherStateNetwork network_from_json_text(const std::string& text);
std::string network_to_json_text(const WeatherStateNetwork& network);
void save_network(const WeatherStateNetwork& network, const std::string& path);

}  // namespace hazefuse

#endif  // HAZEFUSE_WEATHER_ENGINE_HPP
