#include "hazefuse/sensor_manager.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hazefuse/errors.hpp"

namespace hazefuse {

namespace {

const WeatherTemplate& node_or_throw(const WeatherStateNetwork& network,
                                     const std::string& name) {
    auto it = network.nodes.find(name);
    if (it == network.nodes.end()) {
        throw UnknownTemplateError("unknown template '" + name + "'");
    }
    return it->second;
}

}  // namespace

std::map<std::string, double> resolve_schedule(const WeatherStateNetwork& network,
                                               const WeatherAssessment& assessment) {
    if (assessment.matched.size() == 1) {
        return node_or_throw(network, assessment.matched.front().name).schedule;
    }
    // Blend: per-sensor weighted mean of the parents' periods, rounded up
    // to whole seconds so a blend never polls faster than the mean asks.
    std::map<std::string, double> out;
    for (const BlendComponent& part : assessment.matched) {
        for (const auto& [sensor, period] : node_or_throw(network, part.name).schedule) {
            out[sensor] += part.weight * period;
        }
    }
    for (auto& [sensor, period] : out) period = std::ceil(period);
    return out;
}

WeightProfile materialize_profile(const WeightProfileSpec& spec, double visibility_m,
                                  double radar_r_min_m, double alpha_ir) {
    if (!(visibility_m > 0.0)) throw DomainError("visibility must be > 0");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    WeightProfile profile;
    if (spec.family == ProfileFamily::clear) {
        if (spec.zones.size() != 2) throw ValidationError("clear profile needs 2 zones");
        profile.zones = {{0.0, radar_r_min_m, spec.zones[0]},
                         {radar_r_min_m, kInf, spec.zones[1]}};
        return profile;
    }
    if (spec.zones.size() != 3) throw ValidationError("haze profile needs 3 zones");
    // VIS is only trusted near-field in haze; IR carries the mid zone out to
    // its own visibility limit (the visible range stretched by 1/alpha_ir).
    const double z1 = std::min(500.0, visibility_m / 2.0);
    const double z2 = visibility_m / alpha_ir;
    profile.zones = {{0.0, z1, spec.zones[0]},
                     {z1, z2, spec.zones[1]},
                     {z2, kInf, spec.zones[2]}};
    return profile;
}

WeightProfile resolve_weight_profile(const WeatherStateNetwork& network,
                                     const WeatherAssessment& assessment,
                                     double visibility_m) {
    if (assessment.matched.size() == 1) {
        return materialize_profile(node_or_throw(network, assessment.matched.front().name)
                                       .weight_spec,
                                   visibility_m);
    }
    // Blend: materialize each parent, then mix per source over the union of
    // zone boundaries. Convexity keeps each merged zone summing to 1.
    std::vector<WeightProfile> parents;
    std::set<double> edges{0.0};
    for (const BlendComponent& part : assessment.matched) {
        parents.push_back(materialize_profile(
            node_or_throw(network, part.name).weight_spec, visibility_m));
        for (const WeightZone& z : parents.back().zones) {
            if (std::isfinite(z.d_hi_m)) edges.insert(z.d_hi_m);
        }
    }
    WeightProfile out;
    std::vector<double> bounds(edges.begin(), edges.end());
    bounds.push_back(std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        WeightZone zone;
        zone.d_lo_m = bounds[i];
        zone.d_hi_m = bounds[i + 1];
        for (std::size_t p = 0; p < parents.size(); ++p) {
            const ZoneWeights& w = parents[p].zone_for(bounds[i]).weights;
            const double mix = assessment.matched[p].weight;
            zone.weights.eo_vis += mix * w.eo_vis;
            zone.weights.eo_ir += mix * w.eo_ir;
            zone.weights.radar += mix * w.radar;
        }
        out.zones.push_back(zone);
    }
    return out;
}

SettingsDirective resolve_settings(const WeatherStateNetwork& network,
                                   const WeatherAssessment& assessment) {
    // matched is ordered by descending weight (name-ascending ties), so the
    // heaviest parent is always the front component.
    return node_or_throw(network, assessment.matched.front().name).settings;
}

PollScheduler::PollScheduler(const std::map<std::string, double>& schedule, double now_t) {
    apply(schedule, now_t);
}

void PollScheduler::apply(const std::map<std::string, double>& schedule, double now_t) {
    for (const auto& [sensor, period] : schedule) {
        if (!(period > 0.0)) throw ValidationError("poll period must be > 0");
    }
    periods_ = schedule;
    // A sensor keeps its phase across schedule changes: the next deadline is
    // always last poll + current period. New sensors are due immediately.
    for (auto it = last_polled_.begin(); it != last_polled_.end();) {
        it = periods_.count(it->first) ? std::next(it) : last_polled_.erase(it);
    }
    (void)now_t;
}

std::vector<std::string> PollScheduler::due(double now_t) {
    std::vector<std::string> out;
    for (const auto& [sensor, period] : periods_) {
        auto it = last_polled_.find(sensor);
        if (it == last_polled_.end() || now_t >= it->second + period - 1e-9) {
            last_polled_[sensor] = now_t;
            out.push_back(sensor);
        }
    }
    return out;
}

std::optional<double> PollScheduler::next_deadline(const std::string& sensor) const {
    auto pit = periods_.find(sensor);
    if (pit == periods_.end()) return std::nullopt;
    auto it = last_polled_.find(sensor);
    if (it == last_polled_.end()) return std::nullopt;
    return it->second + pit->second;
}

}  // namespace hazefuse
