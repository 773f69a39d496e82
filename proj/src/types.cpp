#include "hazefuse/types.hpp"

namespace hazefuse {

std::string_view size_class_name(SizeClass c) {
    switch (c) {
        case SizeClass::small: return "small";
        case SizeClass::medium: return "medium";
        case SizeClass::large: return "large";
    }
    return "medium";
}

std::optional<SizeClass> size_class_from(std::string_view name) {
    if (name == "small") return SizeClass::small;
    if (name == "medium") return SizeClass::medium;
    if (name == "large") return SizeClass::large;
    return std::nullopt;
}

double default_contrast(SizeClass c) {
    switch (c) {
        case SizeClass::small: return 0.4;
        case SizeClass::medium: return 0.7;
        case SizeClass::large: return 1.0;
    }
    return 0.7;
}

std::string_view source_name(Source s) {
    switch (s) {
        case Source::radar: return "radar";
        case Source::eo_ir: return "eo_ir";
        case Source::eo_vis: return "eo_vis";
        case Source::ais: return "ais";
        case Source::sonar: return "sonar";
    }
    return "radar";
}

std::optional<Source> source_from(std::string_view name) {
    if (name == "radar") return Source::radar;
    if (name == "eo_ir") return Source::eo_ir;
    if (name == "eo_vis") return Source::eo_vis;
    if (name == "ais") return Source::ais;
    if (name == "sonar") return Source::sonar;
    return std::nullopt;
}

std::string_view channel_key(WeatherChannel c) {
    switch (c) {
        case WeatherChannel::psi: return "psi";
        case WeatherChannel::rain: return "rain_mmph";
        case WeatherChannel::wind: return "wind_mps";
        case WeatherChannel::humidity: return "humidity_pct";
        case WeatherChannel::luminance: return "luminance_lux";
    }
    return "psi";
}

std::string_view channel_sensor_name(WeatherChannel c) {
    switch (c) {
        case WeatherChannel::psi: return "aerosol";
        case WeatherChannel::rain: return "rain";
        case WeatherChannel::wind: return "wind";
        case WeatherChannel::humidity: return "humidity";
        case WeatherChannel::luminance: return "luminance";
    }
    return "aerosol";
}

std::optional<WeatherChannel> channel_from_sensor(std::string_view sensor) {
    for (WeatherChannel c : kAllWeatherChannels) {
        if (channel_sensor_name(c) == sensor) return c;
    }
    return std::nullopt;
}

double WeatherReadings::get(WeatherChannel c) const {
    switch (c) {
        case WeatherChannel::psi: return psi;
        case WeatherChannel::rain: return rain_mmph;
        case WeatherChannel::wind: return wind_mps;
        case WeatherChannel::humidity: return humidity_pct;
        case WeatherChannel::luminance: return luminance_lux;
    }
    return 0.0;
}

void WeatherReadings::set(WeatherChannel c, double v) {
    switch (c) {
        case WeatherChannel::psi: psi = v; break;
        case WeatherChannel::rain: rain_mmph = v; break;
        case WeatherChannel::wind: wind_mps = v; break;
        case WeatherChannel::humidity: humidity_pct = v; break;
        case WeatherChannel::luminance: luminance_lux = v; break;
    }
}

void WeatherReadings::clamp_physical() {
    for (WeatherChannel c : kAllWeatherChannels) {
        double v = get(c);
        if (v < 0.0) v = 0.0;
        if (c == WeatherChannel::humidity && v > 100.0) v = 100.0;
        set(c, v);
    }
}

}  // namespace hazefuse
