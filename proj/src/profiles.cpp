#include "hazefuse/profiles.hpp"

#include "hazefuse/errors.hpp"

namespace hazefuse {

std::string_view profile_family_name(ProfileFamily f) {
    return f == ProfileFamily::clear ? "clear" : "haze";
}

std::optional<ProfileFamily> profile_family_from(std::string_view name) {
    if (name == "clear") return ProfileFamily::clear;
    if (name == "haze") return ProfileFamily::haze;
    return std::nullopt;
}

const WeightZone& WeightProfile::zone_for(double range_m) const {
    if (zones.empty()) throw DomainError("weight profile has no zones");
    for (const WeightZone& z : zones) {
        if (range_m >= z.d_lo_m && range_m < z.d_hi_m) return z;
    }
    return zones.back();
}

double WeightProfile::weight_for(Source source, double range_m) const {
    if (source == Source::ais) return ais_weight;
    const ZoneWeights& w = zone_for(range_m).weights;
    switch (source) {
        case Source::eo_vis: return w.eo_vis;
        case Source::eo_ir: return w.eo_ir;
        // Sonar shares the radar kernel and its trust column.
        case Source::radar:
        case Source::sonar: return w.radar;
        case Source::ais: break;
    }
    return 0.0;
}

Source WeightProfile::argmax_imaging(double range_m) const {
    const ZoneWeights& w = zone_for(range_m).weights;
    Source best = Source::radar;
    double best_w = w.radar;
    if (w.eo_ir > best_w) {
        best = Source::eo_ir;
        best_w = w.eo_ir;
    }
    if (w.eo_vis > best_w) {
        best = Source::eo_vis;
        best_w = w.eo_vis;
    }
    return best;
}

std::string_view dynamic_range_name(DynamicRange v) {
    return v == DynamicRange::small ? "small" : "large";
}

std::string_view focus_mode_name(FocusMode v) {
    return v == FocusMode::close ? "close" : "long";
}

std::string_view color_mode_name(ColorMode v) {
    return v == ColorMode::vivid ? "vivid" : "normal";
}

std::optional<DynamicRange> dynamic_range_from(std::string_view name) {
    if (name == "small") return DynamicRange::small;
    if (name == "large") return DynamicRange::large;
    return std::nullopt;
}

std::optional<FocusMode> focus_mode_from(std::string_view name) {
    if (name == "close") return FocusMode::close;
    if (name == "long") return FocusMode::long_range;
    return std::nullopt;
}

std::optional<ColorMode> color_mode_from(std::string_view name) {
    if (name == "vivid") return ColorMode::vivid;
    if (name == "normal") return ColorMode::normal;
    return std::nullopt;
}

}  // namespace hazefuse
