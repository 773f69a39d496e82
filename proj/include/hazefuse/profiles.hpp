#ifndef HAZEFUSE_PROFILES_HPP
#define HAZEFUSE_PROFILES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hazefuse/types.hpp"

namespace hazefuse {

// ── Fusion weight profiles ──
// A weather template stores only the per-zone weight triples and its family;
// the zone boundaries are resolved at build time from the current visibility
// (see build_weights). AIS always carries weight 1.0 on top of any profile.

enum class ProfileFamily { clear, haze };

std::string_view profile_family_name(ProfileFamily f);
std::optional<ProfileFamily> profile_family_from(std::string_view name);

struct ZoneWeights {
    double eo_vis = 0.0;
    double eo_ir = 0.0;
    double radar = 0.0;

    double sum() const { return eo_vis + eo_ir + radar; }
};

// Stored (unresolved) profile: clear family has 2 zones, haze family 3.
struct WeightProfileSpec {
    ProfileFamily family = ProfileFamily::clear;
    std::vector<ZoneWeights> zones;
};

struct WeightZone {
    double d_lo_m = 0.0;
    double d_hi_m = 0.0;  // +inf for the outermost zone
    ZoneWeights weights;
};

// Resolved range-zoned profile. Zones are contiguous from 0 to infinity and
// each zone's {eo_vis, eo_ir, radar} weights sum to 1.
struct WeightProfile {
    std::vector<WeightZone> zones;
    double ais_weight = 1.0;

    const WeightZone& zone_for(double range_m) const;
    // Weight of a source at a range; sonar shares the radar column
    // (same kernel), AIS returns ais_weight.
    double weight_for(Source source, double range_m) const;
    // Source with the maximum weight in the zone containing range_m
    // (AIS excluded; ties broken by Source order).
    Source argmax_imaging(double range_m) const;
};

// ── Sensor settings directives ──
// Directives are management output recorded to the log; the simulated
// sensors have no gain or optics to apply them to.

enum class DynamicRange { small, large };
enum class FocusMode { close, long_range };
enum class ColorMode { vivid, normal };

std::string_view dynamic_range_name(DynamicRange v);
std::string_view focus_mode_name(FocusMode v);
std::string_view color_mode_name(ColorMode v);
std::optional<DynamicRange> dynamic_range_from(std::string_view name);
std::optional<FocusMode> focus_mode_from(std::string_view name);
std::optional<ColorMode> color_mode_from(std::string_view name);

struct EoSettings {
    DynamicRange dynamic_range = DynamicRange::large;
    FocusMode focus = FocusMode::long_range;
    double gain = 1.0;
    double gamma = 1.0;
    ColorMode color_mode = ColorMode::vivid;
};

struct SettingsDirective {
    EoSettings vis;
    EoSettings ir;
    std::string radar_calibration;
};

}  // namespace hazefuse

#endif  // HAZEFUSE_PROFILES_HPP
