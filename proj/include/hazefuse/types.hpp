#ifndef HAZEFUSE_TYPES_HPP
#define HAZEFUSE_TYPES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace hazefuse {

// ── Planar geometry ──
// The world is flat 2-D Cartesian, meters, origin chosen by the scenario.
// Compass convention for angles: 0 rad = north (+y), increasing clockwise,
// so east is pi/2. heading_of() maps a velocity onto that convention.

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline double heading_of(Vec2 velocity) { return std::atan2(velocity.x, velocity.y); }

// ── Object size classes ──

enum class SizeClass { small, medium, large };

std::string_view size_class_name(SizeClass c);
std::optional<SizeClass> size_class_from(std::string_view name);

// Inherent optical contrast shipped per class when a scenario omits it.
double default_contrast(SizeClass c);

// ── Detection sources ──
// Enum order doubles as the deterministic tie-break order in association.

enum class Source { radar = 0, eo_ir, eo_vis, ais, sonar };

std::string_view source_name(Source s);
std::optional<Source> source_from(std::string_view name);

// ── Weather channels ──

enum class WeatherChannel { psi = 0, rain, wind, humidity, luminance };

inline constexpr std::size_t kWeatherChannelCount = 5;

inline constexpr std::array<WeatherChannel, kWeatherChannelCount> kAllWeatherChannels = {
    WeatherChannel::psi, WeatherChannel::rain, WeatherChannel::wind,
    WeatherChannel::humidity, WeatherChannel::luminance};

// JSON field names for readings/annex payloads.
std::string_view channel_key(WeatherChannel c);
// Sensor names used by polling schedules (psi is measured by the aerosol sensor).
std::string_view channel_sensor_name(WeatherChannel c);
std::optional<WeatherChannel> channel_from_sensor(std::string_view sensor);

// One sample of all five weather channels. Doubles as ground truth,
// a noisy local read, and an AIS weather annex.
struct WeatherReadings {
    double psi = 0.0;
    double rain_mmph = 0.0;
    double wind_mps = 0.0;
    double humidity_pct = 0.0;
    double luminance_lux = 0.0;

    double get(WeatherChannel c) const;
    void set(WeatherChannel c, double v);

    // Negative magnitudes are unphysical; humidity lives in [0,100].
    void clamp_physical();
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace hazefuse

#endif  // HAZEFUSE_TYPES_HPP
