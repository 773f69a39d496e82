#ifndef HAZEFUSE_SENSORS_HPP
#define HAZEFUSE_SENSORS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hazefuse/rng.hpp"
#include "hazefuse/scenario.hpp"
#include "hazefuse/types.hpp"
#include "hazefuse/world.hpp"

namespace hazefuse {

// ── Attenuation model ──
// Koschmieder: V = 3.912 / beta. Clear-air extinction floor corresponds to
// the 10 km maximum visibility; the PSI-to-extinction slope is calibrated
// so aerosol index 230 gives 5 km.

inline constexpr double kBetaClearPerM = 3.912e-4;
inline constexpr double kPsiToBetaPerM = 3.912 / (5000.0 * 230.0);
inline constexpr double kMaxVisibilityM = 10000.0;

// Meteorological visibility in meters for an aerosol index, in (0, 10000].
// Throws DomainError for negative psi.
double visibility_from_aerosol(double psi);

// Visible-band extinction coefficient at an aerosol index (floor applied).
double beta_vis(double psi);

// ── Sensor configuration ──

struct RadarConfig {
    double r_min_m = 2000.0;    // shadow region: nothing closer is detectable
    double r_max_m = 200000.0;
    double sigma_pos_m = 5.0;
    std::array<double, 3> p_det = {0.3, 0.9, 0.99};  // indexed by SizeClass

    double p_det_for(SizeClass c) const { return p_det[static_cast<int>(c)]; }
};

struct SonarConfig {
    double r_max_m = 1000.0;
    double sigma_pos_m = 10.0;
    bool submerged_only = true;
    double p_det = 0.9;
};

struct EoConfig {
    double hw_range_m = 12000.0;       // hardware limit, full-circle field of view
    double epsilon_contrast = 0.05;    // apparent-contrast detection threshold
    double alpha_ir = 0.4;             // IR extinction relative to visible
};

struct WeatherNoiseConfig {
    // Absolute per-channel standard deviations.
    std::array<double, kWeatherChannelCount> stddev = {5.0, 0.2, 0.3, 1.0, 50.0};

    double stddev_for(WeatherChannel c) const { return stddev[static_cast<int>(c)]; }
};

struct SensorConfig {
    RadarConfig radar;
    SonarConfig sonar;
    EoConfig eo;
    WeatherNoiseConfig weather_noise;
};

// ── Reports ──

struct Detection {
    Source source = Source::radar;
    double t_s = 0.0;
    std::optional<std::string> object_hint;  // AIS only
    Vec2 position_m;
    std::optional<Vec2> velocity_mps;
    std::optional<SizeClass> size_class_estimate;
    double confidence = 0.0;  // in [0,1]
};

struct AISMessage {
    std::string sender_id;
    double t_s = 0.0;
    Vec2 position_m;
    Vec2 velocity_mps;
    double heading_rad = 0.0;
    std::optional<WeatherReadings> weather_annex;
};

// ── Scans ──
// All scans are pure given (world, scenario, config, rng substream) and
// iterate targets in a fixed order: vessels by id, then obstacles by index.
// The own vessel is never a target of its own sensors.

enum class EoBand { vis, ir };

// Deterministic contrast-threshold camera. A target with inherent contrast
// C0 at range d is visible iff d <= min(hw_range, ln(C0/eps)/beta_band) with
// beta_ir = alpha_ir * beta_vis. Positions are exact; confidence is the
// apparent contrast C0*exp(-beta*d).
std::vector<Detection> eo_scan(const WorldState& world, const Scenario& scenario,
                               const std::string& own_id, const SensorConfig& cfg,
                               EoBand band, double psi);

// All-weather annulus sensor: detects surface targets in
// [r_min, r_max] with per-class probability and Gaussian position noise.
// Consumes exactly one Bernoulli draw per candidate target per scan.
std::vector<Detection> radar_scan(const WorldState& world, const Scenario& scenario,
                                  const std::string& own_id, const SensorConfig& cfg,
                                  Rng& rng);

// Radar kernel restricted to submerged obstacles, short range, no shadow region.
std::vector<Detection> sonar_scan(const WorldState& world, const Scenario& scenario,
                                  const std::string& own_id, const SensorConfig& cfg,
                                  Rng& rng);

// One message per AIS-equipped vessel (the AMV broadcasts separately) and one
// per remote station, exact kinematics, weather annex sampled from ground
// truth at the sender position.
std::vector<AISMessage> ais_receive(const WorldState& world, const Scenario& scenario);

// Local weather sensor suite: truth plus Gaussian channel noise, clamped to
// physical ranges. Draws one normal per channel in channel order.
WeatherReadings weather_sensors_read(const WeatherReadings& truth,
                                     const WeatherNoiseConfig& noise, Rng& rng);

// Single-channel read used by schedule-driven polling; same noise model.
double read_weather_channel(const WeatherReadings& truth, WeatherChannel channel,
                            const WeatherNoiseConfig& noise, Rng& rng);

// Attaches velocities to radar detections by differencing against the
// previous scan (nearest neighbour within a gate). Owns the one-scan memory.
class RadarVelocityEstimator {
  public:
    explicit RadarVelocityEstimator(double gate_m = 100.0) : gate_m_(gate_m) {}

    void annotate(std::vector<Detection>& current, double dt_s);

  private:
    double gate_m_;
    std::vector<Vec2> previous_positions_;
};

// AIS messages enter fusion as pseudo-detections with full confidence.
Detection detection_from_ais(const AISMessage& msg);

}  // namespace hazefuse

#endif  // HAZEFUSE_SENSORS_HPP
