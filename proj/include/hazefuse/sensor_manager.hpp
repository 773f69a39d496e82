#ifndef HAZEFUSE_SENSOR_MANAGER_HPP
#define HAZEFUSE_SENSOR_MANAGER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hazefuse/profiles.hpp"
#include "hazefuse/weather_engine.hpp"

namespace hazefuse {

// ── Sensor manager ──
// Turns the matched weather template (or novel-situation blend) into the
// three concrete control products: a polling schedule for the weather
// sensors, a range-zoned fusion weight profile, and hardware settings for
// the imaging sensors. Also owns the polling scheduler itself.

// Schedule for the active assessment. A direct match returns the template's
// schedule verbatim; a blend takes the per-sensor weighted mean of the
// parents' periods. Every known weather sensor must end up with a positive
// period.
std::map<std::string, double> resolve_schedule(const WeatherStateNetwork& network,
                                               const WeatherAssessment& assessment);

// Weight profile for the active assessment. A direct match materializes the
// template's stored family and zone triples against the current visibility;
// a blend materializes each parent and takes the per-zone weighted mean over
// the union of zone boundaries.
WeightProfile resolve_weight_profile(const WeatherStateNetwork& network,
                                     const WeatherAssessment& assessment,
                                     double visibility_m);

// Builds the concrete zones for one stored spec. Haze-family profiles place
// boundaries at min(500, visibility/2) and at the IR visibility limit
// visibility / alpha_ir; clear-family profiles split at the radar minimum
// range.
WeightProfile materialize_profile(const WeightProfileSpec& spec, double visibility_m,
                                  double radar_r_min_m = 2000.0, double alpha_ir = 0.4);

// Settings for the active assessment. A blend adopts the settings of the
// heaviest parent (ties break toward the lexicographically smaller name).
SettingsDirective resolve_settings(const WeatherStateNetwork& network,
                                   const WeatherAssessment& assessment);

// ── Polling scheduler ──
// Deadline scheduler over the weather sensors. A sensor is due when now
// reaches its last poll plus its period, so shortening a period pulls the
// next poll forward without ever re-polling within the same tick.

class PollScheduler {
  public:
    PollScheduler() = default;
    PollScheduler(const std::map<std::string, double>& schedule, double now_t);

    // Replaces the schedule. Known sensors keep their poll phase; sensors
    // new to the schedule are due immediately.
    void apply(const std::map<std::string, double>& schedule, double now_t);

    // Sensors due at or before now, in name order, each marked as polled.
    std::vector<std::string> due(double now_t);

    const std::map<std::string, double>& periods() const { return periods_; }
    // Next due time; nullopt for unknown or never-polled sensors.
    std::optional<double> next_deadline(const std::string& sensor) const;

  private:
    std::map<std::string, double> periods_;
    std::map<std::string, double> last_polled_;
};

}  // namespace hazefuse

#endif  // HAZEFUSE_SENSOR_MANAGER_HPP
