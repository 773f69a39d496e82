#ifndef HAZEFUSE_FUSION_HPP
#define HAZEFUSE_FUSION_HPP

#include <optional>
#include <vector>

#include "hazefuse/profiles.hpp"
#include "hazefuse/sensors.hpp"
#include "hazefuse/types.hpp"

namespace hazefuse {

// ── Multi-sensor correspondence ──
// One association pass per tick: detections from all sensors are grouped by
// fuzzy position/velocity similarity. Groups hold two or more detections
// from distinct sources; everything else lands in the unmatched list.

struct AssociationParams {
    double sigma_pos_m = 100.0;
    double sigma_vel_mps = 2.0;
    double mu_accept = 0.5;  // membership at or above pairs outright
    double mu_loose = 0.1;   // loose band lower edge
};

// Gaussian membership in position and velocity. The velocity term is
// dropped when either side carries no velocity.
double association_membership(const Detection& a, const Detection& b,
                              const AssociationParams& params);

struct AssociationResult {
    std::vector<std::vector<Detection>> groups;  // each sorted, >= 2 members
    std::vector<Detection> unmatched;            // singletons
};

// Greedy merge in descending membership. A pair with membership >= mu_accept
// merges; a loose pair in [mu_loose, mu_accept) merges only if one side is
// AIS or both detections sit in zones granting their source weight >= 0.3.
// Two detections from the same source never share a group. Output order and
// content are invariant under permutation of the input.
AssociationResult associate(const std::vector<Detection>& detections, Vec2 own_pos,
                            const WeightProfile& profile,
                            const AssociationParams& params = {});

struct FusedKinematics {
    Vec2 position_m;
    std::optional<Vec2> velocity_mps;
};

// Weighted mean of member positions; each member weighs its source's zone
// weight at its reported range, and AIS members get a 2x multiplier on top
// so they dominate. Velocity comes from the AIS member when present, else
// the weighted mean of members carrying one.
FusedKinematics fuse_position(const std::vector<Detection>& members, Vec2 own_pos,
                              const WeightProfile& profile);

}  // namespace hazefuse

#endif  // HAZEFUSE_FUSION_HPP
