#include "hazefuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace hazefuse {

namespace {

// Canonical per-detection key; sorting by it makes association independent
// of the caller's input order.
auto detection_key(const Detection& d) {
    return std::make_tuple(static_cast<int>(d.source), d.object_hint.value_or(std::string{}),
                           d.position_m.x, d.position_m.y, d.t_s);
}

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

double association_membership(const Detection& a, const Detection& b,
                              const AssociationParams& params) {
    const double dp = distance(a.position_m, b.position_m);
    double exponent = dp * dp / (2.0 * params.sigma_pos_m * params.sigma_pos_m);
    if (a.velocity_mps && b.velocity_mps) {
        const double dv = norm(*a.velocity_mps - *b.velocity_mps);
        exponent += dv * dv / (2.0 * params.sigma_vel_mps * params.sigma_vel_mps);
    }
    return std::exp(-exponent);
}

AssociationResult associate(const std::vector<Detection>& detections, Vec2 own_pos,
                            const WeightProfile& profile, const AssociationParams& params) {
    std::vector<Detection> sorted = detections;
    std::sort(sorted.begin(), sorted.end(), [](const Detection& a, const Detection& b) {
        return detection_key(a) < detection_key(b);
    });

    struct Pair {
        double mu;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            if (sorted[i].source == sorted[j].source) continue;
            const double mu = association_membership(sorted[i], sorted[j], params);
            if (mu < params.mu_loose) continue;
            if (mu < params.mu_accept) {
                // Loose band: accept only when an AIS anchor is involved or
                // both sensors are trusted in the zones they reported from.
                const bool ais_side = sorted[i].source == Source::ais ||
                                      sorted[j].source == Source::ais;
                const double wi = profile.weight_for(sorted[i].source,
                                                     distance(sorted[i].position_m, own_pos));
                const double wj = profile.weight_for(sorted[j].source,
                                                     distance(sorted[j].position_m, own_pos));
                if (!ais_side && !(wi >= 0.3 && wj >= 0.3)) continue;
            }
            pairs.push_back({mu, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.mu != b.mu) return a.mu > b.mu;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    UnionFind uf(sorted.size());
    for (const Pair& p : pairs) {
        const std::size_t ra = uf.find(p.i);
        const std::size_t rb = uf.find(p.j);
        if (ra == rb) continue;
        // One object reports once per source: refuse a merge that would put
        // two same-source detections in one group.
        bool conflict = false;
        for (std::size_t a = 0; a < sorted.size() && !conflict; ++a) {
            if (uf.find(a) != ra) continue;
            for (std::size_t b = 0; b < sorted.size() && !conflict; ++b) {
                if (uf.find(b) != rb) continue;
                conflict = sorted[a].source == sorted[b].source;
            }
        }
        if (!conflict) uf.unite(p.i, p.j);
    }

    std::map<std::size_t, std::vector<Detection>> components;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        components[uf.find(i)].push_back(sorted[i]);
    }

    AssociationResult result;
    for (auto& [root, members] : components) {
        if (members.size() >= 2) {
            result.groups.push_back(std::move(members));
        } else {
            result.unmatched.push_back(members.front());
        }
    }
    // Components were keyed by union-find roots; order groups by content.
    std::sort(result.groups.begin(), result.groups.end(),
              [](const std::vector<Detection>& a, const std::vector<Detection>& b) {
                  return detection_key(a.front()) < detection_key(b.front());
              });
    return result;
}

FusedKinematics fuse_position(const std::vector<Detection>& members, Vec2 own_pos,
                              const WeightProfile& profile) {
    FusedKinematics out;
    double total = 0.0;
    Vec2 acc{0.0, 0.0};
    for (const Detection& d : members) {
        double w = profile.weight_for(d.source, distance(d.position_m, own_pos));
        if (d.source == Source::ais) w *= 2.0;  // AIS dominates every zone weight
        acc = acc + d.position_m * w;
        total += w;
    }
    out.position_m = total > 0.0 ? acc / total : members.front().position_m;

    for (const Detection& d : members) {
        if (d.source == Source::ais && d.velocity_mps) {
            out.velocity_mps = d.velocity_mps;
            return out;
        }
    }
    Vec2 vel_acc{0.0, 0.0};
    double vel_total = 0.0;
    for (const Detection& d : members) {
        if (!d.velocity_mps) continue;
        const double w = profile.weight_for(d.source, distance(d.position_m, own_pos));
        vel_acc = vel_acc + *d.velocity_mps * w;
        vel_total += w;
    }
    if (vel_total > 0.0) out.velocity_mps = vel_acc / vel_total;
    return out;
}

}  // namespace hazefuse
