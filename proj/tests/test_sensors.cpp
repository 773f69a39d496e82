#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hazefuse/errors.hpp"
#include "hazefuse/rng.hpp"
#include "hazefuse/sensors.hpp"
#include "hazefuse/world.hpp"

using namespace hazefuse;

namespace {

struct TargetSpec {
    std::string id;
    SizeClass size = SizeClass::medium;
    Vec2 pos;
    bool ais = false;
};

Scenario make_scenario(const std::vector<TargetSpec>& targets, double psi = 40.0,
                       std::vector<Obstacle> obstacles = {}) {
    Scenario sc;
    sc.duration_s = 1000.0;
    sc.dt_s = 1.0;
    sc.seed = 1;
    sc.amv.id = "amv";
    sc.amv.ais_equipped = true;
    sc.amv.legs = {{0.0, {0.0, 0.0}, {0.0, 0.0}}};
    for (const TargetSpec& t : targets) {
        VesselSpec v;
        v.id = t.id;
        v.size_class = t.size;
        v.ais_equipped = t.ais;
        v.legs = {{0.0, t.pos, {0.0, 0.0}}};
        sc.vessels.push_back(v);
    }
    sc.obstacles = std::move(obstacles);
    WeatherSegment seg;
    seg.t_start_s = 0.0;
    seg.t_end_s = 1000.0;
    seg.values = {psi, 0.0, 4.0, 60.0, 40000.0};
    seg.label = "fixture";
    sc.weather_timeline = {seg};
    return sc;
}

std::set<std::pair<double, double>> positions_of(const std::vector<Detection>& dets) {
    std::set<std::pair<double, double>> out;
    for (const Detection& d : dets) out.insert({d.position_m.x, d.position_m.y});
    return out;
}

}  // namespace

TEST_CASE("visibility calibration anchors") {
    CHECK(visibility_from_aerosol(0.0) == kMaxVisibilityM);  // exact, not approximate
    CHECK(visibility_from_aerosol(230.0) == doctest::Approx(5000.0).epsilon(1e-9));
    CHECK(visibility_from_aerosol(460.0) == doctest::Approx(2500.0).epsilon(1e-9));
    CHECK_THROWS_AS(visibility_from_aerosol(-1.0), DomainError);

    // non-increasing in psi, always in (0, 10000]
    double prev = visibility_from_aerosol(0.0);
    for (double psi = 0.0; psi <= 1000.0; psi += 7.5) {
        const double v = visibility_from_aerosol(psi);
        CHECK(v <= prev + 1e-12);
        CHECK(v > 0.0);
        CHECK(v <= kMaxVisibilityM);
        prev = v;
    }
}

TEST_CASE("eo detection obeys the contrast threshold exactly") {
    // d_max = ln(C0/eps)/beta computed here independently of the library
    const double psi = 230.0;
    const double beta = std::max(kBetaClearPerM, kPsiToBetaPerM * psi);
    const double d_vis = std::log(0.4 / 0.05) / beta;
    const double d_ir = std::log(0.4 / 0.05) / (0.4 * beta);
    CHECK(d_vis == doctest::Approx(2657.8).epsilon(1e-3));
    CHECK(d_ir == doctest::Approx(6644.6).epsilon(1e-3));

    Scenario sc = make_scenario({{"in_vis", SizeClass::small, {d_vis - 1.0, 0.0}},
                                 {"out_vis", SizeClass::small, {d_vis + 1.0, 0.0}},
                                 {"mid", SizeClass::small, {4500.0, 0.0}},
                                 {"out_ir", SizeClass::small, {d_ir + 1.0, 0.0}}},
                                psi);
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    auto vis = positions_of(eo_scan(w, sc, "amv", cfg, EoBand::vis, psi));
    auto ir = positions_of(eo_scan(w, sc, "amv", cfg, EoBand::ir, psi));

    CHECK(vis.count({d_vis - 1.0, 0.0}) == 1);
    CHECK(vis.count({d_vis + 1.0, 0.0}) == 0);
    CHECK(vis.count({4500.0, 0.0}) == 0);  // the Fig. 2 situation: NIR-only
    CHECK(ir.count({4500.0, 0.0}) == 1);
    CHECK(ir.count({d_ir + 1.0, 0.0}) == 0);
}

TEST_CASE("eo confidence is the apparent contrast") {
    const double psi = 100.0;
    const double beta = std::max(kBetaClearPerM, kPsiToBetaPerM * psi);
    Scenario sc = make_scenario({{"v", SizeClass::large, {1000.0, 0.0}}}, psi);
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    auto dets = eo_scan(w, sc, "amv", cfg, EoBand::vis, psi);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].confidence == doctest::Approx(1.0 * std::exp(-beta * 1000.0)));
    CHECK(dets[0].source == Source::eo_vis);
    REQUIRE(dets[0].size_class_estimate.has_value());
    CHECK(*dets[0].size_class_estimate == SizeClass::large);
}

TEST_CASE("eo hardware range caps both bands") {
    Scenario sc = make_scenario({{"far", SizeClass::large, {12500.0, 0.0}}}, 0.0);
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    CHECK(eo_scan(w, sc, "amv", cfg, EoBand::vis, 0.0).empty());
    CHECK(eo_scan(w, sc, "amv", cfg, EoBand::ir, 0.0).empty());
}

TEST_CASE("ir detections are a superset of vis detections") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> coord(-9000.0, 9000.0);
    const double psis[] = {0.0, 60.0, 230.0, 460.0};
    for (int round = 0; round < 100; ++round) {
        std::vector<TargetSpec> targets;
        for (int i = 0; i < 8; ++i) {
            targets.push_back({"v" + std::to_string(i),
                               static_cast<SizeClass>(i % 3),
                               {coord(gen), coord(gen)}});
        }
        const double psi = psis[round % 4];
        Scenario sc = make_scenario(targets, psi);
        WorldState w = initial_world_state(sc);
        SensorConfig cfg;
        auto vis = positions_of(eo_scan(w, sc, "amv", cfg, EoBand::vis, psi));
        auto ir = positions_of(eo_scan(w, sc, "amv", cfg, EoBand::ir, psi));
        CHECK(std::includes(ir.begin(), ir.end(), vis.begin(), vis.end()));
    }
}

TEST_CASE("radar detection rate matches the configured probability") {
    Scenario sc = make_scenario({{"small", SizeClass::small, {0.0, 5000.0}}});
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    Rng rng = Rng::substream(99, "radar");

    int hits = 0;
    // Welford over the x-error of accepted detections
    long long n = 0;
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < 10000; ++i) {
        auto dets = radar_scan(w, sc, "amv", cfg, rng);
        if (dets.empty()) continue;
        ++hits;
        const double err = dets[0].position_m.x - 0.0;
        ++n;
        const double delta = err - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (err - mean);
    }
    // binomial 4-sigma band around p=0.3 for 10000 trials
    const double rate = hits / 10000.0;
    CHECK(rate >= 0.2817);
    CHECK(rate <= 0.3183);
    const double sigma = std::sqrt(m2 / static_cast<double>(n - 1));
    CHECK(sigma >= 4.7);
    CHECK(sigma <= 5.3);
    CHECK(std::abs(mean) < 0.4);
}

TEST_CASE("large target at 10 km is detected about 99 percent of the time") {
    Scenario sc = make_scenario({{"big", SizeClass::large, {0.0, 10000.0}}});
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    Rng rng = Rng::substream(7, "radar");
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
        hits += radar_scan(w, sc, "amv", cfg, rng).empty() ? 0 : 1;
    }
    CHECK(hits >= 9800);
}

TEST_CASE("radar annulus excludes shadow region and beyond-range targets") {
    Scenario sc = make_scenario({{"shadow", SizeClass::large, {1500.0, 0.0}},
                                 {"beyond", SizeClass::large, {250000.0, 0.0}}});
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    Rng rng = Rng::substream(3, "radar");
    for (int i = 0; i < 500; ++i) {
        CHECK(radar_scan(w, sc, "amv", cfg, rng).empty());
    }
}

TEST_CASE("radar position error stays within five sigma per axis") {
    Scenario sc = make_scenario({{"t", SizeClass::large, {3000.0, 4000.0}}});
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    Rng rng = Rng::substream(12, "radar");
    for (int i = 0; i < 5000; ++i) {
        for (const Detection& d : radar_scan(w, sc, "amv", cfg, rng)) {
            CHECK(std::abs(d.position_m.x - 3000.0) <= 5.0 * cfg.radar.sigma_pos_m);
            CHECK(std::abs(d.position_m.y - 4000.0) <= 5.0 * cfg.radar.sigma_pos_m);
            CHECK(d.confidence == doctest::Approx(0.99));
        }
    }
}

TEST_CASE("out-of-range candidates still consume their detection draw") {
    // Moving one target between two out-of-annulus positions must not change
    // the other target's detection sequence for the same seed.
    Scenario a = make_scenario({{"a", SizeClass::large, {1500.0, 0.0}},
                                {"b", SizeClass::small, {0.0, 6000.0}}});
    Scenario b = make_scenario({{"a", SizeClass::large, {250000.0, 0.0}},
                                {"b", SizeClass::small, {0.0, 6000.0}}});
    WorldState wa = initial_world_state(a);
    WorldState wb = initial_world_state(b);
    SensorConfig cfg;
    Rng ra = Rng::substream(55, "radar");
    Rng rb = Rng::substream(55, "radar");
    for (int i = 0; i < 200; ++i) {
        auto da = radar_scan(wa, a, "amv", cfg, ra);
        auto db = radar_scan(wb, b, "amv", cfg, rb);
        REQUIRE(da.size() == db.size());
        for (std::size_t k = 0; k < da.size(); ++k) {
            CHECK(da[k].position_m.x == db[k].position_m.x);
            CHECK(da[k].position_m.y == db[k].position_m.y);
        }
    }
}

TEST_CASE("radar output is independent of the weather") {
    Scenario clear = make_scenario({{"t", SizeClass::medium, {0.0, 7000.0}}}, 0.0);
    Scenario haze = make_scenario({{"t", SizeClass::medium, {0.0, 7000.0}}}, 460.0);
    WorldState wc = initial_world_state(clear);
    WorldState wh = initial_world_state(haze);
    SensorConfig cfg;
    Rng rc = Rng::substream(8, "radar");
    Rng rh = Rng::substream(8, "radar");
    for (int i = 0; i < 300; ++i) {
        auto dc = radar_scan(wc, clear, "amv", cfg, rc);
        auto dh = radar_scan(wh, haze, "amv", cfg, rh);
        REQUIRE(dc.size() == dh.size());
        for (std::size_t k = 0; k < dc.size(); ++k) {
            CHECK(dc[k].position_m.x == dh[k].position_m.x);
        }
    }
}

TEST_CASE("sonar sees only submerged obstacles inside one kilometer") {
    Scenario sc = make_scenario({{"surface", SizeClass::small, {400.0, 0.0}}}, 40.0,
                                {{{0.0, 500.0}, 20.0, true},     // in range, submerged
                                 {{0.0, 5000.0}, 20.0, true},    // beyond range
                                 {{300.0, 0.0}, 20.0, false}});  // surface obstacle
    WorldState w = initial_world_state(sc);
    SensorConfig cfg;
    Rng rng = Rng::substream(31, "sonar");
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
        auto dets = sonar_scan(w, sc, "amv", cfg, rng);
        CHECK(dets.size() <= 1);
        if (!dets.empty()) {
            ++hits;
            CHECK(dets[0].source == Source::sonar);
            CHECK(std::abs(dets[0].position_m.y - 500.0) < 5.0 * cfg.sonar.sigma_pos_m);
        }
    }
    const double rate = hits / 10000.0;
    CHECK(rate >= 0.888);
    CHECK(rate <= 0.912);
}

TEST_CASE("ais reports equipped vessels and stations exactly") {
    Scenario sc = make_scenario({{"alpha", SizeClass::large, {100.0, 200.0}, true},
                                 {"beta", SizeClass::medium, {300.0, -100.0}, true},
                                 {"gamma", SizeClass::large, {-50.0, 0.0}, true},
                                 {"mute", SizeClass::small, {500.0, 500.0}, false}},
                                230.0);
    sc.remote_stations.push_back({"station-1", {2000.0, 2000.0}, true});
    WorldState w = initial_world_state(sc);
    auto msgs = ais_receive(w, sc);
    REQUIRE(msgs.size() == 4);  // three equipped vessels + one station
    CHECK(msgs[0].sender_id == "alpha");
    CHECK(msgs[1].sender_id == "beta");
    CHECK(msgs[2].sender_id == "gamma");
    CHECK(msgs[3].sender_id == "station-1");
    CHECK(msgs[0].position_m == Vec2{100.0, 200.0});
    CHECK(msgs[3].velocity_mps == Vec2{0.0, 0.0});
    REQUIRE(msgs[0].weather_annex.has_value());
    CHECK(msgs[0].weather_annex->psi == doctest::Approx(230.0));  // truth, no noise
}

TEST_CASE("radar velocity estimator differences consecutive scans") {
    RadarVelocityEstimator est;
    std::vector<Detection> scan1 = {{Source::radar, 0.0, {}, {5000.0, 0.0}, {}, {}, 0.9}};
    est.annotate(scan1, 1.0);
    CHECK(!scan1[0].velocity_mps.has_value());  // nothing to difference against

    std::vector<Detection> scan2 = {{Source::radar, 1.0, {}, {5003.0, 4.0}, {}, {}, 0.9}};
    est.annotate(scan2, 1.0);
    REQUIRE(scan2[0].velocity_mps.has_value());
    CHECK(scan2[0].velocity_mps->x == doctest::Approx(3.0));
    CHECK(scan2[0].velocity_mps->y == doctest::Approx(4.0));

    // a jump beyond the gate breaks the pairing
    std::vector<Detection> scan3 = {{Source::radar, 2.0, {}, {5500.0, 0.0}, {}, {}, 0.9}};
    est.annotate(scan3, 1.0);
    CHECK(!scan3[0].velocity_mps.has_value());
}

TEST_CASE("weather sensor noise model") {
    WeatherReadings truth{230.0, 0.0, 4.0, 60.0, 40000.0};

    WeatherNoiseConfig silent;
    silent.stddev = {0.0, 0.0, 0.0, 0.0, 0.0};
    Rng rng = Rng::substream(1, "weather");
    WeatherReadings r = weather_sensors_read(truth, silent, rng);
    CHECK(r.psi == 230.0);
    CHECK(r.luminance_lux == 40000.0);

    // sample mean of 10000 noisy reads within 3 standard errors (5/sqrt(10000))
    WeatherNoiseConfig noisy;
    Rng rng2 = Rng::substream(2, "weather");
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        sum += read_weather_channel(truth, WeatherChannel::psi, noisy, rng2);
    }
    const double sample_mean = sum / 10000.0;
    CHECK(sample_mean >= 229.85);
    CHECK(sample_mean <= 230.15);

    // channels clamp at physical zero
    WeatherReadings zero{0.0, 0.0, 0.0, 0.0, 0.0};
    Rng rng3 = Rng::substream(3, "weather");
    bool clamped = false;
    for (int i = 0; i < 200; ++i) {
        const double v = read_weather_channel(zero, WeatherChannel::psi, noisy, rng3);
        CHECK(v >= 0.0);
        if (v == 0.0) clamped = true;
    }
    CHECK(clamped);
}

TEST_CASE("detection from ais carries identity and full confidence") {
    AISMessage msg{"alpha", 5.0, {100.0, 200.0}, {1.0, 2.0}, 0.5, {}};
    Detection d = detection_from_ais(msg);
    CHECK(d.source == Source::ais);
    CHECK(d.confidence == 1.0);
    REQUIRE(d.object_hint.has_value());
    CHECK(*d.object_hint == "alpha");
    REQUIRE(d.velocity_mps.has_value());
    CHECK(d.velocity_mps->y == doctest::Approx(2.0));
}
