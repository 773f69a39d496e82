#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hazefuse/errors.hpp"
#include "hazefuse/weather_engine.hpp"

using namespace hazefuse;

namespace {

WeatherTemplate make_tpl(const std::string& name, std::array<double, 5> mu,
                         std::array<double, 5> sigma) {
    WeatherTemplate t;
    t.name = name;
    t.mu = mu;
    t.sigma = sigma;
    t.schedule = {{"aerosol", 60.0}, {"humidity", 60.0}, {"luminance", 60.0},
                  {"rain", 60.0}, {"wind", 60.0}};
    t.weight_spec.family = ProfileFamily::clear;
    t.weight_spec.zones = {{0.7, 0.3, 0.0}, {0.3, 0.1, 0.6}};
    return t;
}

WeatherFeatures make_features(std::array<double, 5> mean) {
    WeatherFeatures f;
    f.mean = mean;
    return f;
}

// Uniform-mu template at z-distance d from all-zero features (unit sigma).
WeatherTemplate at_distance(const std::string& name, double d) {
    return make_tpl(name, {d, d, d, d, d}, {1, 1, 1, 1, 1});
}

}  // namespace

TEST_CASE("feature extraction means the window per channel") {
    ChannelHistories h;
    h[0].push(0.0, 200.0);
    h[0].push(10.0, 230.0);
    h[0].push(19.0, 260.0);
    h[0].push(100.0, 999.0);  // ahead of the queried window, must not count
    for (int c = 1; c < 5; ++c) h[c].push(15.0, 2.0 * c);

    WeatherFeatures f = extract_features(h, 20.0, 20.0);
    // psi window [0,20] holds 200, 230, 260
    CHECK(f.get(WeatherChannel::psi) == doctest::Approx(230.0));
    CHECK(f.get(WeatherChannel::rain) == doctest::Approx(2.0));
}

TEST_CASE("starved channel names its sensor") {
    ChannelHistories h;
    for (int c = 1; c < 5; ++c) h[c].push(15.0, 1.0);
    // psi has no samples at all
    try {
        extract_features(h, 20.0, 20.0);
        FAIL("expected EmptyWindowError");
    } catch (const EmptyWindowError& e) {
        CHECK(std::string(e.what()).find("aerosol") != std::string::npos);
    }

    // sample exists but is older than the window
    h[0].push(1.0, 100.0);
    CHECK_THROWS_AS(extract_features(h, 20.0, 100.0), EmptyWindowError);
}

TEST_CASE("template distance is the z-score rms") {
    WeatherTemplate t = make_tpl("x", {40, 0, 4, 60, 40000}, {20, 0.5, 2, 8, 15000});
    WeatherFeatures f = make_features({80, 1, 5, 64, 55000});
    // z = (2, 2, 0.5, 0.5, 1) -> rms = sqrt((4+4+0.25+0.25+1)/5)
    CHECK(template_distance(f, t) == doctest::Approx(std::sqrt(9.5 / 5.0)));
    CHECK(template_distance(make_features({40, 0, 4, 60, 40000}), t) == 0.0);
}

TEST_CASE("detection keeps the current template inside the deviation bound") {
    WeatherStateNetwork net;
    net.nodes["a"] = at_distance("a", 2.0);
    net.nodes["b"] = at_distance("b", 0.5);  // closer, but a is current and within
    WeatherAssessment out = detect_weather(make_features({0, 0, 0, 0, 0}), net, "a", 10.0);
    CHECK(out.primary() == "a");
    CHECK(!out.novel);
    CHECK(out.distance == doctest::Approx(2.0));
    REQUIRE(out.matched.size() == 1);
    CHECK(out.matched[0].weight == 1.0);
}

TEST_CASE("detection scans in rank order, not by distance") {
    WeatherStateNetwork net;
    net.nodes["cur"] = at_distance("cur", 10.0);
    net.nodes["near"] = at_distance("near", 1.0);
    net.nodes["mid"] = at_distance("mid", 2.5);
    // cur most recently used -> ranked first but out of bound; mid used more
    // recently than near, so the scan hits mid first even though near is closer
    net.nodes["cur"].last_used_t = 100.0;
    net.nodes["mid"].last_used_t = 90.0;
    net.nodes["near"].last_used_t = 80.0;
    for (auto& [k, v] : net.nodes) v.last_updated_t = 100.0;

    WeatherAssessment out = detect_weather(make_features({0, 0, 0, 0, 0}), net, "cur", 100.0);
    CHECK(out.primary() == "mid");
    CHECK(out.distance == doctest::Approx(2.5));
}

TEST_CASE("degraded match takes the globally closest template") {
    WeatherStateNetwork net;
    net.nodes["cur"] = at_distance("cur", 10.0);
    net.nodes["far"] = at_distance("far", 5.5);
    net.nodes["farther"] = at_distance("farther", 5.9);
    WeatherAssessment out = detect_weather(make_features({0, 0, 0, 0, 0}), net, "cur", 1.0);
    CHECK(!out.novel);
    CHECK(out.primary() == "far");
    CHECK(out.distance == doctest::Approx(5.5));
}

TEST_CASE("novel situation blends the two closest by inverse distance") {
    WeatherStateNetwork net;
    net.nodes["cur"] = at_distance("cur", 24.0);
    net.nodes["other"] = at_distance("other", 8.0);
    net.nodes["way"] = at_distance("way", 40.0);
    WeatherAssessment out = detect_weather(make_features({0, 0, 0, 0, 0}), net, "cur", 1.0);
    CHECK(out.novel);
    REQUIRE(out.matched.size() == 2);
    // weights 1/8 : 1/24 normalize to 3/4 : 1/4
    CHECK(out.matched[0].name == "other");
    CHECK(out.matched[0].weight == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(out.matched[1].name == "cur");
    CHECK(out.matched[1].weight == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(out.distance == doctest::Approx(8.0));

    // single-template dictionary still yields a valid blend
    WeatherStateNetwork solo;
    solo.nodes["only"] = at_distance("only", 30.0);
    WeatherAssessment sout = detect_weather(make_features({0, 0, 0, 0, 0}), solo, "only", 1.0);
    CHECK(sout.novel);
    REQUIRE(sout.matched.size() == 1);
    CHECK(sout.matched[0].weight == doctest::Approx(1.0));
}

TEST_CASE("ranking orders used, updated, event-linked, rest") {
    const double now = 10000.0;
    WeatherStateNetwork net;
    auto add = [&](const std::string& name, double used, double updated) {
        WeatherTemplate t = at_distance(name, 1.0);
        t.last_used_t = used;
        t.last_updated_t = updated;
        net.nodes[name] = t;
    };
    add("active", 9000.0, 9000.0);  // most recently used
    add("fresh", 100.0, 8000.0);    // updated within the hour
    add("fresh2", 200.0, 7000.0);   // updated within the hour, used later than fresh
    add("linked", 50.0, 0.0);       // stale, but an event of active
    add("stale1", 10.0, 0.0);
    add("stale2", 10.0, 0.0);
    net.nodes["active"].event_links.push_back("linked");

    const std::vector<std::string> expect = {"active", "fresh2", "fresh",
                                             "linked", "stale1", "stale2"};
    CHECK(rank_templates(net, now) == expect);
}

TEST_CASE("forecast normalizes outgoing edges and defaults to self") {
    WeatherStateNetwork net;
    net.nodes["a"] = at_distance("a", 1.0);
    net.nodes["b"] = at_distance("b", 1.0);
    net.nodes["c"] = at_distance("c", 1.0);
    net.edges[{"a", "b"}] = 3;
    net.edges[{"a", "c"}] = 1;

    auto fc = forecast(net, "a");
    CHECK(fc.at("b") == doctest::Approx(0.75));
    CHECK(fc.at("c") == doctest::Approx(0.25));
    double sum = 0.0;
    for (const auto& [k, v] : fc) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    // no outgoing edges: the state predicts itself
    auto self = forecast(net, "b");
    REQUIRE(self.size() == 1);
    CHECK(self.at("b") == 1.0);

    // uniform scaling of edge counts leaves the distribution unchanged
    WeatherStateNetwork scaled = net;
    for (auto& [k, v] : scaled.edges) v *= 10;
    auto fc2 = forecast(scaled, "a");
    CHECK(fc2.at("b") == doctest::Approx(fc.at("b")).epsilon(1e-12));
    CHECK(fc2.at("c") == doctest::Approx(fc.at("c")).epsilon(1e-12));
}

TEST_CASE("matched learning runs a prior-seeded welford update") {
    WeatherStateNetwork net;
    WeatherTemplate t = make_tpl("a", {10, 10, 10, 10, 10}, {2, 2, 2, 2, 2});
    t.count = 2;
    net.nodes["a"] = t;

    WeatherAssessment a;
    a.matched = {{"a", 1.0}};
    a.distance = 1.0;
    a.t_s = 50.0;

    // by hand: n0=2, M2 = 4*2 = 8; sample 16: delta=6, mu'=10+6/3=12,
    // M2' = 8 + 6*(16-12) = 32, sigma' = sqrt(32/3)
    std::string name = learn(net, a, make_features({16, 16, 16, 16, 16}), 50.0, "a");
    CHECK(name == "a");
    const WeatherTemplate& got = net.nodes.at("a");
    CHECK(got.count == 3);
    CHECK(got.mu[0] == doctest::Approx(12.0));
    CHECK(got.sigma[0] == doctest::Approx(std::sqrt(32.0 / 3.0)));
    CHECK(got.last_used_t == 50.0);
    CHECK(got.last_updated_t == 50.0);
    // matching the already-current template records no self-edge
    CHECK(net.edges.empty());
}

TEST_CASE("state changes bump the transition edge, self-loops never") {
    WeatherStateNetwork net;
    net.nodes["a"] = at_distance("a", 0.0);
    net.nodes["b"] = make_tpl("b", {9, 9, 9, 9, 9}, {1, 1, 1, 1, 1});

    WeatherAssessment hit_b;
    hit_b.matched = {{"b", 1.0}};
    hit_b.distance = 0.0;

    learn(net, hit_b, make_features({9, 9, 9, 9, 9}), 10.0, "a");
    CHECK(net.edges.at({"a", "b"}) == 1);
    learn(net, hit_b, make_features({9, 9, 9, 9, 9}), 20.0, "b");
    CHECK(net.edges.size() == 1);  // b -> b not recorded
    learn(net, hit_b, make_features({9, 9, 9, 9, 9}), 30.0, "a");
    CHECK(net.edges.at({"a", "b"}) == 2);
}

TEST_CASE("novel learning registers a blended provisional template") {
    WeatherStateNetwork net;
    WeatherTemplate p1 = make_tpl("p1", {0, 0, 0, 0, 0}, {2, 2, 2, 2, 2});
    p1.schedule["aerosol"] = 10.0;
    WeatherTemplate p2 = make_tpl("p2", {1, 1, 1, 1, 1}, {4, 4, 4, 4, 4});
    p2.schedule["aerosol"] = 60.0;
    net.nodes["p1"] = p1;
    net.nodes["p2"] = p2;

    WeatherAssessment a;
    a.novel = true;
    a.distance = 8.0;
    a.matched = {{"p1", 0.75}, {"p2", 0.25}};

    WeatherFeatures f = make_features({30, 1, 2, 3, 4});
    std::string name = learn(net, a, f, 120.0, "p1");
    CHECK(name == "novel-120");
    const WeatherTemplate& got = net.nodes.at(name);
    CHECK(got.provisional);
    CHECK(got.count == 1);
    CHECK(got.mu[0] == 30.0);  // seeded straight from the features
    CHECK(got.sigma[0] == doctest::Approx(0.75 * 2.0 + 0.25 * 4.0));
    // schedule is the weighted mean, rounded up: 0.75*10 + 0.25*60 = 22.5
    CHECK(got.schedule.at("aerosol") == 23.0);
    // same family: zone triples blend convexly (parents are identical here)
    CHECK(got.weight_spec.zones[0].eo_vis == doctest::Approx(0.7));

    // both parents now link the novel template as an event
    for (const char* parent : {"p1", "p2"}) {
        const auto& links = net.nodes.at(parent).event_links;
        CHECK(std::find(links.begin(), links.end(), name) != links.end());
    }
    CHECK(net.edges.at({"p1", name}) == 1);

    // a second novel registration at the same instant gets a distinct name
    std::string again = learn(net, a, f, 120.0, name);
    CHECK(again == "novel-120+");
}

TEST_CASE("bootstrap dictionary matches the published anchor values") {
    WeatherStateNetwork net = bootstrap_network();
    REQUIRE(net.nodes.size() == 4);
    CHECK(net.thresholds.theta_dev == 3.0);
    CHECK(net.thresholds.theta_new == 6.0);

    const WeatherTemplate& hazy = net.nodes.at("hazy");
    CHECK(hazy.mu[0] == 230.0);
    CHECK(hazy.schedule.at("aerosol") == 10.0);
    CHECK(hazy.schedule.at("luminance") == 600.0);
    CHECK(hazy.weight_spec.family == ProfileFamily::haze);
    REQUIRE(hazy.weight_spec.zones.size() == 3);
    CHECK(hazy.weight_spec.zones[1].eo_ir == 0.6);

    const WeatherTemplate& clear = net.nodes.at("clear_sunny");
    CHECK(clear.schedule.at("aerosol") == 300.0);
    CHECK(clear.schedule.at("luminance") == 60.0);
    CHECK(clear.weight_spec.zones.size() == 2);
    CHECK(net.nodes.at("rainy").settings.vis.gamma == doctest::Approx(1.8));
    CHECK(net.nodes.at("stormy").settings.radar_calibration == "rain-clutter");
}

TEST_CASE("dictionary persistence round-trips") {
    WeatherStateNetwork net = bootstrap_network();
    // make it non-trivial: an edge and a provisional template
    WeatherAssessment a;
    a.novel = true;
    a.distance = 10.0;
    a.matched = {{"hazy", 0.6}, {"stormy", 0.4}};
    learn(net, a, make_features({300, 10, 9, 80, 5000}), 40.0, "hazy");

    const std::string text = network_to_json_text(net);
    WeatherStateNetwork back = network_from_json_text(text);
    CHECK(network_to_json_text(back) == text);
    CHECK(back.nodes.count("novel-40") == 1);
    CHECK(back.edges.at({"hazy", "novel-40"}) == 1);
}

TEST_CASE("dictionary loader is fail-closed") {
    CHECK_THROWS_AS(network_from_json_text("{true"), ParseError);
    CHECK_THROWS_AS(network_from_json_text(R"({"nodes": {}, "edges": []})"),
                    EmptyDictionaryError);
    CHECK_THROWS_AS(network_from_json_text(R"({"nodes": {}, "edges": [], "x": 1})"),
                    ValidationError);

    // corrupt one field at a time starting from a valid serialization
    const std::string good = network_to_json_text(bootstrap_network());
    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string text = good;
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return text;
    };
    // sigma zero
    CHECK_THROWS_AS(network_from_json_text(corrupt("\"psi\": 20.0", "\"psi\": 0.0")),
                    ValidationError);
    // unknown schedule sensor
    CHECK_THROWS_AS(network_from_json_text(corrupt("\"aerosol\": 300.0", "\"vibes\": 300.0")),
                    ValidationError);
    // zone weights not summing to one
    CHECK_THROWS_AS(network_from_json_text(corrupt("\"eo_vis\": 0.7", "\"eo_vis\": 0.8")),
                    ValidationError);
}
