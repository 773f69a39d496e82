#include "hazefuse/event_log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hazefuse/errors.hpp"

namespace hazefuse {

const std::vector<std::string>& event_kind_order() {
    static const std::vector<std::string> kOrder = {
        "detection",    "ais",     "weather_reading", "weather_state",
        "schedule_update", "settings", "weight_profile",  "fused",
        "risk_alert",   "need_to_learn", "broadcast",
    };
    return kOrder;
}

int event_kind_rank(const std::string& kind) {
    const auto& order = event_kind_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] == kind) return static_cast<int>(i);
    }
    return static_cast<int>(order.size());
}

namespace {

// Canonical number rendering: integral values print exactly, everything
// else with six significant digits. Bit-exact replay depends on this.
void append_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        out += buf;
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    out += buf;
}

void append_canonical(std::string& out, const nlohmann::json& value) {
    using value_t = nlohmann::json::value_t;
    switch (value.type()) {
        case value_t::null:
            out += "null";
            break;
        case value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%lld",
                          static_cast<long long>(value.get<std::int64_t>()));
            out += buf;
            break;
        }
        case value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%llu",
                          static_cast<unsigned long long>(value.get<std::uint64_t>()));
            out += buf;
            break;
        }
        case value_t::number_float:
            append_number(out, value.get<double>());
            break;
        case value_t::string:
            out += nlohmann::json(value.get<std::string>()).dump();
            break;
        case value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ',';
                first = false;
                append_canonical(out, item);
            }
            out += ']';
            break;
        }
        case value_t::object: {
            // nlohmann::json stores object keys in a std::map, so iteration
            // is already lexicographic.
            out += '{';
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(key).dump();
                out += ':';
                append_canonical(out, item);
            }
            out += '}';
            break;
        }
        default:
            throw Error("unsupported JSON value in event payload");
    }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
    std::string out;
    append_canonical(out, value);
    return out;
}

std::string format_event(const Event& e) {
    std::string out = "{\"kind\":";
    out += nlohmann::json(e.kind).dump();
    out += ",\"payload\":";
    append_canonical(out, e.payload);
    out += ",\"t_s\":";
    append_number(out, e.t_s);
    out += '}';
    return out;
}

void EventLog::emit(double t_s, const std::string& kind, nlohmann::json payload) {
    pending_.push_back({t_s, kind, std::move(payload)});
}

void EventLog::flush_tick() {
    std::vector<std::pair<int, std::string>> keyed;
    keyed.reserve(pending_.size());
    for (const Event& e : pending_) {
        keyed.emplace_back(event_kind_rank(e.kind), format_event(e));
    }
    pending_.clear();
    std::sort(keyed.begin(), keyed.end());
    // duplicates collapse within this tick only, so track the last line we
    // actually kept rather than peeking at lines_ across the tick boundary
    const std::string* last_kept = nullptr;
    for (auto& [rank, line] : keyed) {
        if (last_kept && line == *last_kept) continue;
        lines_.push_back(std::move(line));
        last_kept = &lines_.back();
    }
}

std::string EventLog::text() const {
    std::string out;
    for (const std::string& line : lines_) {
        out += line;
        out += '\n';
    }
    return out;
}

void EventLog::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write log file '" + path + "'");
    out << text();
    if (!out) throw IoError("failed writing log file '" + path + "'");
}

}  // namespace hazefuse
