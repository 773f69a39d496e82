#ifndef HAZEFUSE_EVENT_LOG_HPP
#define HAZEFUSE_EVENT_LOG_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace hazefuse {

// ── Canonical event log ──
// Newline-delimited JSON with a fixed envelope {kind, payload, t_s}. The
// serialization is canonical so identical runs produce byte-identical logs:
// object keys sort alphabetically, floats print with up to six significant
// digits, integral values print exactly.

struct Event {
    double t_s = 0.0;
    std::string kind;
    nlohmann::json payload;
};

// Record kinds in their per-tick ordering.
extern const std::vector<std::string>& event_kind_order();
int event_kind_rank(const std::string& kind);

// Canonical JSON text for one value (not the envelope).
std::string canonical_json(const nlohmann::json& value);

// Canonical single-line record.
std::string format_event(const Event& e);

class EventLog {
  public:
    // Queues an event for the tick being built.
    void emit(double t_s, const std::string& kind, nlohmann::json payload);

    // Sorts the queued tick by (kind rank, payload text), drops exact
    // duplicates, appends to the log. Ticks must be flushed in time order.
    void flush_tick();

    const std::vector<std::string>& lines() const { return lines_; }
    std::string text() const;  // all lines, each newline-terminated
    void write(const std::string& path) const;

  private:
    std::vector<Event> pending_;
    std::vector<std::string> lines_;
};

}  // namespace hazefuse

#endif  // HAZEFUSE_EVENT_LOG_HPP
