#ifndef HAZEFUSE_HISTORY_HPP
#define HAZEFUSE_HISTORY_HPP

#include <cstddef>
#include <deque>
#include <optional>
#include <utility>

#include "hazefuse/errors.hpp"

namespace hazefuse {

// Bounded ring of timestamped samples for one sensor channel.
// Timestamps must be strictly increasing.
class HistoryBuffer {
  public:
    using Sample = std::pair<double, double>;  // (t_s, value)

    explicit HistoryBuffer(std::size_t capacity = 600) : capacity_(capacity) {}

    void push(double t_s, double value) {
        if (!samples_.empty() && t_s <= samples_.back().first) {
            throw NonMonotonicTimestampError("history timestamp not increasing");
        }
        samples_.emplace_back(t_s, value);
        if (samples_.size() > capacity_) samples_.pop_front();
    }

    bool empty() const { return samples_.empty(); }
    std::size_t size() const { return samples_.size(); }
    std::size_t capacity() const { return capacity_; }

    std::optional<Sample> latest() const {
        if (samples_.empty()) return std::nullopt;
        return samples_.back();
    }

    std::optional<Sample> oldest() const {
        if (samples_.empty()) return std::nullopt;
        return samples_.front();
    }

    // Mean of samples with t in [t_lo, t_hi]; nullopt when none fall inside.
    std::optional<double> mean_in_window(double t_lo, double t_hi) const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [t, v] : samples_) {
            if (t >= t_lo && t <= t_hi) {
                sum += v;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    }

  private:
    std::size_t capacity_;
    std::deque<Sample> samples_;
};

}  // namespace hazefuse

#endif  // HAZEFUSE_HISTORY_HPP
