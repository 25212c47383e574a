#pragma once

#include <schedsim/core/types.hpp>

#include <unordered_map>

namespace schedsim::algo {

/// @brief Mirror of the engine's attained-service accounting.
///
/// The engine never hands true remaining work to a policy; policies that
/// need attained service (LAS, the SRPTE family) rebuild it from their own
/// allocations and the timestamps of the events they receive. Call
/// `advance(t, alloc)` with the allocation that was in force since the last
/// event before mutating any state in an event handler.
class AttainedMirror {
public:
    void track(core::JobId id) { attained_.emplace(id, 0.0); }
    void forget(core::JobId id) { attained_.erase(id); }

    void advance(double t, const core::Allocation& alloc) {
        if (!has_time_) {
            last_t_ = t;
            has_time_ = true;
            return;
        }
        const double dt = t - last_t_;
        if (dt > 0.0) {
            for (const auto& [id, share] : alloc.shares) {
                auto it = attained_.find(id);
                if (it != attained_.end()) it->second += share * dt;
            }
        }
        last_t_ = t;
    }

    [[nodiscard]] double of(core::JobId id) const { return attained_.at(id); }
    [[nodiscard]] bool tracks(core::JobId id) const { return attained_.count(id) != 0; }

private:
    std::unordered_map<core::JobId, double> attained_;
    double last_t_ = 0.0;
    bool has_time_ = false;
};

} // namespace schedsim::algo
