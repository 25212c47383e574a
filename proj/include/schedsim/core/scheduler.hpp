#pragma once

#include <schedsim/core/types.hpp>

#include <optional>
#include <string>

namespace schedsim::core {

/// @brief Behavioral contract implemented by every scheduling policy.
///
/// The engine owns the clock and all attained-service accounting; a policy
/// only learns about arrivals, about real completions (detected by the
/// engine from true sizes), and about its own requested internal events.
/// Between two consecutive events, `current_allocation()` must be a pure
/// function of the scheduler's state.
///
/// Policies that need attained service (LAS, the SRPTE family) reconstruct
/// it by mirroring their own allocations against event timestamps; they
/// never see true remaining work.
class Scheduler {
public:
    virtual ~Scheduler() = default;

    /// A new job became pending at time `t` (== job.arrival).
    virtual void on_arrival(double t, const Job& job) = 0;

    /// Job `id` reached its true size at time `t` and left the system.
    virtual void on_real_completion(double t, JobId id) = 0;

    /// Earliest pending policy-internal event (virtual completion, LAS
    /// catch-up, late transition, ...). Must be >= the current simulation
    /// time. Default: none.
    [[nodiscard]] virtual std::optional<double> next_internal_event() const {
        return std::nullopt;
    }

    /// Deliver the internal event previously announced for time `t`.
    virtual void on_internal_event(double /*t*/) {}

    /// Shares of server capacity for the pending jobs, per the policy.
    [[nodiscard]] virtual Allocation current_allocation() const = 0;

    /// Policy name as used on the command line.
    [[nodiscard]] virtual std::string name() const = 0;
};

} // namespace schedsim::core
