#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schedsim::core {

using JobId = std::uint64_t;

/// Tolerance used for share sums and allocation/work-conservation checks.
inline constexpr double kShareEpsilon = 1e-9;

/// Absolute completion tolerance for a job of a given size.
inline double completion_epsilon(double size) {
    return 1e-9 * (size > 1.0 ? size : 1.0);
}

/// Raised when user-supplied input (workloads, traces, configs) is malformed.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a scheduler (or a caller of one) breaks its behavioral
/// contract, e.g. allocating to a job that is not pending. Fail fast; the
/// engine never clamps or repairs bad allocations.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// @brief Immutable description of one unit of work.
///
/// `size` is the true amount of service needed (service-seconds at unit
/// rate); `estimated_size` is what size-based schedulers are allowed to see.
/// The engine keeps true sizes to itself and only reports completions, so a
/// policy cannot accidentally read `size`.
struct Job {
    JobId id = 0;
    double arrival = 0.0;
    double size = 0.0;
    double estimated_size = 0.0;
    double weight = 1.0;
};

/// @brief Fraction of server capacity assigned to each pending job.
///
/// Shares lie in [0, 1] and sum to at most 1 (within kShareEpsilon); they
/// must sum to 1 whenever any job is pending (work conservation). Every
/// keyed job must be pending.
struct Allocation {
    std::vector<std::pair<JobId, double>> shares;

    void add(JobId id, double share) { shares.emplace_back(id, share); }
    [[nodiscard]] bool empty() const { return shares.empty(); }

    [[nodiscard]] double total() const {
        double sum = 0.0;
        for (const auto& [id, share] : shares) sum += share;
        return sum;
    }

    /// Share currently given to `id`, 0 if absent.
    [[nodiscard]] double share_of(JobId id) const {
        for (const auto& [jid, share] : shares)
            if (jid == id) return share;
        return 0.0;
    }
};

/// Per-job outcome of a simulation run.
struct CompletionRecord {
    JobId job_id = 0;
    double arrival = 0.0;
    double size = 0.0;
    double completion = 0.0;
    double sojourn = 0.0;   // completion - arrival
    double slowdown = 0.0;  // sojourn / size
};

} // namespace schedsim::core
