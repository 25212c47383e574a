#pragma once

#include <schedsim/core/scheduler.hpp>
#include <schedsim/core/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace schedsim::core {

/// Aggregate facts about one run, mostly for tests and diagnostics.
struct RunStats {
    double total_service = 0.0;  // integral of allocated share over time
    std::uint64_t events = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t completions = 0;
    std::uint64_t internal_events = 0;
    std::size_t max_pending = 0;
};

/// Called after every event with the fresh allocation; lets tests observe
/// who was served when without touching the engine.
using AllocationObserver = std::function<void(double t, const Allocation&)>;

/// Throws ValidationError unless jobs are sorted by arrival with unique ids,
/// non-negative arrivals and strictly positive sizes/estimates/weights.
inline void validate_workload(std::span<const Job> jobs) {
    std::unordered_set<JobId> seen;
    seen.reserve(jobs.size());
    double prev_arrival = -std::numeric_limits<double>::infinity();
    for (const Job& job : jobs) {
        if (!(job.size > 0.0))
            throw ValidationError("job " + std::to_string(job.id) + ": size must be > 0");
        if (!(job.estimated_size > 0.0))
            throw ValidationError("job " + std::to_string(job.id) + ": estimated size must be > 0");
        if (!(job.weight > 0.0))
            throw ValidationError("job " + std::to_string(job.id) + ": weight must be > 0");
        if (!(job.arrival >= 0.0) || !std::isfinite(job.arrival))
            throw ValidationError("job " + std::to_string(job.id) + ": arrival must be finite and >= 0");
        if (job.arrival < prev_arrival)
            throw ValidationError("workload not sorted by arrival at job " + std::to_string(job.id));
        prev_arrival = job.arrival;
        if (!seen.insert(job.id).second)
            throw ValidationError("duplicate job id " + std::to_string(job.id));
    }
}

/// @brief Earliest projected real completion under the given rates.
///
/// Returns min over jobs with positive share of t_now + remaining/share,
/// ties broken by lowest job id; nothing if no job has positive share.
/// `remaining_of(id)` must return the true remaining work of a keyed job.
template <typename RemainingFn>
std::optional<std::pair<double, JobId>>
project_next_completion(double t_now, const Allocation& alloc, RemainingFn&& remaining_of) {
    std::optional<std::pair<double, JobId>> best;
    for (const auto& [id, share] : alloc.shares) {
        if (!(share > 0.0)) continue;
        double remaining = remaining_of(id);
        if (remaining < 0.0) remaining = 0.0;
        const double t = t_now + remaining / share;
        if (!best || t < best->first || (t == best->first && id < best->second))
            best = {t, id};
    }
    return best;
}

namespace detail {

struct PendingJob {
    const Job* job = nullptr;
    double attained = 0.0;
};

inline void validate_allocation(const Allocation& alloc,
                                const std::unordered_map<JobId, PendingJob>& pending) {
    double sum = 0.0;
    for (const auto& [id, share] : alloc.shares) {
        if (!pending.count(id))
            throw ContractViolation("allocation names non-pending job " +
                                    std::to_string(id));
        if (!(share >= 0.0) || share > 1.0 + kShareEpsilon)
            throw ContractViolation("share out of [0,1] for job " + std::to_string(id));
        sum += share;
    }
    if (sum > 1.0 + kShareEpsilon)
        throw ContractViolation("allocated shares sum to " + std::to_string(sum));
    if (!pending.empty() && sum < 1.0 - kShareEpsilon)
        throw ContractViolation("policy is not work-conserving: shares sum to " +
                                std::to_string(sum) + " with pending jobs");
}

} // namespace detail

/// @brief Run one continuous-time simulation of a unit-capacity preemptive
/// server against the given policy.
///
/// Between consecutive events each pending job accrues service at its
/// allocated share; a job completes exactly when attained service reaches
/// its true size (absolute tolerance completion_epsilon(size)). The next
/// event is the earliest of: next arrival, earliest projected completion
/// under current rates, the scheduler's next internal event. Events at
/// equal times are processed internal events first, then real completions
/// (ascending job id), then arrivals (ascending job id); the scheduler is
/// re-queried for a fresh allocation after every event.
///
/// Returns one CompletionRecord per job, sorted by job id.
inline std::vector<CompletionRecord>
run_simulation(std::span<const Job> jobs, Scheduler& scheduler,
               RunStats* stats = nullptr, const AllocationObserver& observer = {}) {
    validate_workload(jobs);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::unordered_map<JobId, detail::PendingJob> pending;
    pending.reserve(64);
    std::set<JobId> ripe;  // pending jobs whose attained already reached size
    std::vector<CompletionRecord> records;
    records.reserve(jobs.size());

    // Simultaneous arrivals are delivered in ascending id order.
    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (jobs[a].arrival != jobs[b].arrival) return jobs[a].arrival < jobs[b].arrival;
        return jobs[a].id < jobs[b].id;
    });

    std::size_t next_arrival = 0;
    double now = jobs.empty() ? 0.0 : jobs.front().arrival;
    Allocation alloc = scheduler.current_allocation();
    detail::validate_allocation(alloc, pending);

    RunStats local_stats;
    RunStats& rs = stats ? *stats : local_stats;

    // Any policy here triggers at most O(1) internal events per job; this
    // guard only exists to turn a livelocked scheduler into a hard error.
    const std::uint64_t event_guard = 1000 + 64 * static_cast<std::uint64_t>(jobs.size());

    const auto remaining_of = [&](JobId id) {
        const auto& pj = pending.at(id);
        return pj.job->size - pj.attained;
    };

    while (!pending.empty() || next_arrival < jobs.size()) {
        if (rs.events > event_guard)
            throw ContractViolation("event guard exceeded; scheduler " +
                                    scheduler.name() + " appears to livelock");

        const double t_arrival = next_arrival < jobs.size() ? jobs[order[next_arrival]].arrival : kInf;

        double t_internal = kInf;
        if (auto ie = scheduler.next_internal_event()) {
            t_internal = *ie;
            // tolerate sub-epsilon jitter from float paths, nothing more
            if (t_internal < now - 1e-9 * std::max(1.0, std::abs(now)))
                throw ContractViolation("internal event in the past from " + scheduler.name());
            if (t_internal < now) t_internal = now;
        }

        double t_completion = kInf;
        JobId completion_id = 0;
        if (!ripe.empty()) {
            t_completion = now;
            completion_id = *ripe.begin();
        } else if (auto proj = project_next_completion(now, alloc, remaining_of)) {
            t_completion = proj->first;
            completion_id = proj->second;
        }

        const double t_next = std::min({t_internal, t_completion, t_arrival});
        if (t_next == kInf)
            throw ContractViolation("simulation stalled with " +
                                    std::to_string(pending.size()) + " pending jobs");

        if (t_next > now) {
            const double dt = t_next - now;
            for (const auto& [id, share] : alloc.shares) {
                if (!(share > 0.0)) continue;
                auto& pj = pending.at(id);
                pj.attained += share * dt;
                rs.total_service += share * dt;
                if (pj.attained >= pj.job->size - completion_epsilon(pj.job->size))
                    ripe.insert(id);
            }
            now = t_next;
            if (!ripe.empty()) {
                // a completion became due exactly at now; reclassify
                t_completion = now;
                completion_id = *ripe.begin();
            }
        }

        // Deliver exactly one event; at equal times internal events win,
        // then completions, then arrivals.
        if (t_internal == t_next && t_internal <= t_completion && t_internal <= t_arrival) {
            scheduler.on_internal_event(now);
            ++rs.internal_events;
        } else if (t_completion == t_next && t_completion <= t_arrival) {
            JobId id = completion_id;
            if (!ripe.empty()) {
                id = *ripe.begin();
                ripe.erase(ripe.begin());
            }
            // If float arithmetic left the projected completer a hair short,
            // complete it anyway: its projected completion time is now.
            const Job& job = *pending.at(id).job;
            CompletionRecord rec;
            rec.job_id = id;
            rec.arrival = job.arrival;
            rec.size = job.size;
            rec.completion = now;
            rec.sojourn = now - job.arrival;
            rec.slowdown = rec.sojourn / job.size;
            records.push_back(rec);
            pending.erase(id);
            scheduler.on_real_completion(now, id);
            ++rs.completions;
        } else {
            const Job& job = jobs[order[next_arrival++]];
            pending.emplace(job.id, detail::PendingJob{&job, 0.0});
            scheduler.on_arrival(now, job);
            ++rs.arrivals;
        }
        ++rs.events;
        rs.max_pending = std::max(rs.max_pending, pending.size());

        alloc = scheduler.current_allocation();
        detail::validate_allocation(alloc, pending);
        if (observer) observer(now, alloc);
    }

    std::sort(records.begin(), records.end(),
              [](const CompletionRecord& a, const CompletionRecord& b) {
                  return a.job_id < b.job_id;
              });
    return records;
}

} // namespace schedsim::core
