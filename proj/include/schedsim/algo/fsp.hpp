#pragma once

#include <schedsim/algo/attained.hpp>
#include <schedsim/algo/las_core.hpp>
#include <schedsim/algo/virtual_lag.hpp>
#include <schedsim/core/scheduler.hpp>

#include <limits>
#include <optional>
#include <string>

namespace schedsim::algo {

/// How the late set is served once jobs have completed in virtual time but
/// not yet in real time.
enum class LateDiscipline {
    Serial,  // one late job at a time, by earliest virtual completion
    Ps,      // equal shares across all late jobs
    Las,     // least lifetime attained service across late jobs
    Dps,     // shares proportional to weight (PSBS)
};

/// @brief The fair-sojourn family: serve the pending job that completes
/// earliest in an emulated (weighted) processor-sharing system.
///
/// The virtual system runs over estimated sizes (or true sizes, for the
/// error-free reference configuration) and is emulated in O(log n) via the
/// virtual-lag queue. While no job is late the head of the open heap gets
/// the full server; once jobs are late they are served according to the
/// late discipline and nothing else runs until the late set drains.
///
/// Configurations:
///  - fsp:      true sizes, unit virtual weights, serial late set (the late
///              set stays empty except for instant-of-completion ties);
///  - fspe:     estimates, unit weights, serial late set;
///  - fspe+ps:  estimates, unit weights, PS over the late set;
///  - fspe+las: estimates, unit weights, LAS over the late set;
///  - psbs:     estimates, job weights both in the virtual system and in
///              the DPS sharing of the late set.
class FspScheduler : public core::Scheduler {
public:
    FspScheduler(bool use_estimates, bool use_weights, LateDiscipline discipline,
                 core::HeapCounters* counters = nullptr)
        : use_estimates_(use_estimates), use_weights_(use_weights),
          discipline_(discipline), vq_(counters) {}

    void on_arrival(double t, const core::Job& job) override {
        advance(t);
        if (discipline_ == LateDiscipline::Las) attained_.track(job.id);
        vq_.job_arrival(t, job.id,
                        use_estimates_ ? job.estimated_size : job.size,
                        use_weights_ ? job.weight : 1.0);
    }

    void on_real_completion(double t, core::JobId id) override {
        advance(t);
        if (discipline_ == LateDiscipline::Las && pool_.contains(id)) pool_.remove(id);
        vq_.real_job_completion(id);
        if (discipline_ == LateDiscipline::Las) attained_.forget(id);
    }

    [[nodiscard]] std::optional<double> next_internal_event() const override {
        auto next = vq_.next_virtual_completion_time();
        if (discipline_ == LateDiscipline::Las && !vq_.late().empty()) {
            if (auto merge = pool_.next_catch_up(last_t_))
                if (!next || *merge < *next) next = merge;
        }
        return next;
    }

    void on_internal_event(double t) override {
        const auto virtual_completion = vq_.next_virtual_completion_time();
        const std::size_t groups_before = pool_.group_count();
        advance(t);
        if (virtual_completion && (discipline_ != LateDiscipline::Las ||
                                   *virtual_completion <= t)) {
            vq_.virtual_job_completion(t);
            if (discipline_ == LateDiscipline::Las) {
                // the newly late job (if any) joins the pool with its
                // lifetime attained service
                for (const auto& [id, w] : vq_.late())
                    if (!pool_.contains(id)) pool_.insert(id, attained_.of(id));
            }
        } else if (pool_.group_count() == groups_before && groups_before >= 2) {
            pool_.force_catch_up();
        }
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        core::Allocation alloc;
        const auto& late = vq_.late();
        if (!late.empty()) {
            switch (discipline_) {
            case LateDiscipline::Serial: {
                core::JobId best = 0;
                double best_lag = std::numeric_limits<double>::infinity();
                for (const auto& [id, w] : late) {
                    const double lag = vq_.late_lag_of(id);
                    if (lag < best_lag || (lag == best_lag && id < best)) {
                        best = id;
                        best_lag = lag;
                    }
                }
                alloc.add(best, 1.0);
                return alloc;
            }
            case LateDiscipline::Ps: {
                const double share = 1.0 / static_cast<double>(late.size());
                for (const auto& [id, w] : late) alloc.add(id, share);
                return alloc;
            }
            case LateDiscipline::Las:
                return pool_.allocation();
            case LateDiscipline::Dps: {
                const double wl = vq_.late_weight();
                for (const auto& [id, w] : late) alloc.add(id, w / wl);
                return alloc;
            }
            }
        }
        if (!vq_.open_empty()) alloc.add(vq_.open_top().id, 1.0);
        return alloc;
    }

    [[nodiscard]] std::string name() const override {
        switch (discipline_) {
        case LateDiscipline::Dps: return "psbs";
        case LateDiscipline::Ps: return "fspe+ps";
        case LateDiscipline::Las: return "fspe+las";
        case LateDiscipline::Serial: break;
        }
        return use_estimates_ ? "fspe" : "fsp";
    }

    /// Algorithm state, exposed for invariant checks in tests.
    [[nodiscard]] const VirtualLagQueue& virtual_queue() const { return vq_; }

private:
    void advance(double t) {
        if (discipline_ == LateDiscipline::Las) {
            attained_.advance(t, current_allocation());
            if (!vq_.late().empty() && t > last_t_) pool_.serve(t - last_t_);
        }
        last_t_ = t;
    }

    bool use_estimates_;
    bool use_weights_;
    LateDiscipline discipline_;
    VirtualLagQueue vq_;
    LasCore pool_;  // late jobs under the LAS discipline
    AttainedMirror attained_;
    double last_t_ = 0.0;
};

} // namespace schedsim::algo
