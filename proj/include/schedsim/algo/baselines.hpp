#pragma once

#include <schedsim/algo/attained.hpp>
#include <schedsim/algo/las_core.hpp>
#include <schedsim/core/scheduler.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace schedsim::algo {

/// First-in-first-out: full share to the earliest-arrived pending job
/// (ties by id). Non-preemptive by construction, since an arriving job can
/// never have an earlier arrival than the one being served.
class FifoScheduler : public core::Scheduler {
public:
    void on_arrival(double, const core::Job& job) override {
        queue_.emplace(job.arrival, job.id);
    }

    void on_real_completion(double, core::JobId id) override {
        for (auto it = queue_.begin(); it != queue_.end(); ++it) {
            if (it->second == id) {
                queue_.erase(it);
                return;
            }
        }
        throw core::ContractViolation("fifo: completion for unknown job");
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        core::Allocation alloc;
        if (!queue_.empty()) alloc.add(queue_.begin()->second, 1.0);
        return alloc;
    }

    [[nodiscard]] std::string name() const override { return "fifo"; }

private:
    std::set<std::pair<double, core::JobId>> queue_;  // (arrival, id)
};

/// Processor sharing / discriminatory processor sharing. PS gives every
/// pending job an equal share; DPS weights the shares by job weight and
/// reduces to PS when all weights are equal.
class PsScheduler : public core::Scheduler {
public:
    explicit PsScheduler(bool weighted) : weighted_(weighted) {}

    void on_arrival(double, const core::Job& job) override {
        pending_.emplace(job.id, weighted_ ? job.weight : 1.0);
    }

    void on_real_completion(double, core::JobId id) override {
        if (pending_.erase(id) == 0)
            throw core::ContractViolation("ps: completion for unknown job");
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        core::Allocation alloc;
        if (pending_.empty()) return alloc;
        double total_weight = 0.0;
        for (const auto& [id, w] : pending_) total_weight += w;
        for (const auto& [id, w] : pending_) alloc.add(id, w / total_weight);
        return alloc;
    }

    [[nodiscard]] std::string name() const override { return weighted_ ? "dps" : "ps"; }

private:
    bool weighted_;
    std::map<core::JobId, double> pending_;  // id -> weight
};

/// Least attained service: serve the pending job(s) with minimum attained
/// service, PS among ties. Catch-up instants, where the served group
/// reaches the next distinct attained level and absorbs it, are internal
/// events.
class LasScheduler : public core::Scheduler {
public:
    void on_arrival(double t, const core::Job& job) override {
        advance(t);
        las_.insert(job.id, 0.0);
    }

    void on_real_completion(double t, core::JobId id) override {
        advance(t);
        las_.remove(id);
    }

    [[nodiscard]] std::optional<double> next_internal_event() const override {
        return las_.next_catch_up(last_t_);
    }

    void on_internal_event(double t) override {
        const std::size_t before = las_.group_count();
        advance(t);  // serve() merges the groups when the gap closes
        if (las_.group_count() == before) las_.force_catch_up();
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        return las_.allocation();
    }

    [[nodiscard]] std::string name() const override { return "las"; }

private:
    void advance(double t) {
        if (has_time_ && t > last_t_ && !las_.empty()) las_.serve(t - last_t_);
        last_t_ = t;
        has_time_ = true;
    }

    LasCore las_;
    double last_t_ = 0.0;
    bool has_time_ = false;
};

} // namespace schedsim::algo
