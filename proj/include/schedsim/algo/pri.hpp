#pragma once

#include <schedsim/core/engine.hpp>
#include <schedsim/core/scheduler.hpp>

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace schedsim::algo {

/// @brief Serve jobs in the order they complete under an emulated reference
/// policy.
///
/// The wrapper runs a live emulation of `Reference` over the jobs'
/// (estimated) sizes: the emulation clock equals the real clock, emulated
/// completions are internal events, and the real server always gives its
/// full capacity to the pending job that completes earliest in the
/// emulation. With exact sizes the resulting schedule dominates the
/// reference: no job completes later than it would have under the
/// reference itself. With reference PS this is exactly the fair sojourn
/// protocol.
///
/// `Reference` must be copyable: deciding which pending job completes
/// earliest requires rolling the emulation forward on a scratch copy.
template <typename Reference>
class PriScheduler : public core::Scheduler {
public:
    explicit PriScheduler(Reference reference)
        : ref_(std::move(reference)), ref_name_(ref_.name()) {}

    void on_arrival(double t, const core::Job& job) override {
        advance_emulation(t);
        ref_.on_arrival(t, job);
        vrem_.emplace(job.id, job.estimated_size);
        pending_real_.insert(job.id);
    }

    void on_real_completion(double t, core::JobId id) override {
        advance_emulation(t);
        pending_real_.erase(id);
        // the job keeps running in the emulation until it completes there
    }

    [[nodiscard]] std::optional<double> next_internal_event() const override {
        auto next = next_emulated_completion();
        if (auto ref_event = ref_.next_internal_event())
            if (!next || *ref_event < *next) next = ref_event;
        return next;
    }

    void on_internal_event(double t) override {
        const auto emulated = next_emulated_completion();
        const auto ref_event = ref_.next_internal_event();
        advance_emulation(t);
        if (emulated && (!ref_event || *emulated <= *ref_event)) {
            const core::JobId id = next_emulated_completer();
            vrem_.erase(id);
            sequence_position_.emplace(id, sequence_position_.size());
            ref_.on_real_completion(t, id);
        } else {
            ref_.on_internal_event(t);
        }
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        core::Allocation alloc;
        if (pending_real_.empty()) return alloc;

        // Jobs already completed in the emulation come first, in emulated
        // completion order.
        core::JobId best = 0;
        std::size_t best_pos = std::numeric_limits<std::size_t>::max();
        for (core::JobId id : pending_real_) {
            auto it = sequence_position_.find(id);
            if (it != sequence_position_.end() && it->second < best_pos) {
                best = id;
                best_pos = it->second;
            }
        }
        if (best_pos != std::numeric_limits<std::size_t>::max()) {
            alloc.add(best, 1.0);
            return alloc;
        }
        alloc.add(project_first_pending_completer(), 1.0);
        return alloc;
    }

    [[nodiscard]] std::string name() const override { return "pri:" + ref_name_; }

private:
    void advance_emulation(double t) {
        const double dt = t - last_t_;
        if (dt > 0.0) {
            const core::Allocation alloc = ref_.current_allocation();
            for (const auto& [id, share] : alloc.shares) {
                auto it = vrem_.find(id);
                if (it != vrem_.end() && share > 0.0) {
                    it->second -= share * dt;
                    if (it->second < 0.0) it->second = 0.0;
                }
            }
        }
        last_t_ = t;
    }

    [[nodiscard]] std::optional<double> next_emulated_completion() const {
        const core::Allocation alloc = ref_.current_allocation();
        auto proj = core::project_next_completion(
            last_t_, alloc, [&](core::JobId id) { return vrem_.at(id); });
        if (!proj) return std::nullopt;
        return proj->first;
    }

    [[nodiscard]] core::JobId next_emulated_completer() const {
        const core::Allocation alloc = ref_.current_allocation();
        auto proj = core::project_next_completion(
            last_t_, alloc, [&](core::JobId id) { return vrem_.at(id); });
        if (!proj)
            throw core::ContractViolation("pri: emulated completion event without a job");
        return proj->second;
    }

    /// Roll a scratch copy of the emulation forward, with no further
    /// arrivals, until a real-pending job completes in it; that job is the
    /// one to serve.
    [[nodiscard]] core::JobId project_first_pending_completer() const {
        Reference scratch = ref_;
        std::map<core::JobId, double> vrem = vrem_;
        double t = last_t_;
        const std::size_t guard = 1000 + 50 * vrem.size();
        for (std::size_t step = 0; step < guard; ++step) {
            const core::Allocation alloc = scratch.current_allocation();
            auto proj = core::project_next_completion(
                t, alloc, [&](core::JobId id) { return vrem.at(id); });
            double t_ref = std::numeric_limits<double>::infinity();
            if (auto ie = scratch.next_internal_event()) t_ref = *ie;
            if (!proj && t_ref == std::numeric_limits<double>::infinity())
                throw core::ContractViolation("pri: emulation stalled while projecting");
            if (proj && proj->first <= t_ref) {
                advance_scratch(vrem, alloc, proj->first - t);
                t = proj->first;
                const core::JobId id = proj->second;
                if (pending_real_.count(id)) return id;
                vrem.erase(id);
                scratch.on_real_completion(t, id);
            } else {
                advance_scratch(vrem, alloc, t_ref - t);
                t = t_ref;
                scratch.on_internal_event(t);
            }
        }
        throw core::ContractViolation("pri: projection did not terminate");
    }

    static void advance_scratch(std::map<core::JobId, double>& vrem,
                                const core::Allocation& alloc, double dt) {
        if (dt <= 0.0) return;
        for (const auto& [id, share] : alloc.shares) {
            auto it = vrem.find(id);
            if (it != vrem.end() && share > 0.0) {
                it->second -= share * dt;
                if (it->second < 0.0) it->second = 0.0;
            }
        }
    }

    Reference ref_;
    std::string ref_name_;
    std::map<core::JobId, double> vrem_;  // emulated remaining (estimated) work
    std::set<core::JobId> pending_real_;
    std::map<core::JobId, std::size_t> sequence_position_;  // emulated completion order
    double last_t_ = 0.0;
};

} // namespace schedsim::algo
