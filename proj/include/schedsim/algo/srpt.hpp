#pragma once

#include <schedsim/algo/attained.hpp>
#include <schedsim/algo/las_core.hpp>
#include <schedsim/core/heap.hpp>
#include <schedsim/core/scheduler.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

namespace schedsim::algo {

/// @brief Shortest remaining processing time on (estimated) sizes, plus the
/// late-set hybrids.
///
/// A job is late once its estimated remaining processing time reaches zero;
/// estimated remaining decreases only while a job holds a positive share,
/// so under the plain policy a late job keeps the server until it really
/// completes (every newly arrived estimate is positive and can never beat
/// it). The hybrids keep that bookkeeping but serve, whenever any job is
/// late, the whole late set plus the highest-priority non-late job -- in PS
/// mode with equal shares, in LAS mode by least lifetime attained service.
///
/// `use_estimates = false` turns the same machinery into clairvoyant SRPT.
class SrptScheduler : public core::Scheduler {
public:
    enum class LateMode { None, Ps, Las };

    SrptScheduler(bool use_estimates, LateMode mode)
        : use_estimates_(use_estimates), mode_(mode) {}

    void on_arrival(double t, const core::Job& job) override {
        advance_and_refresh(t);
        JobInfo info;
        info.view_size = use_estimates_ ? job.estimated_size : job.size;
        info.arrival = job.arrival;
        jobs_.emplace(job.id, info);
        attained_.track(job.id);
        heap_.push(Entry{info.view_size, info.arrival, job.id, 0});
        post_event();
    }

    void on_real_completion(double t, core::JobId id) override {
        advance_and_refresh(t);
        auto& info = jobs_.at(id);
        if (info.late) {
            late_.erase(id);
            if (mode_ == LateMode::Las) pool_.remove(id);
            if (late_.empty()) clear_pool();
        } else {
            // only the head among non-late jobs ever holds a share
            if (!has_head_ || head_ != id)
                throw core::ContractViolation("srpt: completion of an unserved job");
            if (mode_ == LateMode::Las && pool_.contains(id)) pool_.remove(id);
            has_head_ = false;
            if (pool_head_ && *pool_head_ == id) pool_head_.reset();
        }
        info.alive = false;
        ++info.stamp;  // invalidate any heap entries
        attained_.forget(id);
        post_event();
    }

    [[nodiscard]] std::optional<double> next_internal_event() const override {
        if (mode_ == LateMode::None) return std::nullopt;
        std::optional<double> next = crossing_time();
        if (mode_ == LateMode::Las && !late_.empty()) {
            if (auto merge = pool_.next_catch_up(last_t_))
                if (!next || *merge < *next) next = merge;
        }
        return next;
    }

    void on_internal_event(double t) override {
        const auto crossing = crossing_time();
        const auto merge = (mode_ == LateMode::Las && !late_.empty())
                               ? pool_.next_catch_up(last_t_)
                               : std::nullopt;
        const std::size_t groups_before = pool_.group_count();
        advance_and_refresh(t);
        if (crossing && (!merge || *crossing <= *merge)) {
            make_head_late();
        } else if (pool_.group_count() == groups_before && groups_before >= 2) {
            // serve() during the advance normally merges; if the time step
            // underflowed, the announced catch-up is still due now
            pool_.force_catch_up();
        }
        post_event();
    }

    [[nodiscard]] core::Allocation current_allocation() const override {
        core::Allocation alloc;
        if (late_.empty()) {
            if (has_head_) alloc.add(head_, 1.0);
            return alloc;
        }
        if (mode_ == LateMode::Ps || mode_ == LateMode::None) {
            // None never reaches here (late_ stays empty in plain mode)
            const std::size_t k = late_.size() + (has_head_ ? 1 : 0);
            const double share = 1.0 / static_cast<double>(k);
            bool head_added = false;
            for (core::JobId id : late_) {
                if (has_head_ && head_ < id && !head_added) {
                    alloc.add(head_, share);
                    head_added = true;
                }
                alloc.add(id, share);
            }
            if (has_head_ && !head_added) alloc.add(head_, share);
            return alloc;
        }
        return pool_.allocation();
    }

    [[nodiscard]] std::string name() const override {
        std::string base = use_estimates_ ? "srpte" : "srpt";
        if (mode_ == LateMode::Ps) base += "+ps";
        if (mode_ == LateMode::Las) base += "+las";
        return base;
    }

    /// Late ids, exposed for tests of the late-set semantics.
    [[nodiscard]] const std::set<core::JobId>& late_set() const { return late_; }

private:
    struct JobInfo {
        double view_size = 0.0;  // estimate, or true size for clairvoyant SRPT
        double arrival = 0.0;
        std::uint64_t stamp = 0;
        bool alive = true;
        bool late = false;
    };

    struct Entry {
        double key;  // estimated remaining at push time
        double arrival;
        core::JobId id;
        std::uint64_t stamp;
    };

    struct EntryLess {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.key != b.key) return a.key < b.key;
            if (a.arrival != b.arrival) return a.arrival < b.arrival;
            return a.id < b.id;
        }
    };

    [[nodiscard]] double est_remaining(core::JobId id) const {
        return jobs_.at(id).view_size - attained_.of(id);
    }

    // Relative-only: an absolute floor would misclassify freshly arrived
    // jobs with very small estimates as already late.
    static double cross_tolerance(double view_size) { return 1e-9 * view_size; }

    // Advance the attained mirror along the allocation in force since the
    // last event, then refresh the head's heap key (the only non-late key
    // that can have drifted).
    void advance_and_refresh(double t) {
        attained_.advance(t, current_allocation());
        if (mode_ == LateMode::Las && !late_.empty() && t > last_t_)
            pool_.serve(t - last_t_);
        last_t_ = t;
        if (has_head_) {
            auto& info = jobs_.at(head_);
            ++info.stamp;
            heap_.push(Entry{est_remaining(head_), info.arrival, head_, info.stamp});
        }
    }

    void make_head_late() {
        if (!has_head_) return;
        const core::JobId id = head_;
        auto& info = jobs_.at(id);
        info.late = true;
        ++info.stamp;  // drop from the non-late heap
        const bool pool_was_active = !late_.empty();
        late_.insert(id);
        has_head_ = false;
        if (mode_ == LateMode::Las) {
            if (!pool_was_active) {
                // first late job: the pool springs into existence
                pool_.insert(id, attained_.of(id));
            } else if (pool_.contains(id)) {
                // was the pool's non-late member; it simply changes role
                if (pool_head_ && *pool_head_ == id) pool_head_.reset();
            } else {
                pool_.insert(id, attained_.of(id));
            }
        }
    }

    void clear_pool() {
        if (mode_ != LateMode::Las) return;
        if (pool_head_) {
            pool_.remove(*pool_head_);
            pool_head_.reset();
        }
    }

    // Pop stale entries until the top is a live, current, non-late job.
    void recompute_head() {
        has_head_ = false;
        while (!heap_.empty()) {
            const Entry& top = heap_.top();
            auto it = jobs_.find(top.id);
            if (it == jobs_.end() || !it->second.alive || it->second.late ||
                it->second.stamp != top.stamp) {
                heap_.pop();
                continue;
            }
            head_ = top.id;
            has_head_ = true;
            return;
        }
    }

    void post_event() {
        recompute_head();
        if (mode_ != LateMode::None) {
            // a head whose estimate is already exhausted is late immediately
            while (has_head_ &&
                   est_remaining(head_) <= cross_tolerance(jobs_.at(head_).view_size)) {
                make_head_late();
                recompute_head();
            }
        }
        if (mode_ == LateMode::Las) sync_pool_head();
    }

    // Keep the pool's non-late member equal to the current head.
    void sync_pool_head() {
        if (late_.empty()) return;
        if (pool_head_ && (!has_head_ || *pool_head_ != head_)) {
            pool_.remove(*pool_head_);
            pool_head_.reset();
        }
        if (has_head_ && !pool_head_) {
            pool_.insert(head_, attained_.of(head_));
            pool_head_ = head_;
        }
    }

    // Instant at which the head's estimated remaining reaches zero under
    // the current rates; nothing when the head is unserved.
    [[nodiscard]] std::optional<double> crossing_time() const {
        if (!has_head_) return std::nullopt;
        const double share = current_allocation().share_of(head_);
        if (!(share > 0.0)) return std::nullopt;
        const double rem = est_remaining(head_);
        return last_t_ + (rem > 0.0 ? rem : 0.0) / share;
    }

    bool use_estimates_;
    LateMode mode_;
    std::unordered_map<core::JobId, JobInfo> jobs_;
    core::BinaryMinHeap<Entry, EntryLess> heap_;
    std::set<core::JobId> late_;
    LasCore pool_;  // eligible set when late jobs exist (LAS mode)
    std::optional<core::JobId> pool_head_;
    AttainedMirror attained_;
    double last_t_ = 0.0;
    core::JobId head_ = 0;
    bool has_head_ = false;
};

} // namespace schedsim::algo
