#pragma once

#include <schedsim/core/heap.hpp>
#include <schedsim/core/types.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace schedsim::algo {

/// Immutable (job id, virtual lag, weight) tuple held by the heaps.
struct LagTuple {
    core::JobId id;
    double lag;     // value of g at which the job completes in virtual time
    double weight;
};

struct LagTupleLess {
    bool operator()(const LagTuple& a, const LagTuple& b) const {
        if (a.lag != b.lag) return a.lag < b.lag;
        return a.id < b.id;
    }
};

/// @brief O(log n) emulation of a weighted processor-sharing virtual system.
///
/// Instead of updating every job's virtual remaining work on each arrival,
/// the queue advances a single global progress variable, the virtual lag g,
/// at rate 1/w_v per unit of virtual time, where w_v is the total weight of
/// jobs running in the virtual system. A job arriving with (estimated) size
/// s and weight w when the lag is x completes in virtual time exactly when
/// g reaches its immutable per-job lag x + s/w, so a min-heap on per-job
/// lags yields virtual completions in order. g is monotone and unbounded
/// (it grows by at most the sum of s_i/w_i over the run, comfortably inside
/// double range at any realistic scale); no renormalization is performed.
///
/// State:
///  - open heap: jobs running in both the real and the virtual system;
///  - early heap: jobs already completed in real time but still running in
///    virtual time;
///  - late map: jobs completed in virtual time but not yet in real time,
///    with their weights (w_late = sum of those weights).
class VirtualLagQueue {
public:
    explicit VirtualLagQueue(core::HeapCounters* counters = nullptr)
        : open_(LagTupleLess{}, counters), early_(LagTupleLess{}, counters) {}

    [[nodiscard]] double lag() const { return g_; }
    [[nodiscard]] double virtual_time() const { return t_; }
    [[nodiscard]] double virtual_weight() const { return wv_; }
    [[nodiscard]] double late_weight() const { return wl_; }
    [[nodiscard]] const std::map<core::JobId, double>& late() const { return late_; }
    [[nodiscard]] bool open_empty() const { return open_.empty(); }
    [[nodiscard]] const LagTuple& open_top() const { return open_.top(); }

    /// Per-job lag of a late job (kept for the serial late discipline).
    [[nodiscard]] double late_lag_of(core::JobId id) const { return late_lags_.at(id); }

    void update_virtual_time(double t_hat) {
        if (t_hat < t_)
            throw core::ContractViolation("virtual time must not move backwards");
        if (wv_ > 0.0) g_ += (t_hat - t_) / wv_;
        t_ = t_hat;
    }

    void job_arrival(double t_hat, core::JobId id, double est_size, double weight) {
        if (!(est_size > 0.0) || !(weight > 0.0))
            throw core::ContractViolation("virtual arrival needs positive size and weight");
        update_virtual_time(t_hat);
        open_.push(LagTuple{id, g_ + est_size / weight, weight});
        wv_ += weight;
    }

    /// Instant of the next virtual completion: t + w_v * (min lag - g),
    /// over both heaps; nothing when the virtual system is empty.
    [[nodiscard]] std::optional<double> next_virtual_completion_time() const {
        if (open_.empty() && early_.empty()) return std::nullopt;
        double min_lag;
        if (open_.empty()) min_lag = early_.top().lag;
        else if (early_.empty()) min_lag = open_.top().lag;
        else min_lag = std::min(open_.top().lag, early_.top().lag);
        const double gap = min_lag - g_;
        return t_ + wv_ * (gap > 0.0 ? gap : 0.0);
    }

    /// The job with minimum lag leaves the virtual system. If it lives in
    /// the open heap it is still running in real time, so it becomes late;
    /// if it lives in the early heap it leaves silently.
    void virtual_job_completion(double t_hat) {
        if (open_.empty() && early_.empty())
            throw core::ContractViolation("virtual completion with empty virtual system");
        update_virtual_time(t_hat);
        // The completing job owns the minimum lag; comparing the two tops
        // directly (ties to the open heap) is the float-robust version of
        // the "first lag in the open heap <= g" test.
        const bool from_open =
            !open_.empty() && (early_.empty() || open_.top().lag <= early_.top().lag);
        double weight;
        if (from_open) {
            const LagTuple tuple = open_.pop();
            late_.emplace(tuple.id, tuple.weight);
            late_lags_.emplace(tuple.id, tuple.lag);
            wl_ += tuple.weight;
            weight = tuple.weight;
        } else {
            weight = early_.pop().weight;
        }
        wv_ -= weight;
        // clamp accumulated float dust: a drained system must not leave a
        // residual w_v, or g would advance at rate 1/dust across idle gaps
        if (open_.empty() && early_.empty()) wv_ = 0.0;
    }

    /// The job currently holding a positive real share finished for real.
    /// While late jobs are being served the completed job must be one of
    /// them; otherwise it is the head of the open heap and migrates to the
    /// early heap with its lag intact.
    void real_job_completion(core::JobId id) {
        if (!late_.empty()) {
            auto it = late_.find(id);
            if (it == late_.end())
                throw core::ContractViolation("real completion of job " + std::to_string(id) +
                                              " inconsistent with late set");
            wl_ -= it->second;
            late_.erase(it);
            late_lags_.erase(id);
            if (late_.empty()) wl_ = 0.0;
            return;
        }
        if (open_.empty() || open_.top().id != id)
            throw core::ContractViolation("real completion of job " + std::to_string(id) +
                                          " which is not at the head of the open heap");
        early_.push(open_.pop());
    }

    /// Recompute the weight sums from scratch and compare with the running
    /// values; used as a debug assertion by tests after every event.
    [[nodiscard]] bool weights_consistent() const {
        double wv = 0.0;
        for (const auto& tuple : open_.raw()) wv += tuple.weight;
        for (const auto& tuple : early_.raw()) wv += tuple.weight;
        double wl = 0.0;
        for (const auto& [id, w] : late_) wl += w;
        const double tol = 1e-9 * (1.0 + std::abs(wv) + std::abs(wl));
        return std::abs(wv - wv_) <= tol && std::abs(wl - wl_) <= tol;
    }

private:
    double g_ = 0.0;   // virtual lag
    double t_ = 0.0;   // virtual time
    double wv_ = 0.0;  // total weight running in the virtual system
    double wl_ = 0.0;  // total weight of late jobs
    core::BinaryMinHeap<LagTuple, LagTupleLess> open_;   // running in real & virtual
    core::BinaryMinHeap<LagTuple, LagTupleLess> early_;  // real-completed, virtually running
    std::map<core::JobId, double> late_;                 // late job id -> weight
    std::map<core::JobId, double> late_lags_;            // late job id -> lag
};

} // namespace schedsim::algo
