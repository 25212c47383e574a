#pragma once

#include <schedsim/core/types.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace schedsim::algo {

/// @brief Least-attained-service bookkeeping over an arbitrary member set.
///
/// Members are grouped by attained service level; the group with the least
/// attained service is served, all of its members with equal shares. While
/// served, the group's level rises at rate 1/m; when it reaches the next
/// distinct level the two groups merge (an internal catch-up event), so the
/// served set grows between arrivals without dense re-evaluation.
///
/// Used both as the standalone LAS policy and to schedule the eligible set
/// of the SRPTE+LAS / FSPE+LAS hybrids, where members join and leave with
/// their lifetime attained service.
class LasCore {
public:
    [[nodiscard]] bool empty() const { return groups_.empty(); }

    void insert(core::JobId id, double attained) {
        auto it = find_group(attained);
        if (it == groups_.end()) it = groups_.emplace(attained, std::set<core::JobId>{}).first;
        it->second.insert(id);
        level_of_[id] = it->first;
    }

    void remove(core::JobId id) {
        auto lv = level_of_.find(id);
        if (lv == level_of_.end()) return;
        auto it = groups_.find(lv->second);
        it->second.erase(id);
        if (it->second.empty()) groups_.erase(it);
        level_of_.erase(lv);
    }

    [[nodiscard]] bool contains(core::JobId id) const { return level_of_.count(id) != 0; }

    [[nodiscard]] double attained_of(core::JobId id) const { return level_of_.at(id); }

    /// Advance the served group by dt time units of service.
    void serve(double dt) {
        if (groups_.empty() || dt <= 0.0) return;
        auto first = groups_.begin();
        const double new_level = first->first + dt / static_cast<double>(first->second.size());
        auto members = std::move(first->second);
        groups_.erase(first);
        auto target = find_group(new_level);
        if (target == groups_.end())
            target = groups_.emplace(new_level, std::set<core::JobId>{}).first;
        target->second.merge(members);
        for (core::JobId id : target->second) level_of_[id] = target->first;
    }

    [[nodiscard]] std::size_t group_count() const { return groups_.size(); }

    /// Merge the served group into the next one regardless of the gap.
    /// Only called when a catch-up event fired but the time step was too
    /// small to move the level across the gap (float underflow at large t).
    void force_catch_up() {
        if (groups_.size() < 2) return;
        auto first = groups_.begin();
        auto members = std::move(first->second);
        groups_.erase(first);
        auto target = groups_.begin();
        target->second.merge(members);
        for (core::JobId id : target->second) level_of_[id] = target->first;
    }

    /// Time from `now` until the served group catches the next distinct
    /// level; nothing if fewer than two groups exist.
    [[nodiscard]] std::optional<double> next_catch_up(double now) const {
        if (groups_.size() < 2) return std::nullopt;
        auto first = groups_.begin();
        auto second = std::next(first);
        const double gap = second->first - first->first;
        return now + gap * static_cast<double>(first->second.size());
    }

    /// Equal shares over the least-attained group.
    [[nodiscard]] core::Allocation allocation() const {
        core::Allocation alloc;
        if (groups_.empty()) return alloc;
        const auto& served = groups_.begin()->second;
        const double share = 1.0 / static_cast<double>(served.size());
        for (core::JobId id : served) alloc.add(id, share);
        return alloc;
    }

private:
    static double merge_tolerance(double level) {
        return 1e-9 * (std::abs(level) > 1.0 ? std::abs(level) : 1.0);
    }

    // Find an existing group whose level matches within tolerance.
    std::map<double, std::set<core::JobId>>::iterator find_group(double level) {
        auto it = groups_.lower_bound(level);
        if (it != groups_.end() && it->first - level <= merge_tolerance(level)) return it;
        if (it != groups_.begin()) {
            auto prev = std::prev(it);
            if (level - prev->first <= merge_tolerance(level)) return prev;
        }
        return groups_.end();
    }

    std::map<double, std::set<core::JobId>> groups_;
    std::unordered_map<core::JobId, double> level_of_;
};

} // namespace schedsim::algo
