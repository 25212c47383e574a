#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace schedsim::core {

/// Counters for heap work, shared between heaps of one scheduler so that
/// algorithmic cost can be measured independently of wall clock.
struct HeapCounters {
    std::uint64_t pushes = 0;
    std::uint64_t pops = 0;
    std::uint64_t sift_steps = 0;  // comparisons performed while sifting

    [[nodiscard]] std::uint64_t total_ops() const {
        return pushes + pops + sift_steps;
    }
};

/// @brief Array-backed binary min-heap with optional operation counting.
///
/// Entries are immutable once pushed; there is no decrease-key. `Compare`
/// is a strict weak ordering (a "less than" for the min-heap).
template <typename T, typename Compare>
class BinaryMinHeap {
public:
    explicit BinaryMinHeap(Compare cmp = Compare{}, HeapCounters* counters = nullptr)
        : cmp_(std::move(cmp)), counters_(counters) {}

    [[nodiscard]] bool empty() const { return data_.empty(); }
    [[nodiscard]] std::size_t size() const { return data_.size(); }
    [[nodiscard]] const T& top() const { return data_.front(); }

    void push(T value) {
        data_.push_back(std::move(value));
        if (counters_) ++counters_->pushes;
        sift_up(data_.size() - 1);
    }

    T pop() {
        T out = std::move(data_.front());
        if (counters_) ++counters_->pops;
        data_.front() = std::move(data_.back());
        data_.pop_back();
        if (!data_.empty()) sift_down(0);
        return out;
    }

    /// Read-only view of the backing array (used by invariant checks).
    [[nodiscard]] const std::vector<T>& raw() const { return data_; }

private:
    void sift_up(std::size_t i) {
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (counters_) ++counters_->sift_steps;
            if (!cmp_(data_[i], data_[parent])) break;
            std::swap(data_[i], data_[parent]);
            i = parent;
        }
    }

    void sift_down(std::size_t i) {
        const std::size_t n = data_.size();
        for (;;) {
            std::size_t left = 2 * i + 1;
            if (left >= n) break;
            std::size_t right = left + 1;
            if (counters_) ++counters_->sift_steps;
            std::size_t smallest = left;
            if (right < n && cmp_(data_[right], data_[left])) smallest = right;
            if (!cmp_(data_[smallest], data_[i])) break;
            std::swap(data_[i], data_[smallest]);
            i = smallest;
        }
    }

    std::vector<T> data_;
    Compare cmp_;
    HeapCounters* counters_;
};

} // namespace schedsim::core
