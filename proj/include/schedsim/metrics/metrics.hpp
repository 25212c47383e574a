#pragma once

#include <schedsim/core/types.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace schedsim::metrics {

/// Mean plus a 95% normal-approximation confidence interval over n values.
struct SummaryStat {
    double mean = 0.0;
    std::size_t n = 0;
    double ci_half_width = 0.0;
    double relative_half_width = 0.0;
};

/// z-interval at 95%; t would differ only below the enforced 30-run floor.
inline constexpr double kZ95 = 1.96;

inline SummaryStat summarize(std::span<const double> values) {
    SummaryStat stat;
    stat.n = values.size();
    if (stat.n == 0) throw core::ValidationError("cannot summarize zero values");
    stat.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                static_cast<double>(stat.n);
    if (stat.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - stat.mean) * (v - stat.mean);
        const double sd = std::sqrt(ss / static_cast<double>(stat.n - 1));
        stat.ci_half_width = kZ95 * sd / std::sqrt(static_cast<double>(stat.n));
    }
    stat.relative_half_width =
        stat.mean != 0.0 ? stat.ci_half_width / std::abs(stat.mean) : 0.0;
    return stat;
}

/// Mean sojourn time.
inline double mst(std::span<const core::CompletionRecord> records) {
    if (records.empty()) throw core::ValidationError("mst of empty record set");
    double sum = 0.0;
    for (const auto& rec : records) sum += rec.sojourn;
    return sum / static_cast<double>(records.size());
}

/// MST of a policy divided by MST of a reference run over the same jobs.
inline double mst_ratio(std::span<const core::CompletionRecord> policy,
                        std::span<const core::CompletionRecord> reference) {
    if (policy.size() != reference.size())
        throw core::ValidationError("mst_ratio: record sets differ in size");
    for (std::size_t i = 0; i < policy.size(); ++i)
        if (policy[i].job_id != reference[i].job_id)
            throw core::ValidationError("mst_ratio: record sets cover different jobs");
    return mst(policy) / mst(reference);
}

/// Sample points of the empirical CDF of per-job slowdown.
struct EcdfPoint {
    double slowdown;
    double fraction;  // P(slowdown <= x)
};

inline std::vector<EcdfPoint> slowdown_ecdf(std::span<const core::CompletionRecord> records) {
    if (records.empty()) throw core::ValidationError("ecdf of empty record set");
    std::vector<double> slowdowns;
    slowdowns.reserve(records.size());
    for (const auto& rec : records) slowdowns.push_back(rec.slowdown);
    std::sort(slowdowns.begin(), slowdowns.end());
    std::vector<EcdfPoint> points;
    points.reserve(slowdowns.size());
    const double n = static_cast<double>(slowdowns.size());
    for (std::size_t i = 0; i < slowdowns.size(); ++i)
        points.push_back({slowdowns[i], static_cast<double>(i + 1) / n});
    return points;
}

/// Fraction of jobs with slowdown strictly above `threshold`.
inline double tail_fraction(std::span<const core::CompletionRecord> records,
                            double threshold) {
    if (records.empty()) throw core::ValidationError("tail fraction of empty record set");
    std::size_t count = 0;
    for (const auto& rec : records)
        if (rec.slowdown > threshold) ++count;
    return static_cast<double>(count) / static_cast<double>(records.size());
}

struct SlowdownBin {
    double mean_size = 0.0;
    double mean_slowdown = 0.0;
    std::size_t count = 0;
};

/// @brief Mean conditional slowdown over equal-count size bins.
///
/// Jobs are sorted by size and split into `bins` classes of equal count;
/// remainder jobs go to the largest-size bins, deterministically. Each bin
/// reports its mean size and mean slowdown.
inline std::vector<SlowdownBin>
conditional_slowdown(std::span<const core::CompletionRecord> records,
                     std::size_t bins = 100) {
    if (records.size() < bins)
        throw core::ValidationError("conditional slowdown needs at least one job per bin");
    std::vector<const core::CompletionRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& rec : records) sorted.push_back(&rec);
    std::sort(sorted.begin(), sorted.end(),
              [](const core::CompletionRecord* a, const core::CompletionRecord* b) {
                  if (a->size != b->size) return a->size < b->size;
                  return a->job_id < b->job_id;
              });
    const std::size_t base = sorted.size() / bins;
    const std::size_t remainder = sorted.size() % bins;
    std::vector<SlowdownBin> out;
    out.reserve(bins);
    std::size_t index = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        // the last `remainder` bins hold one extra job each
        const std::size_t count = base + (b >= bins - remainder ? 1 : 0);
        SlowdownBin bin;
        bin.count = count;
        for (std::size_t i = 0; i < count; ++i, ++index) {
            bin.mean_size += sorted[index]->size;
            bin.mean_slowdown += sorted[index]->slowdown;
        }
        bin.mean_size /= static_cast<double>(count);
        bin.mean_slowdown /= static_cast<double>(count);
        out.push_back(bin);
    }
    return out;
}

/// Result of pooling per-run values under the stopping rule.
struct Aggregate {
    SummaryStat stat;
    bool converged = false;
};

/// @brief 95% confidence interval with the repetition stopping rule.
///
/// Converged once at least `min_runs` values are in and the relative
/// half-width is at or below `target_rel_hw`; the caller keeps adding runs
/// until convergence or its own cap.
inline Aggregate aggregate_runs(std::span<const double> values,
                                double target_rel_hw = 0.05,
                                std::size_t min_runs = 30) {
    Aggregate agg;
    agg.stat = summarize(values);
    agg.converged =
        values.size() >= min_runs && agg.stat.relative_half_width <= target_rel_hw;
    return agg;
}

/// MST restricted to each weight class. `class_of` maps job id to label;
/// every record's job must be labeled.
inline std::map<int, SummaryStat>
per_class_mst(std::span<const core::CompletionRecord> records,
              const std::map<core::JobId, int>& class_of) {
    std::map<int, std::vector<double>> sojourns;
    for (const auto& rec : records) {
        auto it = class_of.find(rec.job_id);
        if (it == class_of.end())
            throw core::ValidationError("per_class_mst: unlabeled job " +
                                        std::to_string(rec.job_id));
        sojourns[it->second].push_back(rec.sojourn);
    }
    std::map<int, SummaryStat> out;
    for (auto& [cls, values] : sojourns) out.emplace(cls, summarize(values));
    return out;
}

} // namespace schedsim::metrics
