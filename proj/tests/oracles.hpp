// Test-only reference implementations and instance generators. These stay
// deliberately independent of the library's scheduler implementations: the
// virtual-system oracle is a direct O(n^2) emulation, and expected values in
// the test files were computed from these (or by hand event traces) first.
#pragma once

#include <schedsim/core/engine.hpp>
#include <schedsim/core/types.hpp>
#include <schedsim/exp/runner.hpp>
#include <schedsim/gen/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace oracles {

using schedsim::core::CompletionRecord;
using schedsim::core::Job;
using schedsim::core::JobId;

struct VirtualCompletion {
    JobId id;
    double time;
};

/// Brute-force emulation of a (weighted) processor-sharing system over the
/// jobs' estimated sizes: every active job drains at rate w_i / W. Returns
/// the virtual completions in chronological order.
inline std::vector<VirtualCompletion>
dps_virtual_schedule(std::span<const Job> jobs, bool use_weights) {
    struct Active {
        double remaining;
        double weight;
    };
    std::map<JobId, Active> active;
    std::vector<VirtualCompletion> out;
    std::size_t next = 0;
    double now = jobs.empty() ? 0.0 : jobs.front().arrival;
    const double inf = std::numeric_limits<double>::infinity();

    while (next < jobs.size() || !active.empty()) {
        double total_weight = 0.0;
        for (const auto& [id, a] : active) total_weight += a.weight;

        double t_completion = inf;
        JobId completer = 0;
        for (const auto& [id, a] : active) {
            const double t = now + a.remaining * total_weight / a.weight;
            if (t < t_completion) {
                t_completion = t;
                completer = id;
            }
        }
        const double t_arrival = next < jobs.size() ? jobs[next].arrival : inf;

        if (t_completion <= t_arrival) {
            const double dt = t_completion - now;
            for (auto& [id, a] : active) a.remaining -= dt * a.weight / total_weight;
            active.erase(completer);
            out.push_back({completer, t_completion});
            now = t_completion;
        } else {
            if (total_weight > 0.0) {
                const double dt = t_arrival - now;
                for (auto& [id, a] : active) a.remaining -= dt * a.weight / total_weight;
            }
            const Job& job = jobs[next++];
            active.emplace(job.id,
                           Active{job.estimated_size, use_weights ? job.weight : 1.0});
            now = t_arrival;
        }
    }
    return out;
}

struct InstanceOptions {
    std::size_t max_jobs = 30;
    double sigma = 0.0;      // 0 = exact sizes
    bool weighted = false;   // random weights from 5 classes, beta = 1
    double mean_gap = 1.0;
};

/// Small random scheduling instance with overlapping busy periods: sizes
/// are log-normal around 1, arrivals come from an exponential clock.
inline std::vector<Job> random_instance(std::uint64_t seed, const InstanceOptions& opt = {}) {
    schedsim::gen::Rng rng(seed, schedsim::gen::Stream::Sizes);
    schedsim::gen::Rng error_rng(seed, schedsim::gen::Stream::Errors);
    const std::size_t n =
        1 + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(opt.max_jobs));
    std::vector<Job> jobs;
    jobs.reserve(n);
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t += -std::log(rng.uniform01()) * opt.mean_gap;
        Job job;
        job.id = static_cast<JobId>(i);
        job.arrival = t;
        job.size = std::exp(1.2 * rng.normal());
        job.estimated_size =
            opt.sigma == 0.0 ? job.size : job.size * std::exp(opt.sigma * error_rng.normal());
        if (opt.weighted) {
            const int cls = 1 + static_cast<int>(rng.uniform01() * 5.0);
            job.weight = 1.0 / static_cast<double>(cls > 5 ? 5 : cls);
        }
        jobs.push_back(job);
    }
    return jobs;
}

inline std::map<JobId, double> completions_of(std::span<const CompletionRecord> records) {
    std::map<JobId, double> out;
    for (const auto& rec : records) out.emplace(rec.job_id, rec.completion);
    return out;
}

inline std::vector<CompletionRecord> run_policy(std::span<const Job> jobs,
                                                const std::string& name) {
    return schedsim::exp::simulate(jobs, name);
}

/// Completion-time tolerance used when comparing two float event paths.
inline double close_tolerance(double value) {
    return 1e-7 * (std::abs(value) > 1.0 ? std::abs(value) : 1.0);
}

} // namespace oracles
