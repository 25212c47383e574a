#pragma once

#include <schedsim/algo/policies.hpp>
#include <schedsim/core/engine.hpp>
#include <schedsim/exp/config.hpp>
#include <schedsim/exp/parallel.hpp>
#include <schedsim/gen/trace.hpp>
#include <schedsim/gen/workload.hpp>
#include <schedsim/metrics/metrics.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace schedsim::exp {

/// Run one workload under one policy.
inline std::vector<core::CompletionRecord>
simulate(std::span<const core::Job> jobs, const std::string& policy,
         core::HeapCounters* counters = nullptr, core::RunStats* stats = nullptr) {
    auto scheduler = algo::make_scheduler(policy, counters);
    return core::run_simulation(jobs, *scheduler, stats);
}

/// Seed of one repetition: cells and repetitions get disjoint, stable seeds
/// regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t cell_index,
                                 std::size_t max_runs, std::size_t run_index) {
    return base_seed + cell_index * max_runs + run_index;
}

struct SchedulerOutcome {
    std::string scheduler;
    std::vector<double> per_run_mst;  // indexed by run
    metrics::SummaryStat mst_stat;
    bool converged = false;
    // pooled per-job records across runs (only when records were collected)
    std::vector<core::CompletionRecord> pooled_records;
    // per weight class, one MST value per run (only for weighted workloads)
    std::map<int, std::vector<double>> per_class_mst_runs;
};

struct CellResult {
    ExperimentConfig config;
    std::size_t cell_index = 0;
    std::vector<std::uint64_t> seeds;  // seed of each executed run
    std::vector<SchedulerOutcome> outcomes;
    bool all_converged = false;
    double wall_seconds = 0.0;

    [[nodiscard]] const SchedulerOutcome* outcome_of(const std::string& name) const {
        for (const auto& outcome : outcomes)
            if (outcome.scheduler == name) return &outcome;
        return nullptr;
    }

    /// Ratio of mean MSTs against a reference scheduler in the same cell;
    /// NaN when the reference was not part of the run.
    [[nodiscard]] double mst_ratio_vs(const std::string& policy,
                                      const std::string& reference) const {
        const auto* p = outcome_of(policy);
        const auto* r = outcome_of(reference);
        if (!p || !r || r->mst_stat.mean == 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        return p->mst_stat.mean / r->mst_stat.mean;
    }
};

struct RunOptions {
    unsigned threads = default_thread_count();
    bool collect_records = false;  // pool per-job records for ECDF / bins
    std::size_t cell_index = 0;    // offset for seed derivation
};

/// Workload used by one repetition, given that repetition's seed.
using WorkloadProvider = std::function<gen::Workload(std::uint64_t seed)>;

namespace detail {

struct RunSlot {
    std::vector<double> msts;                           // per scheduler
    std::vector<std::vector<core::CompletionRecord>> records;  // per scheduler
    std::vector<std::map<int, double>> class_msts;      // per scheduler
};

} // namespace detail

/// @brief Execute repetitions of one experiment cell under the stopping
/// rule.
///
/// Every scheduler in the cell sees the identical workload realization of
/// each repetition, so ratios are paired. Repetitions run in parallel;
/// results are reduced in run order, so the outcome is independent of
/// thread scheduling. Runs are added in batches until every scheduler's
/// MST confidence interval converges or max_runs is reached.
inline CellResult run_cell_with(const WorkloadProvider& provider,
                                const ExperimentConfig& config,
                                const RunOptions& options = {}) {
    if (config.schedulers.empty())
        throw core::ValidationError("no schedulers requested");
    if (config.reps.max_runs < config.reps.min_runs)
        throw core::ValidationError("max_runs must be >= min_runs");

    const auto start = std::chrono::steady_clock::now();
    const std::size_t n_sched = config.schedulers.size();
    std::vector<detail::RunSlot> slots;
    std::vector<std::uint64_t> seeds;

    bool all_converged = false;
    std::size_t done = 0;
    while (done < config.reps.max_runs && !all_converged) {
        std::size_t target = done == 0 ? config.reps.min_runs
                                       : done + std::max<std::size_t>(options.threads, 8);
        if (target > config.reps.max_runs) target = config.reps.max_runs;
        slots.resize(target);
        seeds.resize(target);
        for (std::size_t r = done; r < target; ++r)
            seeds[r] = derive_seed(config.workload.seed, options.cell_index,
                                   config.reps.max_runs, r);

        parallel_for(done, target, options.threads, [&](std::size_t r) {
            const gen::Workload workload = provider(seeds[r]);
            detail::RunSlot& slot = slots[r];
            slot.msts.resize(n_sched);
            slot.records.resize(options.collect_records ? n_sched : 0);
            slot.class_msts.resize(n_sched);
            std::map<core::JobId, int> labels;
            const bool weighted = !workload.weight_classes.empty();
            if (weighted)
                for (std::size_t i = 0; i < workload.weight_classes.size(); ++i)
                    labels.emplace(workload.jobs[i].id, workload.weight_classes[i]);
            for (std::size_t s = 0; s < n_sched; ++s) {
                auto records = simulate(workload.jobs, config.schedulers[s]);
                slot.msts[s] = metrics::mst(records);
                if (weighted) {
                    for (const auto& [cls, stat] : metrics::per_class_mst(records, labels))
                        slot.class_msts[s][cls] = stat.mean;
                }
                if (options.collect_records) slot.records[s] = std::move(records);
            }
        });
        done = target;

        all_converged = true;
        for (std::size_t s = 0; s < n_sched; ++s) {
            std::vector<double> msts;
            msts.reserve(done);
            for (std::size_t r = 0; r < done; ++r) msts.push_back(slots[r].msts[s]);
            const auto agg = metrics::aggregate_runs(msts, config.reps.target_rel_hw,
                                                     config.reps.min_runs);
            if (!agg.converged) all_converged = false;
        }
    }

    CellResult result;
    result.config = config;
    result.cell_index = options.cell_index;
    result.seeds = std::move(seeds);
    result.all_converged = all_converged;
    for (std::size_t s = 0; s < n_sched; ++s) {
        SchedulerOutcome outcome;
        outcome.scheduler = config.schedulers[s];
        outcome.per_run_mst.reserve(done);
        for (std::size_t r = 0; r < done; ++r) {
            outcome.per_run_mst.push_back(slots[r].msts[s]);
            for (const auto& [cls, value] : slots[r].class_msts[s])
                outcome.per_class_mst_runs[cls].push_back(value);
            if (options.collect_records)
                outcome.pooled_records.insert(outcome.pooled_records.end(),
                                              slots[r].records[s].begin(),
                                              slots[r].records[s].end());
        }
        const auto agg = metrics::aggregate_runs(
            outcome.per_run_mst, config.reps.target_rel_hw, config.reps.min_runs);
        outcome.mst_stat = agg.stat;
        outcome.converged = agg.converged;
        result.outcomes.push_back(std::move(outcome));
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Synthetic-workload cell: the repetition seed replaces the spec seed.
inline CellResult run_cell(const ExperimentConfig& config, const RunOptions& options = {}) {
    gen::WorkloadSpec base = config.workload;
    return run_cell_with(
        [base](std::uint64_t seed) {
            gen::WorkloadSpec spec = base;
            spec.seed = seed;
            return gen::make_workload(spec);
        },
        config, options);
}

struct SweepResult {
    std::vector<CellResult> cells;        // successful cells, in plan order
    std::vector<std::size_t> failed;      // indices of failed cells
    std::vector<std::string> errors;      // matching error messages
    [[nodiscard]] bool any_failed() const { return !failed.empty(); }
    [[nodiscard]] bool all_converged() const {
        for (const auto& cell : cells)
            if (!cell.all_converged) return false;
        return true;
    }
};

/// Execute a list of cells; a failing cell is flagged and skipped, the
/// sweep carries on.
inline SweepResult sweep(const std::vector<ExperimentConfig>& plan,
                         const RunOptions& options = {}) {
    SweepResult result;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        RunOptions cell_options = options;
        cell_options.cell_index = i;
        try {
            result.cells.push_back(run_cell(plan[i], cell_options));
        } catch (const std::exception& e) {
            result.failed.push_back(i);
            result.errors.emplace_back(e.what());
        }
    }
    return result;
}

/// @brief Trace replay across error levels.
///
/// The trace is normalized once to the target load; each repetition applies
/// a fresh log-normal error draw to the same arrivals and sizes, and every
/// scheduler in a repetition sees the identical jobs.
inline std::vector<std::pair<double, CellResult>>
replay(const std::vector<core::Job>& base_jobs, const std::vector<double>& sigmas,
       const ExperimentConfig& config, const RunOptions& options = {}) {
    std::vector<std::pair<double, CellResult>> out;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double sigma = sigmas[i];
        ExperimentConfig cell_config = config;
        cell_config.workload.sigma = sigma;
        RunOptions cell_options = options;
        cell_options.cell_index = i;
        auto provider = [&base_jobs, sigma](std::uint64_t seed) {
            gen::Workload workload;
            workload.jobs = base_jobs;
            gen::Rng rng(seed, gen::Stream::Errors);
            for (auto& job : workload.jobs) {
                const double z = rng.normal();
                job.estimated_size =
                    sigma == 0.0 ? job.size : job.size * std::exp(sigma * z);
            }
            return workload;
        };
        out.emplace_back(sigma, run_cell_with(provider, cell_config, cell_options));
    }
    return out;
}

inline nlohmann::json to_json(const CellResult& result) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& outcome : result.outcomes) {
        outcomes.push_back({
            {"scheduler", outcome.scheduler},
            {"mst", outcome.mst_stat.mean},
            {"ci_half_width", outcome.mst_stat.ci_half_width},
            {"relative_half_width", outcome.mst_stat.relative_half_width},
            {"n_runs", outcome.mst_stat.n},
            {"converged", outcome.converged},
        });
    }
    return {
        {"config", to_json(result.config)},
        {"cell_index", result.cell_index},
        {"seeds", result.seeds},
        {"outcomes", outcomes},
        {"all_converged", result.all_converged},
        {"wall_seconds", result.wall_seconds},
    };
}

} // namespace schedsim::exp
