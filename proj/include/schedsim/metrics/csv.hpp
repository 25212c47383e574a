#pragma once

#include <schedsim/core/types.hpp>
#include <schedsim/metrics/metrics.hpp>

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace schedsim::metrics {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// `job_id,arrival,size,estimate,weight,completion,sojourn,slowdown`
/// Records must be ordered like `jobs` (both by job id).
inline void write_jobs_csv(std::ostream& out, std::span<const core::Job> jobs,
                           std::span<const core::CompletionRecord> records) {
    out << "job_id,arrival,size,estimate,weight,completion,sojourn,slowdown\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& job = jobs[i];
        const auto& rec = records[i];
        out << rec.job_id << ',' << fmt(job.arrival) << ',' << fmt(job.size) << ','
            << fmt(job.estimated_size) << ',' << fmt(job.weight) << ','
            << fmt(rec.completion) << ',' << fmt(rec.sojourn) << ','
            << fmt(rec.slowdown) << '\n';
    }
}

inline void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> points) {
    out << "slowdown,fraction\n";
    for (const auto& p : points)
        out << fmt(p.slowdown) << ',' << fmt(p.fraction) << '\n';
}

inline void write_bins_csv(std::ostream& out, std::span<const SlowdownBin> bins) {
    out << "bin,mean_size,mean_slowdown,count\n";
    for (std::size_t i = 0; i < bins.size(); ++i)
        out << i << ',' << fmt(bins[i].mean_size) << ',' << fmt(bins[i].mean_slowdown)
            << ',' << bins[i].count << '\n';
}

/// One sweep-summary row (long format; one row per cell x scheduler).
struct SummaryRow {
    double shape = 0.0;
    double sigma = 0.0;
    std::string scheduler;
    double mst = 0.0;
    double mst_ratio_ps = 0.0;    // NaN when ps was not part of the run
    double mst_ratio_srpt = 0.0;  // NaN when srpt was not part of the run
    double ci_half_width = 0.0;
    std::size_t n_runs = 0;
    // extra context for sweeps over the remaining parameters
    double load = 0.0;
    double timeshape = 0.0;
    std::size_t njobs = 0;
    double beta = 0.0;
    bool converged = false;
};

inline void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "shape,sigma,scheduler,mst,mst_ratio_ps,mst_ratio_srpt,ci_half_width,"
           "n_runs,load,timeshape,njobs,beta,converged\n";
    for (const auto& row : rows) {
        out << fmt(row.shape) << ',' << fmt(row.sigma) << ',' << row.scheduler << ','
            << fmt(row.mst) << ',' << fmt(row.mst_ratio_ps) << ','
            << fmt(row.mst_ratio_srpt) << ',' << fmt(row.ci_half_width) << ','
            << row.n_runs << ',' << fmt(row.load) << ',' << fmt(row.timeshape) << ','
            << row.njobs << ',' << fmt(row.beta) << ',' << (row.converged ? 1 : 0)
            << '\n';
    }
}

/// Per-class MST rows for the weighted experiments.
struct ClassMstRow {
    double shape = 0.0;
    double beta = 0.0;
    std::string scheduler;
    int weight_class = 0;
    double mst = 0.0;
    double ci_half_width = 0.0;
    std::size_t n_runs = 0;
};

inline void write_class_mst_csv(std::ostream& out, std::span<const ClassMstRow> rows) {
    out << "shape,beta,scheduler,class,mst,ci_half_width,n_runs\n";
    for (const auto& row : rows)
        out << fmt(row.shape) << ',' << fmt(row.beta) << ',' << row.scheduler << ','
            << row.weight_class << ',' << fmt(row.mst) << ','
            << fmt(row.ci_half_width) << ',' << row.n_runs << '\n';
}

} // namespace schedsim::metrics
