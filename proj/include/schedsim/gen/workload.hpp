#pragma once

#include <schedsim/core/types.hpp>
#include <schedsim/gen/rng.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace schedsim::gen {

enum class SizeFamily { Weibull, Pareto };

/// One cell of the synthetic-workload parameter space. Defaults are the
/// standard simulation parameters; anything not overridden stays at them.
struct WorkloadSpec {
    double sigma = 0.5;      // log-normal error parameter
    double shape = 0.25;     // Weibull job size shape
    double timeshape = 1.0;  // Weibull inter-arrival shape
    std::size_t njobs = 10000;
    double load = 0.9;
    std::uint64_t seed = 1;
    double weight_beta = 0.0;  // class c gets weight 1/c^beta
    int weight_classes = 5;
    SizeFamily size_family = SizeFamily::Weibull;
    double pareto_alpha = 1.0;
    double pareto_xm = 1e-12;  // strictly positive scale (see README)
};

/// Inverse-CDF Weibull draw with scale chosen for mean 1.
inline double weibull_mean1(double shape, Rng& rng) {
    const double scale = 1.0 / std::tgamma(1.0 + 1.0 / shape);
    return scale * std::pow(-std::log(rng.uniform01()), 1.0 / shape);
}

/// @brief True job sizes.
///
/// Weibull(shape) with the scale parameter set so the mean is 1, or
/// Pareto(x_m, alpha) for the heavy-tail comparison presets.
inline std::vector<double> gen_sizes(const WorkloadSpec& spec, Rng& rng) {
    if (spec.size_family == SizeFamily::Weibull && !(spec.shape > 0.0))
        throw core::ValidationError("shape must be > 0");
    if (spec.size_family == SizeFamily::Pareto &&
        (!(spec.pareto_alpha > 0.0) || !(spec.pareto_xm > 0.0)))
        throw core::ValidationError("pareto parameters must be > 0");
    std::vector<double> sizes;
    sizes.reserve(spec.njobs);
    for (std::size_t i = 0; i < spec.njobs; ++i) {
        if (spec.size_family == SizeFamily::Weibull) {
            sizes.push_back(weibull_mean1(spec.shape, rng));
        } else {
            sizes.push_back(spec.pareto_xm *
                            std::pow(rng.uniform01(), -1.0 / spec.pareto_alpha));
        }
    }
    return sizes;
}

/// @brief Inter-arrival durations.
///
/// Weibull(timeshape), scaled so the mean inter-arrival time equals
/// mean_size / load: a unit-capacity server then runs at the target load.
/// `mean_size` is 1 for the normalized Weibull family; for size families
/// without a unit mean the caller passes the sample mean instead.
inline std::vector<double> gen_inter_arrivals(const WorkloadSpec& spec, Rng& rng,
                                              double mean_size = 1.0) {
    if (!(spec.load > 0.0) || !(spec.load < 1.0))
        throw core::ValidationError("load must be in (0, 1)");
    if (!(spec.timeshape > 0.0))
        throw core::ValidationError("timeshape must be > 0");
    const double mean_gap = mean_size / spec.load;
    const double scale = mean_gap / std::tgamma(1.0 + 1.0 / spec.timeshape);
    std::vector<double> gaps;
    gaps.reserve(spec.njobs);
    for (std::size_t i = 0; i < spec.njobs; ++i)
        gaps.push_back(scale * std::pow(-std::log(rng.uniform01()), 1.0 / spec.timeshape));
    return gaps;
}

/// Multiplicative log-normal estimation error: each size s becomes
/// s * exp(sigma * Z) with Z standard normal. sigma = 0 is the identity.
inline std::vector<double> apply_error(const std::vector<double>& sizes, double sigma,
                                       Rng& rng) {
    if (sigma < 0.0) throw core::ValidationError("sigma must be >= 0");
    std::vector<double> estimates;
    estimates.reserve(sizes.size());
    for (double s : sizes) {
        const double z = rng.normal();
        estimates.push_back(sigma == 0.0 ? s : s * std::exp(sigma * z));
    }
    return estimates;
}

/// Uniform weight classes 1..classes; class c gets weight 1/c^beta, so
/// beta = 0 means uniform weights.
inline std::pair<std::vector<int>, std::vector<double>>
assign_weights(std::size_t njobs, double beta, int classes, Rng& rng) {
    if (beta < 0.0) throw core::ValidationError("beta must be >= 0");
    if (classes < 1) throw core::ValidationError("weight classes must be >= 1");
    std::vector<int> cls(njobs);
    std::vector<double> weights(njobs);
    for (std::size_t i = 0; i < njobs; ++i) {
        int c = 1 + static_cast<int>(rng.uniform01() * classes);
        if (c > classes) c = classes;
        cls[i] = c;
        weights[i] = std::pow(static_cast<double>(c), -beta);
    }
    return {std::move(cls), std::move(weights)};
}

/// A generated workload plus the weight-class labels used by the per-class
/// metrics.
struct Workload {
    std::vector<core::Job> jobs;       // sorted by arrival, ids 0..n-1
    std::vector<int> weight_classes;   // indexed by job id
};

/// @brief Build the full synthetic workload for one (spec, seed) cell.
///
/// Sizes, arrivals, errors and weights are drawn from separate sub-streams
/// of the seed, so changing sigma (or beta) redraws only that quantity and
/// sweep cells stay paired. Generation is pure: identical spec gives an
/// identical workload.
inline Workload make_workload(const WorkloadSpec& spec) {
    Rng size_rng(spec.seed, Stream::Sizes);
    Rng arrival_rng(spec.seed, Stream::Arrivals);
    Rng error_rng(spec.seed, Stream::Errors);
    Rng weight_rng(spec.seed, Stream::Weights);

    std::vector<double> sizes = gen_sizes(spec, size_rng);

    double mean_size = 1.0;  // Weibull sizes are normalized to mean 1
    if (spec.size_family == SizeFamily::Pareto) {
        double sum = 0.0;
        for (double s : sizes) sum += s;
        mean_size = sizes.empty() ? 1.0 : sum / static_cast<double>(sizes.size());
    }
    const std::vector<double> gaps = gen_inter_arrivals(spec, arrival_rng, mean_size);
    const std::vector<double> estimates = apply_error(sizes, spec.sigma, error_rng);
    auto [classes, weights] =
        assign_weights(spec.njobs, spec.weight_beta, spec.weight_classes, weight_rng);

    Workload workload;
    workload.jobs.reserve(spec.njobs);
    double t = 0.0;
    for (std::size_t i = 0; i < spec.njobs; ++i) {
        t += gaps[i];
        core::Job job;
        job.id = static_cast<core::JobId>(i);
        job.arrival = t;
        job.size = sizes[i];
        job.estimated_size = estimates[i];
        job.weight = weights[i];
        workload.jobs.push_back(job);
    }
    workload.weight_classes = std::move(classes);
    return workload;
}

} // namespace schedsim::gen
