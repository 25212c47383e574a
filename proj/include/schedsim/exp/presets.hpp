#pragma once

#include <schedsim/exp/config.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace schedsim::exp {

struct SweepPlan {
    std::string name;
    std::string description;
    std::vector<ExperimentConfig> cells;
    bool emit_ecdf = false;       // pooled slowdown ECDF per scheduler
    bool emit_bins = false;       // pooled conditional-slowdown bins
    bool emit_class_mst = false;  // per-weight-class MST rows
};

/// Half-octave grid over [lo, hi] (lo, lo*sqrt(2), lo*2, ...).
inline std::vector<double> half_octave_points(double lo, double hi) {
    std::vector<double> points;
    for (int i = 0;; ++i) {
        const double v = lo * std::pow(2.0, 0.5 * i);
        if (v > hi * (1.0 + 1e-9)) break;
        points.push_back(v);
    }
    return points;
}

inline const std::vector<std::pair<std::string, std::string>>& preset_catalog() {
    static const std::vector<std::pair<std::string, std::string>> catalog = {
        {"fig3-grid",
         "shape x sigma grid of the size-based policies, MST normalized against ps"},
        {"fig5-sigma-lines",
         "sigma sweep at a fixed (heavy-tailed) shape, MST normalized against srpt"},
        {"fig6-fairness",
         "default-parameter fairness cell: slowdown ECDF and conditional slowdown"},
        {"fig9-weights", "weight classes: psbs vs dps at shape x beta combinations"},
        {"pareto", "sigma sweep with Pareto job sizes (alpha 1 and 2)"},
        {"load-timeshape", "load sweep and inter-arrival-shape sweep at defaults"},
    };
    return catalog;
}

/// @brief Build a named sweep plan on top of a base configuration.
///
/// The base carries everything the preset does not itself vary (njobs,
/// seed, repetition policy, ...), so presets can be scaled down from the
/// command line.
inline SweepPlan make_preset(const std::string& name, const ExperimentConfig& base) {
    SweepPlan plan;
    plan.name = name;
    auto cell = [&](gen::WorkloadSpec spec, std::vector<std::string> schedulers) {
        ExperimentConfig config = base;
        config.workload = spec;
        config.schedulers = std::move(schedulers);
        plan.cells.push_back(std::move(config));
    };

    if (name == "fig3-grid") {
        plan.description = preset_catalog()[0].second;
        const auto points = half_octave_points(0.125, 4.0);
        for (double shape : points) {
            for (double sigma : points) {
                gen::WorkloadSpec spec = base.workload;
                spec.shape = shape;
                spec.sigma = sigma;
                cell(spec, {"srpte", "srpte+ps", "srpte+las", "fspe", "fspe+ps",
                            "fspe+las", "ps"});
            }
        }
        return plan;
    }
    if (name == "fig5-sigma-lines") {
        plan.description = preset_catalog()[1].second;
        for (double sigma : half_octave_points(0.125, 4.0)) {
            gen::WorkloadSpec spec = base.workload;
            spec.sigma = sigma;
            cell(spec, {"psbs", "fspe", "srpte", "ps", "las", "fifo", "srpt"});
        }
        return plan;
    }
    if (name == "fig6-fairness") {
        plan.description = preset_catalog()[2].second;
        cell(base.workload, {"psbs", "ps", "las", "srpte", "fspe", "fifo"});
        plan.emit_ecdf = true;
        plan.emit_bins = true;
        return plan;
    }
    if (name == "fig9-weights") {
        plan.description = preset_catalog()[3].second;
        for (double shape : {0.25, 1.0, 4.0}) {
            for (double beta : {0.0, 1.0, 2.0}) {
                gen::WorkloadSpec spec = base.workload;
                spec.shape = shape;
                spec.weight_beta = beta;
                cell(spec, {"psbs", "dps"});
            }
        }
        plan.emit_class_mst = true;
        return plan;
    }
    if (name == "pareto") {
        plan.description = preset_catalog()[4].second;
        for (double alpha : {2.0, 1.0}) {
            for (double sigma : half_octave_points(0.125, 4.0)) {
                gen::WorkloadSpec spec = base.workload;
                spec.size_family = gen::SizeFamily::Pareto;
                spec.pareto_alpha = alpha;
                spec.sigma = sigma;
                cell(spec, {"psbs", "fspe", "srpte", "ps", "las", "srpt"});
            }
        }
        return plan;
    }
    if (name == "load-timeshape") {
        plan.description = preset_catalog()[5].second;
        for (double load : {0.5, 0.7, 0.9, 0.95, 0.99}) {
            gen::WorkloadSpec spec = base.workload;
            spec.load = load;
            cell(spec, {"psbs", "fspe", "srpte", "ps", "las", "srpt"});
        }
        for (double timeshape : half_octave_points(0.125, 4.0)) {
            gen::WorkloadSpec spec = base.workload;
            spec.timeshape = timeshape;
            cell(spec, {"psbs", "fspe", "srpte", "ps", "las", "srpt"});
        }
        return plan;
    }
    throw core::ValidationError("unknown preset: " + name);
}

} // namespace schedsim::exp
