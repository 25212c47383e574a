#pragma once

#include <schedsim/gen/workload.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace schedsim::exp {

/// Stopping rule for repeated runs: at least `min_runs`, then keep adding
/// until the 95% CI half-width falls at or below `target_rel_hw` of the
/// mean, capped at `max_runs`.
struct RepetitionPolicy {
    std::size_t min_runs = 30;
    std::size_t max_runs = 200;
    double target_rel_hw = 0.05;
};

/// One fully specified experiment cell.
struct ExperimentConfig {
    gen::WorkloadSpec workload;
    std::vector<std::string> schedulers;
    RepetitionPolicy reps;
};

inline nlohmann::json to_json(const gen::WorkloadSpec& spec) {
    return {
        {"sigma", spec.sigma},
        {"shape", spec.shape},
        {"timeshape", spec.timeshape},
        {"njobs", spec.njobs},
        {"load", spec.load},
        {"seed", spec.seed},
        {"beta", spec.weight_beta},
        {"weight_classes", spec.weight_classes},
        {"size_family", spec.size_family == gen::SizeFamily::Weibull ? "weibull" : "pareto"},
        {"pareto_alpha", spec.pareto_alpha},
        {"pareto_xm", spec.pareto_xm},
    };
}

inline gen::WorkloadSpec workload_spec_from_json(const nlohmann::json& j) {
    gen::WorkloadSpec spec;
    spec.sigma = j.value("sigma", spec.sigma);
    spec.shape = j.value("shape", spec.shape);
    spec.timeshape = j.value("timeshape", spec.timeshape);
    spec.njobs = j.value("njobs", spec.njobs);
    spec.load = j.value("load", spec.load);
    spec.seed = j.value("seed", spec.seed);
    spec.weight_beta = j.value("beta", spec.weight_beta);
    spec.weight_classes = j.value("weight_classes", spec.weight_classes);
    if (j.contains("size_family")) {
        const std::string family = j["size_family"];
        if (family == "weibull") spec.size_family = gen::SizeFamily::Weibull;
        else if (family == "pareto") spec.size_family = gen::SizeFamily::Pareto;
        else throw core::ValidationError("unknown size_family: " + family);
    }
    spec.pareto_alpha = j.value("pareto_alpha", spec.pareto_alpha);
    spec.pareto_xm = j.value("pareto_xm", spec.pareto_xm);
    return spec;
}

inline nlohmann::json to_json(const ExperimentConfig& config) {
    return {
        {"workload", to_json(config.workload)},
        {"schedulers", config.schedulers},
        {"min_runs", config.reps.min_runs},
        {"max_runs", config.reps.max_runs},
        {"target_rel_hw", config.reps.target_rel_hw},
    };
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    if (j.contains("workload")) config.workload = workload_spec_from_json(j["workload"]);
    else config.workload = workload_spec_from_json(j);  // flat form is fine too
    if (j.contains("schedulers"))
        config.schedulers = j["schedulers"].get<std::vector<std::string>>();
    config.reps.min_runs = j.value("min_runs", config.reps.min_runs);
    config.reps.max_runs = j.value("max_runs", config.reps.max_runs);
    config.reps.target_rel_hw = j.value("target_rel_hw", config.reps.target_rel_hw);
    return config;
}

} // namespace schedsim::exp
