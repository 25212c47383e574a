// Command-line experiment runner: single cells, parameter sweeps, trace
// replay and the named experiment presets, with CSV outputs and a JSON
// provenance sidecar per invocation.

#include <schedsim/schedsim.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schedsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNotConverged = 3;

struct CommonFlags {
    std::vector<double> sigma, shape, timeshape, load, beta;
    std::vector<std::size_t> njobs;
    std::uint64_t seed = 0;
    int weight_classes = 0;
    std::string size_family;
    double pareto_alpha = 0.0, pareto_xm = 0.0;
    std::vector<std::string> schedulers;
    std::size_t min_runs = 0, max_runs = 0;
    double target_rel_hw = 0.0;
    unsigned threads = 0;
    std::string config_path;
    std::string out_dir;
    bool emit_jobs = false, emit_ecdf = false, emit_bins = false, emit_class = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool lists) {
    const std::string many = lists ? " (comma-separated list sweeps the parameter)" : "";
    cmd->add_option("--sigma", flags.sigma, "log-normal error parameter" + many)
        ->delimiter(',');
    cmd->add_option("--shape", flags.shape, "Weibull job size shape" + many)
        ->delimiter(',');
    cmd->add_option("--timeshape", flags.timeshape, "Weibull inter-arrival shape" + many)
        ->delimiter(',');
    cmd->add_option("--load", flags.load, "system load in (0,1)" + many)->delimiter(',');
    cmd->add_option("--beta", flags.beta, "weight skew: class c gets weight 1/c^beta" + many)
        ->delimiter(',');
    cmd->add_option("--njobs", flags.njobs, "jobs per workload" + many)->delimiter(',');
    cmd->add_option("--seed", flags.seed, "base seed");
    cmd->add_option("--weight-classes", flags.weight_classes, "number of weight classes");
    cmd->add_option("--size-family", flags.size_family, "weibull | pareto")
        ->check(CLI::IsMember({"weibull", "pareto"}));
    cmd->add_option("--pareto-alpha", flags.pareto_alpha, "Pareto tail exponent");
    cmd->add_option("--pareto-xm", flags.pareto_xm, "Pareto scale (strictly positive)");
    cmd->add_option("--schedulers", flags.schedulers,
                    "policies to run on each workload realization")
        ->delimiter(',');
    cmd->add_option("--min-runs", flags.min_runs, "minimum repetitions per cell");
    cmd->add_option("--max-runs", flags.max_runs, "repetition cap per cell");
    cmd->add_option("--target-rel-hw", flags.target_rel_hw,
                    "stop once the 95% CI half-width is below this fraction of the mean");
    cmd->add_option("--threads", flags.threads, "parallel workers (default: cores)");
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    cmd->add_option("--out", flags.out_dir,
                    "output directory (default: $SCHEDSIM_OUT_DIR or ./schedsim-out)");
    cmd->add_flag("--emit-jobs", flags.emit_jobs, "write per-job CSV of the first run");
    cmd->add_flag("--emit-ecdf", flags.emit_ecdf, "write pooled slowdown ECDF per policy");
    cmd->add_flag("--emit-bins", flags.emit_bins,
                  "write pooled conditional-slowdown bins per policy");
    cmd->add_flag("--emit-class-mst", flags.emit_class,
                  "write per-weight-class MST rows per policy");
}

fs::path resolve_out_dir(const CommonFlags& flags) {
    if (!flags.out_dir.empty()) return flags.out_dir;
    if (const char* env = std::getenv("SCHEDSIM_OUT_DIR"); env && *env) return env;
    return "schedsim-out";
}

// precedence: flags > config file > defaults
exp::ExperimentConfig base_config(const CommonFlags& flags) {
    exp::ExperimentConfig config;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw core::ValidationError("cannot open config file: " + flags.config_path);
        json j;
        in >> j;
        config = exp::experiment_config_from_json(j);
    }
    auto& w = config.workload;
    if (!flags.sigma.empty()) w.sigma = flags.sigma.front();
    if (!flags.shape.empty()) w.shape = flags.shape.front();
    if (!flags.timeshape.empty()) w.timeshape = flags.timeshape.front();
    if (!flags.load.empty()) w.load = flags.load.front();
    if (!flags.beta.empty()) w.weight_beta = flags.beta.front();
    if (!flags.njobs.empty()) w.njobs = flags.njobs.front();
    if (flags.seed != 0) w.seed = flags.seed;
    if (flags.weight_classes != 0) w.weight_classes = flags.weight_classes;
    if (!flags.size_family.empty())
        w.size_family = flags.size_family == "pareto" ? gen::SizeFamily::Pareto
                                                      : gen::SizeFamily::Weibull;
    if (flags.pareto_alpha != 0.0) w.pareto_alpha = flags.pareto_alpha;
    if (flags.pareto_xm != 0.0) w.pareto_xm = flags.pareto_xm;
    if (!flags.schedulers.empty()) config.schedulers = flags.schedulers;
    if (flags.min_runs != 0) config.reps.min_runs = flags.min_runs;
    if (flags.max_runs != 0) config.reps.max_runs = flags.max_runs;
    if (flags.target_rel_hw != 0.0) config.reps.target_rel_hw = flags.target_rel_hw;
    return config;
}

exp::RunOptions run_options(const CommonFlags& flags) {
    exp::RunOptions options;
    if (flags.threads != 0) options.threads = flags.threads;
    options.collect_records = flags.emit_ecdf || flags.emit_bins || flags.emit_jobs;
    return options;
}

metrics::SummaryRow summary_row(const exp::CellResult& cell,
                                const exp::SchedulerOutcome& outcome) {
    metrics::SummaryRow row;
    row.shape = cell.config.workload.shape;
    row.sigma = cell.config.workload.sigma;
    row.scheduler = outcome.scheduler;
    row.mst = outcome.mst_stat.mean;
    row.mst_ratio_ps = cell.mst_ratio_vs(outcome.scheduler, "ps");
    row.mst_ratio_srpt = cell.mst_ratio_vs(outcome.scheduler, "srpt");
    row.ci_half_width = outcome.mst_stat.ci_half_width;
    row.n_runs = outcome.mst_stat.n;
    row.load = cell.config.workload.load;
    row.timeshape = cell.config.workload.timeshape;
    row.njobs = cell.config.workload.njobs;
    row.beta = cell.config.workload.weight_beta;
    row.converged = outcome.converged;
    return row;
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (c == ':' || c == '+' || c == '/') c = '_';
    return out;
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw core::ValidationError("cannot write " + path.string());
    out << contents;
}

void emit_cell_extras(const fs::path& dir, const exp::CellResult& cell,
                      const CommonFlags& flags, const std::string& tag) {
    for (const auto& outcome : cell.outcomes) {
        const std::string base = tag + sanitize(outcome.scheduler);
        if (flags.emit_ecdf && !outcome.pooled_records.empty()) {
            std::ofstream out(dir / ("ecdf_" + base + ".csv"));
            metrics::write_ecdf_csv(out, metrics::slowdown_ecdf(outcome.pooled_records));
        }
        if (flags.emit_bins && !outcome.pooled_records.empty()) {
            std::ofstream out(dir / ("bins_" + base + ".csv"));
            metrics::write_bins_csv(out,
                                    metrics::conditional_slowdown(outcome.pooled_records));
        }
        if (flags.emit_class && !outcome.per_class_mst_runs.empty()) {
            std::vector<metrics::ClassMstRow> rows;
            for (const auto& [cls, values] : outcome.per_class_mst_runs) {
                const auto stat = metrics::summarize(values);
                metrics::ClassMstRow row;
                row.shape = cell.config.workload.shape;
                row.beta = cell.config.workload.weight_beta;
                row.scheduler = outcome.scheduler;
                row.weight_class = cls;
                row.mst = stat.mean;
                row.ci_half_width = stat.ci_half_width;
                row.n_runs = stat.n;
                rows.push_back(row);
            }
            std::ofstream out(dir / ("class_mst_" + base + ".csv"));
            metrics::write_class_mst_csv(out, rows);
        }
    }
}

void emit_first_run_jobs(const fs::path& dir, const exp::CellResult& cell,
                         const std::string& tag) {
    if (cell.seeds.empty()) return;
    gen::WorkloadSpec spec = cell.config.workload;
    spec.seed = cell.seeds.front();
    const gen::Workload workload = gen::make_workload(spec);
    for (const auto& outcome : cell.outcomes) {
        if (outcome.pooled_records.size() < workload.jobs.size()) continue;
        std::ofstream out(dir / ("jobs_" + tag + sanitize(outcome.scheduler) + ".csv"));
        metrics::write_jobs_csv(
            out, workload.jobs,
            std::span(outcome.pooled_records).first(workload.jobs.size()));
    }
}

int cmd_run(const CommonFlags& flags) {
    const exp::ExperimentConfig config = base_config(flags);
    const fs::path dir = resolve_out_dir(flags);
    fs::create_directories(dir);

    const exp::CellResult cell = exp::run_cell(config, run_options(flags));

    std::vector<metrics::SummaryRow> rows;
    for (const auto& outcome : cell.outcomes) rows.push_back(summary_row(cell, outcome));
    {
        std::ofstream out(dir / "summary.csv");
        metrics::write_summary_csv(out, rows);
    }
    json sidecar = exp::to_json(cell);
    sidecar["version"] = kVersion;
    write_text_file(dir / "run.json", sidecar.dump(2) + "\n");
    emit_cell_extras(dir, cell, flags, "");
    if (flags.emit_jobs) emit_first_run_jobs(dir, cell, "");

    for (const auto& row : rows)
        std::cout << row.scheduler << ": mst " << row.mst << " (ci half-width "
                  << row.ci_half_width << ", " << row.n_runs << " runs"
                  << (row.converged ? "" : ", NOT converged") << ")\n";
    std::cout << "outputs in " << dir.string() << "\n";
    return cell.all_converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const CommonFlags& flags, const std::string& preset) {
    const exp::ExperimentConfig base = base_config(flags);
    std::vector<exp::ExperimentConfig> cells;
    bool preset_class = false;
    CommonFlags effective = flags;

    if (!preset.empty()) {
        const exp::SweepPlan plan = exp::make_preset(preset, base);
        cells = plan.cells;
        effective.emit_ecdf = flags.emit_ecdf || plan.emit_ecdf;
        effective.emit_bins = flags.emit_bins || plan.emit_bins;
        effective.emit_class = flags.emit_class || plan.emit_class_mst;
        preset_class = plan.emit_class_mst;
        // sweep-list flags refine a preset only through the base config
    } else {
        auto one = [](std::vector<double> v, double fallback) {
            return v.empty() ? std::vector<double>{fallback} : v;
        };
        const auto shapes = one(flags.shape, base.workload.shape);
        const auto sigmas = one(flags.sigma, base.workload.sigma);
        const auto loads = one(flags.load, base.workload.load);
        const auto timeshapes = one(flags.timeshape, base.workload.timeshape);
        const auto betas = one(flags.beta, base.workload.weight_beta);
        const auto njobs_list = flags.njobs.empty()
                                    ? std::vector<std::size_t>{base.workload.njobs}
                                    : flags.njobs;
        for (double shape : shapes)
            for (double sigma : sigmas)
                for (double load : loads)
                    for (double timeshape : timeshapes)
                        for (double beta : betas)
                            for (std::size_t n : njobs_list) {
                                exp::ExperimentConfig config = base;
                                config.workload.shape = shape;
                                config.workload.sigma = sigma;
                                config.workload.load = load;
                                config.workload.timeshape = timeshape;
                                config.workload.weight_beta = beta;
                                config.workload.njobs = n;
                                cells.push_back(std::move(config));
                            }
    }
    if (cells.empty()) {
        std::cout << "empty plan, nothing to do\n";
        return kExitOk;
    }
    for (const auto& cell : cells)
        if (cell.schedulers.empty())
            throw core::ValidationError("no schedulers requested (use --schedulers)");

    const fs::path dir = resolve_out_dir(flags);
    fs::create_directories(dir);

    exp::RunOptions options = run_options(effective);
    options.collect_records = options.collect_records || effective.emit_ecdf ||
                              effective.emit_bins;
    const exp::SweepResult result = exp::sweep(cells, options);

    std::vector<metrics::SummaryRow> rows;
    json cell_sidecars = json::array();
    for (const auto& cell : result.cells) {
        for (const auto& outcome : cell.outcomes) rows.push_back(summary_row(cell, outcome));
        cell_sidecars.push_back(exp::to_json(cell));
        const std::string tag = "cell" + std::to_string(cell.cell_index) + "_";
        emit_cell_extras(dir, cell, effective, tag);
        if (effective.emit_jobs) emit_first_run_jobs(dir, cell, tag);
    }
    {
        std::ofstream out(dir / "sweep.csv");
        metrics::write_summary_csv(out, rows);
    }
    json sidecar;
    sidecar["version"] = kVersion;
    sidecar["preset"] = preset;
    sidecar["cells"] = cell_sidecars;
    json failures = json::array();
    for (std::size_t i = 0; i < result.failed.size(); ++i)
        failures.push_back({{"cell_index", result.failed[i]}, {"error", result.errors[i]}});
    sidecar["failed_cells"] = failures;
    write_text_file(dir / "sweep.json", sidecar.dump(2) + "\n");
    (void)preset_class;

    std::cout << result.cells.size() << " cells done, " << result.failed.size()
              << " failed; outputs in " << dir.string() << "\n";
    for (std::size_t i = 0; i < result.failed.size(); ++i)
        std::cerr << "cell " << result.failed[i] << " failed: " << result.errors[i] << "\n";
    if (result.any_failed()) return kExitRuntime;
    return result.all_converged() ? kExitOk : kExitNotConverged;
}

int cmd_replay(const CommonFlags& flags, const std::string& trace_path,
               double target_load) {
    exp::ExperimentConfig config = base_config(flags);
    if (config.schedulers.empty())
        throw core::ValidationError("no schedulers requested (use --schedulers)");
    const std::vector<double> sigmas =
        flags.sigma.empty() ? std::vector<double>{config.workload.sigma} : flags.sigma;

    bool sorted_on_load = true;
    const std::vector<core::Job> jobs =
        gen::load_trace(trace_path, target_load, &sorted_on_load);
    if (!sorted_on_load)
        std::cerr << "warning: trace rows were not sorted by arrival; sorted them\n";
    config.workload.load = target_load;
    config.workload.njobs = jobs.size();

    const fs::path dir = resolve_out_dir(flags);
    fs::create_directories(dir);

    const auto results = exp::replay(jobs, sigmas, config, run_options(flags));

    std::vector<metrics::SummaryRow> rows;
    json cell_sidecars = json::array();
    bool all_converged = true;
    for (const auto& [sigma, cell] : results) {
        for (const auto& outcome : cell.outcomes) {
            metrics::SummaryRow row = summary_row(cell, outcome);
            row.shape = std::numeric_limits<double>::quiet_NaN();  // trace, not Weibull
            rows.push_back(row);
        }
        all_converged = all_converged && cell.all_converged;
        cell_sidecars.push_back(exp::to_json(cell));
        emit_cell_extras(dir, cell, flags,
                         "sigma" + std::to_string(sigma) + "_");
    }
    {
        std::ofstream out(dir / "replay.csv");
        metrics::write_summary_csv(out, rows);
    }
    json sidecar;
    sidecar["version"] = kVersion;
    sidecar["trace"] = trace_path;
    sidecar["target_load"] = target_load;
    sidecar["cells"] = cell_sidecars;
    write_text_file(dir / "replay.json", sidecar.dump(2) + "\n");

    std::cout << results.size() << " sigma levels replayed; outputs in " << dir.string()
              << "\n";
    return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_presets() {
    for (const auto& [name, description] : exp::preset_catalog())
        std::cout << name << "\n    " << description << "\n";
    std::cout << "\nrun one with: schedsim sweep --preset <name> [overrides]\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-server preemptive queue simulator and size-based "
                 "scheduler test bench"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, replay_flags;
    std::string preset, trace_path;
    double target_load = 0.9;

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment cell");
    add_common_flags(run_cmd, run_flags, false);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a grid of cells (or a named preset)");
    add_common_flags(sweep_cmd, sweep_flags, true);
    sweep_cmd->add_option("--preset", preset, "named preset (see `schedsim presets`)");

    CLI::App* replay_cmd =
        app.add_subcommand("replay", "replay a trace file across error levels");
    add_common_flags(replay_cmd, replay_flags, true);
    replay_cmd->add_option("--trace", trace_path, "trace file: `arrival size [weight]`")
        ->required();
    replay_cmd->add_option("--target-load", target_load,
                           "normalize the trace to this load (default 0.9)");

    CLI::App* presets_cmd = app.add_subcommand("presets", "list the named presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, preset);
        if (replay_cmd->parsed()) return cmd_replay(replay_flags, trace_path, target_load);
        if (presets_cmd->parsed()) return cmd_presets();
    } catch (const core::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
