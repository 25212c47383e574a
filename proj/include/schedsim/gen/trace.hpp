#pragma once

#include <schedsim/core/types.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace schedsim::gen {

/// One parsed trace row: `arrival size [weight]`.
struct TraceRow {
    double arrival = 0.0;
    double size = 0.0;
    double weight = 1.0;
};

/// Result of reading a trace file; `sorted_on_load` is false when the rows
/// had to be re-sorted (callers emit a warning).
struct Trace {
    std::vector<TraceRow> rows;
    bool sorted_on_load = true;
};

/// @brief Parse a trace stream.
///
/// UTF-8 text, one job per line, whitespace- or comma-separated columns
/// `arrival size [weight]`; `#` starts a comment; blank lines are skipped.
inline Trace parse_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double arrival, size;
        if (!(fields >> arrival)) {
            // blank or comment-only line
            bool only_space = true;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) only_space = false;
            if (only_space) continue;
            throw core::ValidationError("trace line " + std::to_string(lineno) +
                                        ": non-numeric arrival");
        }
        if (!(fields >> size))
            throw core::ValidationError("trace line " + std::to_string(lineno) +
                                        ": missing or non-numeric size");
        TraceRow row{arrival, size, 1.0};
        double weight;
        if (fields >> weight) row.weight = weight;
        std::string extra;
        if (fields >> extra)
            throw core::ValidationError("trace line " + std::to_string(lineno) +
                                        ": too many columns");
        if (!(row.size > 0.0))
            throw core::ValidationError("trace line " + std::to_string(lineno) +
                                        ": size must be > 0");
        if (!(row.weight > 0.0))
            throw core::ValidationError("trace line " + std::to_string(lineno) +
                                        ": weight must be > 0");
        trace.rows.push_back(row);
    }
    if (trace.rows.empty()) throw core::ValidationError("trace is empty");
    if (!std::is_sorted(trace.rows.begin(), trace.rows.end(),
                        [](const TraceRow& a, const TraceRow& b) {
                            return a.arrival < b.arrival;
                        })) {
        std::stable_sort(trace.rows.begin(), trace.rows.end(),
                         [](const TraceRow& a, const TraceRow& b) {
                             return a.arrival < b.arrival;
                         });
        trace.sorted_on_load = false;
    }
    return trace;
}

inline Trace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw core::ValidationError("cannot open trace file: " + path);
    return parse_trace(in);
}

/// Write rows in the same format parse_trace reads, with round-trippable
/// double formatting.
inline void write_trace(std::ostream& out, const std::vector<TraceRow>& rows) {
    char buf[80];
    for (const TraceRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", row.arrival, row.size,
                      row.weight);
        out << buf << '\n';
    }
}

/// @brief Normalize a trace to a target load and turn it into jobs.
///
/// The simulated processing speed is set to total size / (span *
/// target_load), where span is the distance between first and last arrival,
/// so that the resulting load at unit capacity equals target_load. Sizes
/// are divided by that speed; ids are assigned in arrival order. Estimated
/// sizes are initialized to the true sizes; replay applies errors
/// afterwards. A single-row trace (or one with zero span) cannot be
/// normalized.
inline std::vector<core::Job> normalize_trace(const Trace& trace, double target_load) {
    if (!(target_load > 0.0) || !(target_load < 1.0))
        throw core::ValidationError("target load must be in (0, 1)");
    const auto& rows = trace.rows;
    if (rows.size() < 2)
        throw core::ValidationError("trace needs at least two rows to define a span");
    const double span = rows.back().arrival - rows.front().arrival;
    if (!(span > 0.0))
        throw core::ValidationError("trace span is zero; load cannot be normalized");
    double total = 0.0;
    for (const TraceRow& row : rows) total += row.size;
    const double speed = total / (span * target_load);

    std::vector<core::Job> jobs;
    jobs.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        core::Job job;
        job.id = static_cast<core::JobId>(i);
        job.arrival = rows[i].arrival;
        job.size = rows[i].size / speed;
        job.estimated_size = job.size;
        job.weight = rows[i].weight;
        jobs.push_back(job);
    }
    return jobs;
}

/// Convenience: read, warn-sort and normalize in one call.
inline std::vector<core::Job> load_trace(const std::string& path, double target_load,
                                         bool* sorted_on_load = nullptr) {
    Trace trace = read_trace_file(path);
    if (sorted_on_load) *sorted_on_load = trace.sorted_on_load;
    return normalize_trace(trace, target_load);
}

} // namespace schedsim::gen
