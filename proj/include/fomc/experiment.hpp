#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fomc/random_models.hpp"

namespace fomc {

enum class Measurement { MinB, Skeleton, Kernel, Triangles, Degree, McOracle };

struct ExperimentPlan {
    std::vector<ModelSpec> models;  // seeds come from the seed grid
    std::vector<std::size_t> ns;
    unsigned seeds = 1;
    std::uint64_t seed_base = 1;
    std::uint64_t r = 1;
    std::uint64_t mu = 5;
    unsigned q = 2;
    std::set<Measurement> measure{Measurement::MinB, Measurement::Skeleton, Measurement::Triangles,
                                  Measurement::Degree};
    unsigned mc_trials = 5;  // random sentences per run for mc-oracle (n <= 40 only)

    /// Throws std::invalid_argument on an empty grid or zero seeds.
    void validate() const;
};

/// Plan file: `key=value` lines (`n=1000,10000`, `seeds=30`, `seed_base=1`,
/// `r=1`, `mu=5`, `q=2`, `measure=minb,skeleton,...`, `mc_trials=5`) plus
/// one `model=<name> k=v ...` line per model point. `#` starts a comment.
ExperimentPlan parse_plan(std::string_view text);

std::string to_string(Measurement m);
Measurement parse_measurement(const std::string& name);

/// One row of the report: column name -> text value (empty when not measured).
using ReportRow = std::map<std::string, std::string>;

const std::vector<std::string>& report_columns();

struct RunOptions {
    std::string report_path;    // main CSV
    std::string degree_path;    // per-degree CCDF CSV; empty = next to the report
    unsigned workers = 0;       // 0 = hardware concurrency
    bool quiet = true;
};

struct RunSummary {
    std::size_t planned = 0;
    std::size_t skipped = 0;  // already present in the report
    std::size_t written = 0;
    std::size_t failed = 0;
    std::vector<std::string> errors;
};

/// Executes the grid in (model, n, seed) order. Rows are appended in plan
/// order through a single writer; rows already in the report are skipped,
/// so a rerun of a finished plan leaves the files untouched.
RunSummary run_experiment(const ExperimentPlan& plan, const RunOptions& options);

/// Measures one grid point; deterministic in (model, n, seed) apart from
/// the wall-time columns.
ReportRow measure_run(const ExperimentPlan& plan, const ModelSpec& model, std::size_t n, std::uint64_t seed,
                      std::vector<std::string>* degree_rows = nullptr);

/// Minimal CSV support for the report format (RFC 4180 quoting).
std::string csv_escape(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column or -1.
    int column(const std::string& name) const;
};

/// Reads a CSV file, skipping `#` comment lines; the first other line is the header.
ReportTable read_report(const std::string& path);

/// Writes degree_ccdf.svg, bmin_vs_n.svg, kernel_vs_n.svg and
/// triangles_vs_n.svg into out_dir. Returns the written paths.
std::vector<std::string> emit_plots(const std::string& report_path, const std::string& degree_path,
                                    const std::string& out_dir);

}  // namespace fomc
