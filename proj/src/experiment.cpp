#include "fomc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "fomc/decomp.hpp"
#include "fomc/gaifman.hpp"
#include "fomc/kernel.hpp"
#include "fomc/oracles.hpp"

namespace fomc {

namespace {

constexpr const char* kReportHeader = "# fomc experiment report schema=1";
constexpr const char* kDegreeHeader = "# fomc degree ccdf schema=1";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        // Allow 1e4 style sizes.
        if (value.find_first_of("eE.") != std::string::npos) {
            const double d = std::stod(value, &used);
            if (d < 0 || d != static_cast<double>(static_cast<unsigned long long>(d))) throw std::invalid_argument("");
            x = static_cast<unsigned long long>(d);
        } else {
            x = std::stoull(value, &used);
        }
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty() || value[0] == '-') {
        throw std::invalid_argument("plan key '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return x;
}

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

std::string format_seconds(double x) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);
    out << x;
    return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

using RunKey = std::tuple<std::string, std::string, std::string>;  // model, n, seed

std::string default_degree_path(const std::string& report_path) {
    std::filesystem::path p(report_path);
    auto stem = p.stem().string();
    return (p.parent_path() / (stem + "_degrees.csv")).string();
}

std::vector<std::string> degree_columns() { return {"model", "n", "seed", "degree", "ccdf"}; }

std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    return line;
}

// Cuts a partial last line left by an interrupted write so appends start clean.
void drop_torn_tail(const std::string& path) {
    std::string text;
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        text = s.str();
    }
    if (text.empty() || text.back() == '\n') return;
    const auto keep = text.find_last_of('\n');
    std::filesystem::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
}

}  // namespace

void ExperimentPlan::validate() const {
    if (models.empty()) throw std::invalid_argument("plan has no model entries");
    if (ns.empty()) throw std::invalid_argument("plan has no n values");
    if (seeds == 0) throw std::invalid_argument("plan needs seeds >= 1");
    if (r == 0 || mu == 0) throw std::invalid_argument("plan needs r >= 1 and mu >= 1");
    for (auto n : ns) {
        if (n == 0) throw std::invalid_argument("plan n values must be >= 1");
    }
    for (const auto& m : models) m.validate();
}

std::string to_string(Measurement m) {
    switch (m) {
        case Measurement::MinB: return "minb";
        case Measurement::Skeleton: return "skeleton";
        case Measurement::Kernel: return "kernel";
        case Measurement::Triangles: return "triangles";
        case Measurement::Degree: return "degree";
        case Measurement::McOracle: return "mc-oracle";
    }
    return "?";
}

Measurement parse_measurement(const std::string& name) {
    for (auto m : {Measurement::MinB, Measurement::Skeleton, Measurement::Kernel, Measurement::Triangles,
                   Measurement::Degree, Measurement::McOracle}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown measurement '" + name +
                                "' (minb, skeleton, kernel, triangles, degree, mc-oracle)");
}

ExperimentPlan parse_plan(std::string_view text) {
    ExperimentPlan plan;
    plan.models.clear();
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto line = trim(raw);
        if (line.empty()) continue;
        auto fail = [&](const std::string& what) {
            throw std::invalid_argument("plan line " + std::to_string(line_no) + ": " + what);
        };
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        try {
            if (key == "model") {
                plan.models.push_back(parse_model_description(line));
            } else if (key == "n") {
                plan.ns.clear();
                for (const auto& item : split_list(value)) plan.ns.push_back(parse_unsigned(key, item));
            } else if (key == "seeds") {
                plan.seeds = static_cast<unsigned>(parse_unsigned(key, value));
            } else if (key == "seed_base") {
                plan.seed_base = parse_unsigned(key, value);
            } else if (key == "r") {
                plan.r = parse_unsigned(key, value);
            } else if (key == "mu") {
                plan.mu = parse_unsigned(key, value);
            } else if (key == "q") {
                plan.q = static_cast<unsigned>(parse_unsigned(key, value));
            } else if (key == "mc_trials") {
                plan.mc_trials = static_cast<unsigned>(parse_unsigned(key, value));
            } else if (key == "measure") {
                plan.measure.clear();
                for (const auto& item : split_list(value)) plan.measure.insert(parse_measurement(item));
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            const std::string what = e.what();
            if (what.rfind("plan line", 0) == 0) throw;
            fail(what);
        }
    }
    plan.validate();
    return plan;
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns{
        "model",      "n",          "seed",         "m",          "triangles",        "second_order_avg",
        "mean_degree", "max_degree", "d_hat",       "b_min",      "z_size",           "p_size",
        "s_family",   "max_p_component", "kernel_in", "kernel_out", "kernel_fallbacks", "mc_agree",
        "mc_trials",  "t_generate", "t_minb",       "t_skeleton", "t_kernel",         "t_mc"};
    return columns;
}

ReportRow measure_run(const ExperimentPlan& plan, const ModelSpec& model, std::size_t n, std::uint64_t seed,
                      std::vector<std::string>* degree_rows) {
    ModelSpec spec = model;
    spec.seed = seed;
    ReportRow row;
    for (const auto& c : report_columns()) row[c] = "";
    row["model"] = spec.describe();
    row["n"] = std::to_string(n);
    row["seed"] = std::to_string(seed);

    auto t0 = std::chrono::steady_clock::now();
    const auto gen = generate(spec, n);
    row["t_generate"] = format_seconds(seconds_since(t0));
    const auto& g = gen.graph;
    row["m"] = std::to_string(g.edge_count());

    const auto stats = degree_stats(g);
    row["second_order_avg"] = format_double(stats.second_order_average);
    row["mean_degree"] = format_double(stats.mean_degree);
    row["max_degree"] = std::to_string(stats.max_degree);
    if (spec.alpha() > 2) row["d_hat"] = format_double(d_hat(spec.alpha(), n));

    const auto& m = plan.measure;
    if (m.contains(Measurement::Triangles)) row["triangles"] = std::to_string(triangle_count(g));
    if (m.contains(Measurement::Degree) && degree_rows) {
        for (std::size_t d = 1; d < stats.histogram.size(); ++d) {
            if (stats.histogram[d] == 0) continue;
            degree_rows->push_back(
                join_csv({row["model"], row["n"], row["seed"], std::to_string(d), format_double(stats.ccdf[d])}));
        }
    }
    if (m.contains(Measurement::MinB)) {
        t0 = std::chrono::steady_clock::now();
        row["b_min"] = std::to_string(minimal_b(g, plan.r, plan.mu));
        row["t_minb"] = format_seconds(seconds_since(t0));
    }
    if (m.contains(Measurement::Skeleton)) {
        t0 = std::chrono::steady_clock::now();
        const auto sk = protrusion_skeleton(g, plan.r, plan.mu);
        row["t_skeleton"] = format_seconds(seconds_since(t0));
        row["z_size"] = std::to_string(sk.z.size());
        row["p_size"] = std::to_string(sk.p.size());
        row["s_family"] = std::to_string(sk.s_family.size());
        row["max_p_component"] = std::to_string(sk.max_component_size());
    }
    if (m.contains(Measurement::Kernel) && n > 0) {
        t0 = std::chrono::steady_clock::now();
        const auto b = ball(LabeledGraph(g), 0, static_cast<unsigned>(plan.r));
        KernelConfig config;
        config.q = plan.q;
        config.r = plan.r;
        config.mu = plan.mu;
        RepresentativeCache cache;
        const auto result = replace_protrusions(b.induced, config, cache);
        row["t_kernel"] = format_seconds(seconds_since(t0));
        row["kernel_in"] = std::to_string(result.report.input_vertices);
        row["kernel_out"] = std::to_string(result.report.output_vertices);
        row["kernel_fallbacks"] = std::to_string(result.report.fallbacks);
    }
    if (m.contains(Measurement::McOracle) && n <= 40 && plan.mc_trials > 0) {
        t0 = std::chrono::steady_clock::now();
        Rng rng(seed * 0x9e3779b97f4a7c15ULL + n);
        oracle::GnfShape shape;
        shape.omega.max_depth = 4;
        RepresentativeCache cache;
        LocalConfig config;
        const LabeledGraph lg(g);
        unsigned agree = 0;
        for (unsigned t = 0; t < plan.mc_trials; ++t) {
            const auto psi = oracle::random_gnf(rng, shape);
            const bool fast = check_gnf(lg, psi, config, cache).verdict;
            const bool slow = naive_check(lg, oracle::expand_gnf(psi));
            agree += fast == slow ? 1U : 0U;
        }
        row["mc_agree"] = std::to_string(agree);
        row["mc_trials"] = std::to_string(plan.mc_trials);
        row["t_mc"] = format_seconds(seconds_since(t0));
    }
    return row;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    out.push_back(std::move(cur));
    return out;
}

int ReportTable::column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

ReportTable read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    ReportTable table;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = csv_split(line);
        if (!header) {
            table.columns = std::move(fields);
            header = true;
            continue;
        }
        // A torn final line from an interrupted run is ignored.
        if (fields.size() != table.columns.size()) continue;
        table.rows.push_back(std::move(fields));
    }
    return table;
}

RunSummary run_experiment(const ExperimentPlan& plan, const RunOptions& options) {
    plan.validate();
    if (options.report_path.empty()) throw std::invalid_argument("run_experiment needs a report path");
    const auto& columns = report_columns();
    const auto degree_path = options.degree_path.empty() ? default_degree_path(options.report_path)
                                                         : options.degree_path;

    std::set<RunKey> done;
    bool report_exists = std::filesystem::exists(options.report_path);
    if (report_exists) {
        auto table = read_report(options.report_path);
        if (table.columns.empty()) {
            report_exists = false;
        } else if (table.columns != columns) {
            throw std::runtime_error("'" + options.report_path + "' has a different column layout");
        }
        for (const auto& row : table.rows) done.emplace(row[0], row[1], row[2]);
    }

    // Drop degree rows of runs whose main row never landed.
    bool degree_exists = std::filesystem::exists(degree_path);
    if (degree_exists) {
        auto table = read_report(degree_path);
        std::vector<std::string> kept;
        bool dropped = false;
        for (const auto& row : table.rows) {
            if (done.contains({row[0], row[1], row[2]})) {
                kept.push_back(join_csv(row));
            } else {
                dropped = true;
            }
        }
        if (table.columns.empty()) {
            degree_exists = false;
        } else if (dropped) {
            std::ofstream out(degree_path, std::ios::trunc);
            out << kDegreeHeader << '\n' << join_csv(degree_columns()) << '\n';
            for (const auto& l : kept) out << l << '\n';
        }
    }

    struct Task {
        const ModelSpec* model;
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    RunSummary summary;
    for (const auto& model : plan.models) {
        for (auto n : plan.ns) {
            for (unsigned s = 0; s < plan.seeds; ++s) {
                ++summary.planned;
                const auto seed = plan.seed_base + s;
                if (done.contains({model.describe(), std::to_string(n), std::to_string(seed)})) {
                    ++summary.skipped;
                    continue;
                }
                tasks.push_back({&model, n, seed});
            }
        }
    }
    if (tasks.empty()) return summary;
    if (report_exists) drop_torn_tail(options.report_path);
    if (degree_exists) drop_torn_tail(degree_path);

    std::ofstream report(options.report_path, std::ios::app);
    std::ofstream degrees(degree_path, std::ios::app);
    if (!report || !degrees) throw std::runtime_error("cannot open report files for writing");
    if (!report_exists) report << kReportHeader << '\n' << join_csv(columns) << '\n';
    if (!degree_exists) degrees << kDegreeHeader << '\n' << join_csv(degree_columns()) << '\n';
    report.flush();
    degrees.flush();

    struct Slot {
        bool ready = false;
        std::optional<ReportRow> row;
        std::vector<std::string> degree_rows;
        std::string error;
    };
    std::vector<Slot> slots(tasks.size());
    std::mutex mutex;
    std::condition_variable cv;
    std::atomic<std::size_t> next_task{0};

    auto worker = [&] {
        while (true) {
            const auto i = next_task.fetch_add(1);
            if (i >= tasks.size()) return;
            Slot slot;
            try {
                slot.row = measure_run(plan, *tasks[i].model, tasks[i].n, tasks[i].seed, &slot.degree_rows);
            } catch (const std::exception& e) {
                slot.error = tasks[i].model->describe() + " n=" + std::to_string(tasks[i].n) +
                             " seed=" + std::to_string(tasks[i].seed) + ": " + e.what();
            }
            slot.ready = true;
            {
                std::lock_guard lock(mutex);
                slots[i] = std::move(slot);
            }
            cv.notify_all();
        }
    };

    unsigned workers = options.workers ? options.workers : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks.size()));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);

    // Single ordered writer: a run's degree rows go out before its main row.
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Slot slot;
        {
            std::unique_lock lock(mutex);
            cv.wait(lock, [&] { return slots[i].ready; });
            slot = std::move(slots[i]);
        }
        if (!slot.row) {
            ++summary.failed;
            summary.errors.push_back(slot.error);
            continue;
        }
        for (const auto& l : slot.degree_rows) degrees << l << '\n';
        degrees.flush();
        std::vector<std::string> fields;
        for (const auto& c : columns) fields.push_back((*slot.row)[c]);
        report << join_csv(fields) << '\n';
        report.flush();
        ++summary.written;
        if (!options.quiet) {
            std::cerr << "[" << i + 1 << "/" << tasks.size() << "] " << (*slot.row)["model"] << " n=" << tasks[i].n
                      << " seed=" << tasks[i].seed << '\n';
        }
    }
    return summary;
}

}  // namespace fomc
