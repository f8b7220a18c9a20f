// fomc: command-line front end.
//
// Exit codes: 0 success (or SAT), 1 UNSAT or a failing selftest,
// 2 usage or input error, 3 internal invariant violation.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fomc/decomp.hpp"
#include "fomc/experiment.hpp"
#include "fomc/formula.hpp"
#include "fomc/gaifman.hpp"
#include "fomc/gnf.hpp"
#include "fomc/graph_io.hpp"
#include "fomc/kernel.hpp"
#include "fomc/random_models.hpp"
#include "fomc/selftest.hpp"

namespace {

using namespace fomc;

constexpr int kExitUnsat = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    unsigned workers = 0;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << x;
    return out.str();
}

// Output file: explicit path, else <out>/<name>, else empty (stdout).
std::string output_path(const Globals& globals, const std::string& explicit_path, const std::string& name) {
    if (!explicit_path.empty()) return explicit_path;
    if (globals.out.empty()) return {};
    std::filesystem::create_directories(globals.out);
    return (std::filesystem::path(globals.out) / name).string();
}

void emit_graph(const std::string& path, const LabeledGraph& g, const std::vector<std::string>& comments) {
    if (path.empty()) {
        std::cout << write_graph(g, comments);
    } else {
        write_graph_file(path, g, comments);
        std::cerr << "wrote " << path << '\n';
    }
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
    std::string model;
    std::size_t n = 0;
    double alpha = 3.0;
    double c = 1.0;
    std::string p;
    std::uint32_t m = 1;
    std::string weights;
    std::string output;
};

ModelSpec model_from_args(const GenerateArgs& a, std::uint64_t seed) {
    std::ostringstream desc;
    desc << "model=" << a.model;
    if (a.model == "er") {
        if (a.p.empty()) throw UsageError("--p is required for model er");
        desc << " p=" << a.p;
    } else if (a.model == "chung-lu" || a.model == "config") {
        desc << " alpha=" << a.alpha << " c=" << a.c;
        if (a.model == "config" && !a.weights.empty()) desc << " weights=" << a.weights;
    } else if (a.model == "pa") {
        desc << " m=" << a.m;
    }
    auto spec = parse_model_description(desc.str());
    spec.seed = seed;
    return spec;
}

int run_generate(const GenerateArgs& a, const Globals& globals) {
    const auto spec = model_from_args(a, globals.seed);
    const auto start = std::chrono::steady_clock::now();
    const auto gen = generate(spec, a.n);
    std::vector<std::string> comments{spec.describe() + " n=" + std::to_string(a.n) +
                                      " seed=" + std::to_string(spec.seed)};
    comments.push_back("pre_erasure_edges=" + std::to_string(gen.pre_erasure_edges));
    if (!gen.within_precondition) comments.push_back("warning: max weight squared exceeds total weight");
    for (const auto& note : gen.notes) comments.push_back(note);
    const auto name = spec.name() + "_n" + std::to_string(a.n) + "_s" + std::to_string(spec.seed) + ".graph";
    emit_graph(output_path(globals, a.output, name), LabeledGraph(gen.graph), comments);
    std::cerr << "n=" << gen.graph.vertex_count() << " m=" << gen.graph.edge_count()
              << " time=" << fixed(seconds_since(start)) << "s\n";
    return 0;
}

// --- stats ------------------------------------------------------------------

int run_stats(const std::string& path) {
    const auto g = read_graph_file(path);
    const auto& graph = g.graph();
    const auto stats = degree_stats(graph);
    std::cout << "n,m,triangles,mean_degree,second_order_avg,max_degree,edge_excess,components\n";
    std::cout << graph.vertex_count() << ',' << graph.edge_count() << ',' << triangle_count(graph) << ','
              << fixed(stats.mean_degree) << ',' << fixed(stats.second_order_average) << ',' << stats.max_degree
              << ',' << edge_excess(graph) << ',' << connected_components(graph).size() << '\n';
    return 0;
}

// --- decompose / minb -------------------------------------------------------

struct DecomposeArgs {
    std::string path;
    std::uint64_t r = 1;
    std::uint64_t mu = 5;
    std::uint64_t b = 0;  // decompose only: also report the verdict for this b
};

void print_decompose_header() { std::cout << "n,m,r,mu,b_min,z_size,p_size,s_family,max_p_component,wall_seconds\n"; }

int run_decompose(const DecomposeArgs& a, bool skeleton) {
    const auto g = read_graph_file(a.path);
    const auto& graph = g.graph();
    const auto start = std::chrono::steady_clock::now();
    const auto b_min = minimal_b(graph, a.r, a.mu);
    std::string z, p, s, maxp;
    if (skeleton) {
        const auto sk = protrusion_skeleton(graph, a.r, a.mu);
        z = std::to_string(sk.z.size());
        p = std::to_string(sk.p.size());
        s = std::to_string(sk.s_family.size());
        maxp = std::to_string(sk.max_component_size());
    }
    const auto wall = seconds_since(start);
    if (skeleton && a.b > 0) {
        const auto v = verify_brmu_partition(graph, {a.b, a.r, a.mu});
        std::cerr << "b=" << a.b << ": " << (v.pass ? "pass" : "fail");
        if (!v.pass) {
            std::cerr << " (property " << v.property << ", center v" << v.center + 1 << ", measured " << v.measured
                      << " > " << v.limit << ")";
        }
        std::cerr << '\n';
    }
    print_decompose_header();
    std::cout << graph.vertex_count() << ',' << graph.edge_count() << ',' << a.r << ',' << a.mu << ',' << b_min
              << ',' << z << ',' << p << ',' << s << ',' << maxp << ',' << fixed(wall) << '\n';
    return 0;
}

// --- kernelize --------------------------------------------------------------

struct KernelizeArgs {
    std::string path;
    std::string output;
    KernelConfig config;
};

int run_kernelize(const KernelizeArgs& a, const Globals& globals) {
    a.config.validate();
    const auto g = read_graph_file(a.path);
    RepresentativeCache cache;
    const auto result = replace_protrusions(g, a.config, cache);
    const auto& r = result.report;
    std::vector<std::string> comments{"kernel of " + std::filesystem::path(a.path).filename().string() +
                                      " q=" + std::to_string(a.config.q) + " r=" + std::to_string(a.config.r) +
                                      " mu=" + std::to_string(a.config.mu)};
    auto path = output_path(globals, a.output, "kernel.graph");
    if (path.empty()) {
        // stdout carries the report row, so the kernel lands next to the input.
        path = (std::filesystem::path(a.path).parent_path() /
                (std::filesystem::path(a.path).stem().string() + ".kernel.graph")).string();
    }
    emit_graph(path, result.graph, comments);
    std::cout << "input_vertices,input_edges,output_vertices,output_edges,protrusions_replaced,trees_reduced,"
                 "fallbacks,skipped_large,wall_seconds\n";
    std::cout << r.input_vertices << ',' << r.input_edges << ',' << r.output_vertices << ',' << r.output_edges << ','
              << r.protrusions_replaced << ',' << r.trees_reduced << ',' << r.fallbacks << ',' << r.skipped_large
              << ',' << fixed(r.wall_seconds) << '\n';
    return 0;
}

// --- check-naive / check-gnf ------------------------------------------------

int run_check_naive(const std::string& path, std::string formula, const std::string& formula_file) {
    if (formula.empty() == formula_file.empty()) throw UsageError("give exactly one of --formula or --formula-file");
    if (!formula_file.empty()) formula = read_text_file(formula_file);
    const auto g = read_graph_file(path);
    const auto phi = parse_formula(formula, std::set<std::string>{});
    if (phi.label_bound() > g.label_count()) throw UsageError("formula uses a label the graph does not have");
    const auto start = std::chrono::steady_clock::now();
    const bool sat = naive_check(g, phi);
    std::cout << (sat ? "SAT" : "UNSAT") << '\n';
    std::cout << "qrank,size,wall_seconds\n" << phi.qrank() << ',' << phi.size() << ',' << fixed(seconds_since(start))
              << '\n';
    return sat ? 0 : kExitUnsat;
}

struct GnfArgs {
    std::string graph;
    std::string sentence;
    bool no_kernel = false;
    bool no_shortcut = false;
    KernelConfig kernel;
};

int run_check_gnf(const GnfArgs& a) {
    const auto g = read_graph_file(a.graph);
    const auto psi = parse_gnf(read_text_file(a.sentence));
    for (const auto& leaf : psi.leaves) {
        if (leaf.omega.label_bound() > g.label_count()) {
            throw UsageError("leaf " + leaf.name + " uses a label the graph does not have");
        }
    }
    LocalConfig config;
    config.kernel = a.kernel;
    config.use_kernel = !a.no_kernel;
    config.diameter_shortcut = !a.no_shortcut;
    RepresentativeCache cache;
    const auto outcome = check_gnf(g, psi, config, cache);
    std::cout << (outcome.verdict ? "SAT" : "UNSAT") << '\n';
    std::cout << "leaf,r,s,w_size,components,scattered,shortcut_fired,value,wall_seconds\n";
    for (std::size_t i = 0; i < outcome.leaves.size(); ++i) {
        const auto& l = outcome.leaves[i];
        const auto& leaf = psi.leaves[i];
        std::cout << l.name << ',' << leaf.r << ',' << leaf.s << ',' << l.satisfying << ',' << l.scattered.components
                  << ',' << l.scattered.count << ',' << (l.scattered.shortcut_fired ? 1 : 0) << ','
                  << (l.value ? 1 : 0) << ',' << fixed(outcome.wall_seconds) << '\n';
    }
    return outcome.verdict ? 0 : kExitUnsat;
}

// --- experiment / selftest --------------------------------------------------

struct ExperimentArgs {
    std::string plan;
    std::string report;
    bool plots = true;
    bool verbose = false;
};

int run_experiment_cmd(const ExperimentArgs& a, const Globals& globals) {
    const auto plan = parse_plan(read_text_file(a.plan));
    const std::string dir = globals.out.empty() ? "." : globals.out;
    std::filesystem::create_directories(dir);
    RunOptions options;
    options.report_path = a.report.empty() ? (std::filesystem::path(dir) / "report.csv").string() : a.report;
    options.degree_path = (std::filesystem::path(options.report_path).parent_path() /
                           (std::filesystem::path(options.report_path).stem().string() + "_degrees.csv"))
                              .string();
    options.workers = globals.workers;
    options.quiet = !a.verbose;
    const auto summary = run_experiment(plan, options);
    std::cerr << "planned " << summary.planned << ", skipped " << summary.skipped << ", written " << summary.written
              << ", failed " << summary.failed << '\n';
    for (const auto& e : summary.errors) std::cerr << "error: " << e << '\n';
    if (a.plots) {
        for (const auto& p : emit_plots(options.report_path, options.degree_path, dir)) {
            std::cerr << "wrote " << p << '\n';
        }
    }
    return summary.failed == 0 ? 0 : kExitInternal;
}

int run_selftest_cmd(bool quick, const Globals& globals) {
    SelftestOptions options;
    options.seed = globals.seed;
    options.quick = quick;
    const auto results = run_selftest(options);
    std::cout << format_results(results);
    for (const auto& r : results) {
        if (!r.passed()) return kExitUnsat;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-order model checking on sparse random graphs"};
    app.require_subcommand(1);
    Globals globals;
    app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
    app.add_option("--out", globals.out, "Output directory");
    app.add_option("--workers", globals.workers, "Worker threads (0 = available parallelism)")->capture_default_str();
    app.fallthrough();

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Sample a random graph");
    generate_cmd->add_option("--model", gen.model, "er, chung-lu, config or pa")
        ->required()
        ->check(CLI::IsMember({"er", "chung-lu", "config", "pa"}));
    generate_cmd->add_option("--n", gen.n, "Vertex count")->required();
    generate_cmd->add_option("--alpha", gen.alpha, "Power-law exponent (chung-lu, config)")->capture_default_str();
    generate_cmd->add_option("--c", gen.c, "Weight scale (chung-lu, config)")->capture_default_str();
    generate_cmd->add_option("--p", gen.p, "Edge probability for er: 0.01, 2/n or 1.5*n^-0.5");
    generate_cmd->add_option("--m", gen.m, "Edges per new vertex (pa)")->capture_default_str();
    generate_cmd->add_option("--weights", gen.weights, "Explicit comma-separated degrees (config)");
    generate_cmd->add_option("-o,--output", gen.output, "Graph file (default: under --out, else stdout)");

    std::string stats_path;
    auto* stats_cmd = app.add_subcommand("stats", "Degree and triangle statistics");
    stats_cmd->add_option("graph", stats_path, "Graph file")->required()->check(CLI::ExistingFile);

    DecomposeArgs dec;
    auto* decompose_cmd = app.add_subcommand("decompose", "Minimal b and the protrusion skeleton");
    decompose_cmd->add_option("graph", dec.path, "Graph file")->required()->check(CLI::ExistingFile);
    decompose_cmd->add_option("--r", dec.r)->capture_default_str()->check(CLI::PositiveNumber);
    decompose_cmd->add_option("--mu", dec.mu)->capture_default_str()->check(CLI::PositiveNumber);
    decompose_cmd->add_option("--b", dec.b, "Also report the partition verdict for this b");

    DecomposeArgs minb;
    auto* minb_cmd = app.add_subcommand("minb", "Smallest b whose canonical partition verifies");
    minb_cmd->add_option("graph", minb.path, "Graph file")->required()->check(CLI::ExistingFile);
    minb_cmd->add_option("--r", minb.r)->capture_default_str()->check(CLI::PositiveNumber);
    minb_cmd->add_option("--mu", minb.mu)->capture_default_str()->check(CLI::PositiveNumber);

    KernelizeArgs ker;
    auto* kernelize_cmd = app.add_subcommand("kernelize", "Rank-q equivalent kernel");
    kernelize_cmd->add_option("graph", ker.path, "Graph file")->required()->check(CLI::ExistingFile);
    kernelize_cmd->add_option("--q", ker.config.q)->capture_default_str();
    kernelize_cmd->add_option("--r", ker.config.r)->capture_default_str()->check(CLI::PositiveNumber);
    kernelize_cmd->add_option("--mu", ker.config.mu)->capture_default_str()->check(CLI::PositiveNumber);
    kernelize_cmd->add_option("--rep-cap", ker.config.rep_cap)->capture_default_str();
    kernelize_cmd->add_option("--tree-chunk", ker.config.tree_chunk)->capture_default_str();
    kernelize_cmd->add_option("-o,--output", ker.output, "Kernel graph file");

    std::string naive_path, naive_formula, naive_file;
    auto* naive_cmd = app.add_subcommand("check-naive", "Evaluate an FO sentence directly");
    naive_cmd->add_option("graph", naive_path, "Graph file")->required()->check(CLI::ExistingFile);
    naive_cmd->add_option("--formula", naive_formula, "Sentence text");
    naive_cmd->add_option("--formula-file", naive_file, "File holding the sentence")->check(CLI::ExistingFile);

    GnfArgs gnf;
    auto* gnf_cmd = app.add_subcommand("check-gnf", "Evaluate a boolean combination of basic local sentences");
    gnf_cmd->add_option("graph", gnf.graph, "Graph file")->required()->check(CLI::ExistingFile);
    gnf_cmd->add_option("sentence", gnf.sentence, "Sentence file")->required()->check(CLI::ExistingFile);
    gnf_cmd->add_flag("--no-kernel", gnf.no_kernel, "Evaluate balls directly");
    gnf_cmd->add_flag("--no-shortcut", gnf.no_shortcut, "Disable the eccentricity shortcut");
    gnf_cmd->add_option("--mu", gnf.kernel.mu)->capture_default_str()->check(CLI::PositiveNumber);
    gnf_cmd->add_option("--rep-cap", gnf.kernel.rep_cap)->capture_default_str();

    ExperimentArgs exp;
    auto* experiment_cmd = app.add_subcommand("experiment", "Run a plan file into CSV reports and SVG plots");
    experiment_cmd->add_option("plan", exp.plan, "Plan file")->required()->check(CLI::ExistingFile);
    experiment_cmd->add_option("--report", exp.report, "Report CSV (default: <out>/report.csv)");
    experiment_cmd->add_flag("!--no-plots", exp.plots, "Skip SVG output");
    experiment_cmd->add_flag("-v,--verbose", exp.verbose, "Progress on stderr");

    bool quick = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the exhaustive small-instance suites");
    selftest_cmd->add_flag("--quick", quick, "Smaller instance counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*generate_cmd) return run_generate(gen, globals);
        if (*stats_cmd) return run_stats(stats_path);
        if (*decompose_cmd) return run_decompose(dec, true);
        if (*minb_cmd) return run_decompose(minb, false);
        if (*kernelize_cmd) return run_kernelize(ker, globals);
        if (*naive_cmd) return run_check_naive(naive_path, naive_formula, naive_file);
        if (*gnf_cmd) return run_check_gnf(gnf);
        if (*experiment_cmd) return run_experiment_cmd(exp, globals);
        if (*selftest_cmd) return run_selftest_cmd(quick, globals);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormulaSyntaxError& e) {
        std::cerr << "error: formula " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
