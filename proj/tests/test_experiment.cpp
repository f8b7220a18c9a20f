#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fomc/experiment.hpp"
#include "fomc/graph.hpp"
#include "fomc/random_models.hpp"

using namespace fomc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("fomc_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

ExperimentPlan tiny_plan() {
    return parse_plan("model=pa m=2\nn=60\nseeds=1\nmeasure=minb,triangles,degree\n");
}

std::size_t data_lines(const std::string& text) {
    std::size_t count = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("plan parsing") {
    auto plan = parse_plan(
        "# sweep\n"
        "model=chung-lu alpha=3.5 c=1\n"
        "model=er p=2/n   # trailing comment\n"
        "n = 1000, 1e4\n"
        "seeds=30\nseed_base=7\nr=2\nmu=3\nq=1\n"
        "measure=minb,kernel,mc-oracle\n");
    CHECK(plan.models.size() == 2);
    CHECK(plan.models[1].describe() == "model=er p=2/n");
    CHECK(plan.ns == std::vector<std::size_t>{1000, 10000});
    CHECK(plan.seeds == 30);
    CHECK(plan.seed_base == 7);
    CHECK(plan.r == 2);
    CHECK(plan.mu == 3);
    CHECK(plan.q == 1);
    CHECK(plan.measure == std::set<Measurement>{Measurement::MinB, Measurement::Kernel, Measurement::McOracle});
}

TEST_CASE("plan errors name the line") {
    auto message = [](const std::string& text) -> std::string {
        try {
            parse_plan(text);
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        return {};
    };
    CHECK(message("model=pa m=2\nn=10\nbogus=1\n").rfind("plan line 3", 0) == 0);
    CHECK(message("model=pa m=2\nn=-4\n").rfind("plan line 2", 0) == 0);
    CHECK(message("model=pa m=2\nn=10\nmeasure=minb,colour\n").rfind("plan line 3", 0) == 0);
    CHECK(message("model=kleinberg\nn=10\n").rfind("plan line 1", 0) == 0);
    CHECK(message("model=pa m=2\nnothing here\n").rfind("plan line 2", 0) == 0);
    CHECK_FALSE(message("n=10\n").empty());
    CHECK_FALSE(message("model=pa m=2\nn=10\nseeds=0\n").empty());
}

TEST_CASE("measurement names round trip") {
    for (auto m : {Measurement::MinB, Measurement::Skeleton, Measurement::Kernel, Measurement::Triangles,
                   Measurement::Degree, Measurement::McOracle}) {
        CHECK(parse_measurement(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_measurement("everything"), std::invalid_argument);
}

TEST_CASE("csv quoting round trips") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "", "model=er p=2/n"};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
    CHECK(csv_split(line) == fields);
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("abc") == "abc");
}

TEST_CASE("measure_run fills the requested columns") {
    auto plan = parse_plan("model=pa m=2\nn=40\nmeasure=minb,skeleton,kernel,triangles,mc-oracle\nmc_trials=3\n");
    auto row = measure_run(plan, plan.models[0], 40, 3);
    CHECK(row.at("model") == "model=pa m=2");
    CHECK(row.at("n") == "40");
    auto spec = plan.models[0];
    spec.seed = 3;
    CHECK(row.at("m") == std::to_string(generate(spec, 40).graph.edge_count()));
    CHECK_FALSE(row.at("b_min").empty());
    CHECK_FALSE(row.at("kernel_out").empty());
    CHECK(row.at("mc_agree") == "3");
    CHECK(row.at("mc_trials") == "3");
    auto again = measure_run(plan, plan.models[0], 40, 3);
    for (const auto& col : report_columns()) {
        if (col.rfind("t_", 0) != 0) CHECK(row.at(col) == again.at(col));
    }
}

TEST_CASE("one grid point gives one row and reruns are no-ops") {
    ScratchDir dir("single");
    RunOptions options;
    options.report_path = (dir.path / "report.csv").string();
    options.workers = 2;
    auto plan = tiny_plan();
    auto first = run_experiment(plan, options);
    CHECK(first.planned == 1);
    CHECK(first.written == 1);
    CHECK(first.failed == 0);
    const auto report = slurp(options.report_path);
    const auto degrees = slurp(dir.path / "report_degrees.csv");
    CHECK(data_lines(report) == 2);
    CHECK(data_lines(degrees) > 2);
    auto table = read_report(options.report_path);
    CHECK(table.columns == report_columns());
    CHECK(table.rows.size() == 1);

    auto second = run_experiment(plan, options);
    CHECK(second.skipped == 1);
    CHECK(second.written == 0);
    CHECK(slurp(options.report_path) == report);
    CHECK(slurp(dir.path / "report_degrees.csv") == degrees);
}

TEST_CASE("an interrupted run resumes without duplicates") {
    ScratchDir dir("resume");
    RunOptions options;
    options.report_path = (dir.path / "report.csv").string();
    options.workers = 1;
    auto plan = parse_plan("model=er p=2/n\nn=50,80\nseeds=2\nmeasure=triangles,degree\n");
    run_experiment(plan, options);
    const auto full_report = read_report(options.report_path);
    const auto full_degrees = slurp(dir.path / "report_degrees.csv");
    REQUIRE(full_report.rows.size() == 4);

    // Keep two finished rows, tear the third, and leave degree rows of a lost run behind.
    std::string text = slurp(options.report_path);
    std::istringstream in(text);
    std::string line, kept;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("model,", 0) != 0) {
            if (++rows > 2) {
                kept += line.substr(0, line.size() / 2);
                break;
            }
        }
        kept += line + "\n";
    }
    std::ofstream(options.report_path, std::ios::binary | std::ios::trunc) << kept;

    auto summary = run_experiment(plan, options);
    CHECK(summary.skipped == 2);
    CHECK(summary.written == 2);
    auto resumed = read_report(options.report_path);
    REQUIRE(resumed.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(resumed.rows[i][c] == full_report.rows[i][c]);
    }
    CHECK(slurp(dir.path / "report_degrees.csv") == full_degrees);
}

TEST_CASE("plots") {
    ScratchDir dir("plots");
    const auto report = (dir.path / "report.csv").string();
    const auto degrees = (dir.path / "report_degrees.csv").string();
    {
        std::ofstream out(report);
        for (std::size_t i = 0; i < report_columns().size(); ++i) out << (i ? "," : "") << report_columns()[i];
        out << "\n";
    }
    auto empty_paths = emit_plots(report, degrees, dir.path.string());
    CHECK(empty_paths.size() == 4);
    for (const auto& p : empty_paths) CHECK(slurp(p).find("no data") != std::string::npos);

    RunOptions options;
    options.report_path = report;
    fs::remove(report);
    run_experiment(tiny_plan(), options);
    auto paths = emit_plots(report, degrees, dir.path.string());
    std::vector<std::string> first;
    for (const auto& p : paths) first.push_back(slurp(p));
    const auto bmin = slurp(dir.path / "bmin_vs_n.svg");
    CHECK(bmin.find("no data") == std::string::npos);
    CHECK(bmin.find("<circle") != std::string::npos);
    auto again = emit_plots(report, degrees, dir.path.string());
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(slurp(again[i]) == first[i]);
}

TEST_CASE("Chung-Lu alpha = 3 second-order average grows like log n") {
    auto plan = parse_plan("model=chung-lu alpha=3 c=1\nn=1000\nmeasure=degree\n");
    auto average = [&](std::size_t n) {
        double sum = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            sum += std::stod(measure_run(plan, plan.models[0], n, seed).at("second_order_avg"));
        }
        return sum / 5;
    };
    const double ratio = average(10000) / average(1000);
    const double expected = std::log(10000.0) / std::log(1000.0);
    CHECK(ratio >= expected * 0.5);
    CHECK(ratio <= expected * 1.5);
}
