#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fomc/graph.hpp"

namespace fomc {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string detail;  // first failure, or a short summary
    double seconds = 0.0;

    bool passed() const noexcept { return failures == 0 && cases > 0; }
};

using PeelFunction = std::function<std::vector<Vertex>(const Graph&)>;

/// Rank-2 type equality against agreement on the normalized rank-2
/// sentences, both directions, on every graph with <= max_n vertices and
/// 0..max_labels labels; plus `random_sentences` random rank-<=2 sentences
/// checked in the type => agreement direction.
SuiteResult suite_qtype_faithfulness(unsigned max_n, std::size_t max_labels, std::size_t random_sentences,
                                     std::uint64_t seed);

/// Ball-based partition checks against exhaustive subgraph enumeration on
/// all connected graphs with <= max_n vertices.
SuiteResult suite_ball_reduction(unsigned max_n);

/// max_scattered against subset brute force; shortcut verdicts are also
/// re-checked with the exact search.
SuiteResult suite_scattered(std::size_t instances, std::uint64_t seed);

/// Peel witnesses, order independence and idempotence for `peel`.
SuiteResult suite_peel(const PeelFunction& peel, std::size_t graphs, std::uint64_t seed);

/// Kernel output has the input's rank-q type and agrees on random sentences.
SuiteResult suite_kernel_soundness(std::size_t graphs, std::uint64_t seed);

/// check_gnf against naive evaluation of the expanded sentence.
SuiteResult suite_oracle_equivalence(std::size_t pairs, std::uint64_t seed);

/// Local evaluation with and without kernelization agree.
SuiteResult suite_local_paths(std::size_t trials, std::uint64_t seed);

struct SelftestOptions {
    std::uint64_t seed = 1;
    bool quick = false;  // smaller instance counts
};

std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

/// One line per suite: name, PASS/FAIL, cases, failures, seconds, detail.
std::string format_results(const std::vector<SuiteResult>& results);

}  // namespace fomc
