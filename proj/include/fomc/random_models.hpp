#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fomc/graph.hpp"

namespace fomc {

struct ErdosRenyi {
    // Either a constant probability or coefficient * n^exponent.
    double coefficient = 0.0;
    double exponent = 0.0;
    double probability(std::size_t n) const;
};

struct ChungLu {
    double alpha = 3.0;
    double c = 1.0;
};

/// Integer weights for the configuration model: either rounded power-law
/// weights, or an explicit list (must have exactly n entries).
struct Configuration {
    double alpha = 3.0;
    double c = 1.0;
    std::vector<std::uint64_t> explicit_weights;
};

struct PreferentialAttachment {
    std::uint32_t m = 1;
};

using ModelVariant = std::variant<ErdosRenyi, ChungLu, Configuration, PreferentialAttachment>;

struct ModelSpec {
    ModelVariant variant;
    std::uint64_t seed = 0;

    /// Validates the invariants (alpha > 2, m >= 1, ...); throws std::invalid_argument.
    void validate() const;
    /// Short model name: er, chung-lu, config, pa.
    std::string name() const;
    /// Compact key=value description used in file headers and CSV rows,
    /// e.g. "model=chung-lu alpha=3 c=1". Parsable by parse_model_description.
    std::string describe() const;
    /// Power-law exponent the model realizes, or 0 for Erdos-Renyi.
    double alpha() const;
};

/// Parses the output of ModelSpec::describe (seed handled separately).
ModelSpec parse_model_description(const std::string& text);

/// Parses an ER probability: "0.01", "2/n", "1.5*n^-0.5".
ErdosRenyi parse_er_probability(const std::string& text);

/// Generator output. Pre-erasure quantities are only meaningful for the
/// multigraph models (configuration, preferential attachment); for the
/// independent-edge models they equal the simple graph's.
struct Generated {
    Graph graph;
    std::vector<std::uint64_t> pre_erasure_degrees;
    std::uint64_t pre_erasure_edges = 0;
    bool within_precondition = true;  // Chung-Lu: max w_i^2 <= sum w_k
    std::vector<std::string> notes;
};

/// w_i = c * (n/i)^(1/(alpha-1)), i = 1..n; non-increasing.
std::vector<double> power_law_weights(std::size_t n, double alpha, double c);

Generated gen_er(std::size_t n, double p, std::uint64_t seed);
Generated gen_chung_lu(std::size_t n, double alpha, double c, std::uint64_t seed);
/// Chung-Lu on an arbitrary non-increasing weight sequence.
Generated gen_chung_lu_weights(const std::vector<double>& weights, std::uint64_t seed);
Generated gen_config(std::vector<std::uint64_t> weights, std::uint64_t seed);
Generated gen_pa(std::size_t n, std::uint32_t m, std::uint64_t seed);

/// Integer weights for the configuration model: max(1, round(w_i)).
std::vector<std::uint64_t> integer_power_law_weights(std::size_t n, double alpha, double c);

Generated generate(const ModelSpec& spec, std::size_t n);

}  // namespace fomc
