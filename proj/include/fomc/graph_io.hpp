#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fomc/graph.hpp"

namespace fomc {

/// Parse failure in a line-oriented input file; carries the 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Graph text format:
//   graph <n> <m> <l>
//   e <u> <v>         (1-based, u != v, each unordered pair once)
//   label <i> <v>     (1 <= i <= l)
// `#` starts a comment. Indices in the file are 1-based.
LabeledGraph read_graph(std::string_view text);
LabeledGraph read_graph_file(const std::string& path);

/// Edges sorted by (min,max), labels by (i,v). Each comment line is
/// emitted as `# <line>` before the header.
std::string write_graph(const LabeledGraph& g, const std::vector<std::string>& comments = {});
void write_graph_file(const std::string& path, const LabeledGraph& g,
                      const std::vector<std::string>& comments = {});

std::string read_text_file(const std::string& path);

}  // namespace fomc
