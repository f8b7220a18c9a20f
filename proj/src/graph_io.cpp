#include "fomc/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace fomc {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

std::uint64_t parse_uint(std::string_view word, std::size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size()) {
        throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(word) + "'");
    }
    return value;
}

}  // namespace

LabeledGraph read_graph(std::string_view text) {
    std::size_t line_no = 0;
    bool have_header = false;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t l = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<Vertex>> labels;
    std::vector<std::size_t> edge_lines;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto words = split_words(line);
        if (words.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (!have_header) {
            if (words[0] != "graph" || words.size() != 4) {
                throw ParseError(line_no, "malformed header, expected 'graph <n> <m> <l>'");
            }
            n = parse_uint(words[1], line_no);
            m = parse_uint(words[2], line_no);
            l = parse_uint(words[3], line_no);
            if (n > std::numeric_limits<Vertex>::max()) throw ParseError(line_no, "vertex count too large");
            if (l > LabeledGraph::kMaxLabels) throw ParseError(line_no, "too many labels");
            labels.resize(l);
            have_header = true;
        } else if (words[0] == "e") {
            if (words.size() != 3) throw ParseError(line_no, "malformed edge line");
            auto u = parse_uint(words[1], line_no);
            auto v = parse_uint(words[2], line_no);
            if (u < 1 || u > n || v < 1 || v > n) throw ParseError(line_no, "edge index out of range");
            if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
            Edge e{static_cast<Vertex>(std::min(u, v) - 1), static_cast<Vertex>(std::max(u, v) - 1)};
            edges.push_back(e);
            edge_lines.push_back(line_no);
        } else if (words[0] == "label") {
            if (words.size() != 3) throw ParseError(line_no, "malformed label line");
            auto i = parse_uint(words[1], line_no);
            auto v = parse_uint(words[2], line_no);
            if (i < 1 || i > l) throw ParseError(line_no, "label index out of range");
            if (v < 1 || v > n) throw ParseError(line_no, "label vertex out of range");
            labels[i - 1].push_back(static_cast<Vertex>(v - 1));
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(words[0]) + "'");
        }
        if (end == text.size()) break;
    }
    if (!have_header) throw ParseError(line_no, "missing header");

    {
        std::vector<std::size_t> order(edges.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const auto& e = edges[order[i]];
            if (e == edges[order[i - 1]]) {
                throw ParseError(edge_lines[order[i]], "duplicate edge " + std::to_string(e.first + 1) + " " +
                                                           std::to_string(e.second + 1));
            }
        }
    }
    if (edges.size() != m) {
        throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " +
                                      std::to_string(edges.size()));
    }
    return LabeledGraph(Graph(n, edges), std::move(labels));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LabeledGraph read_graph_file(const std::string& path) { return read_graph(read_text_file(path)); }

std::string write_graph(const LabeledGraph& g, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    const auto& graph = g.graph();
    out += "graph " + std::to_string(graph.vertex_count()) + " " + std::to_string(graph.edge_count()) + " " +
           std::to_string(g.label_count()) + "\n";
    for (auto [u, v] : graph.edges()) out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    for (std::size_t i = 0; i < g.label_count(); ++i) {
        for (Vertex v : g.label_set(i)) out += "label " + std::to_string(i + 1) + " " + std::to_string(v + 1) + "\n";
    }
    return out;
}

void write_graph_file(const std::string& path, const LabeledGraph& g, const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << write_graph(g, comments);
}

}  // namespace fomc
