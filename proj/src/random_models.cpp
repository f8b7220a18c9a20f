#include "fomc/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "fomc/rng.hpp"

namespace fomc {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string format_real(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

// Number of failures before the next success of a Bernoulli(p) sequence.
std::uint64_t geometric_skip(Rng& rng, double p) {
    if (p >= 1.0) {
        rng.next();
        return 0;
    }
    const double u = rng.uniform();
    const double k = std::floor(std::log1p(-u) / std::log1p(-p));
    return k > 1e18 ? std::uint64_t{1} << 62 : static_cast<std::uint64_t>(k);
}

Generated finish_simple(std::size_t n, std::vector<Edge> edges) {
    Generated out;
    out.graph = Graph(n, edges);
    out.pre_erasure_edges = out.graph.edge_count();
    out.pre_erasure_degrees.resize(n);
    for (Vertex v = 0; v < n; ++v) out.pre_erasure_degrees[v] = out.graph.degree(v);
    return out;
}

}  // namespace

double ErdosRenyi::probability(std::size_t n) const {
    double p = coefficient * (exponent == 0.0 ? 1.0 : std::pow(static_cast<double>(n), exponent));
    return std::clamp(p, 0.0, 1.0);
}

ErdosRenyi parse_er_probability(const std::string& text) {
    static const std::regex constant(R"(\s*([0-9.eE+-]+)\s*)");
    static const std::regex over_n(R"(\s*([0-9.eE+-]+)\s*/\s*n\s*)");
    static const std::regex power(R"(\s*([0-9.eE+-]+)\s*\*\s*n\s*\^\s*([0-9.eE+-]+)\s*)");
    std::smatch m;
    try {
        if (std::regex_match(text, m, over_n)) return {std::stod(m[1]), -1.0};
        if (std::regex_match(text, m, power)) return {std::stod(m[1]), std::stod(m[2])};
        if (std::regex_match(text, m, constant)) return {std::stod(m[1]), 0.0};
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("cannot parse probability '" + text + "' (use p, c/n or c*n^e)");
}

void ModelSpec::validate() const {
    std::visit(Overloaded{
                   [](const ErdosRenyi& er) {
                       if (er.coefficient < 0) throw std::invalid_argument("ER probability must be >= 0");
                   },
                   [](const ChungLu& cl) {
                       if (!(cl.alpha > 2)) throw std::invalid_argument("Chung-Lu requires alpha > 2");
                       if (!(cl.c > 0)) throw std::invalid_argument("Chung-Lu requires c > 0");
                   },
                   [](const Configuration& cf) {
                       if (cf.explicit_weights.empty()) {
                           if (!(cf.alpha > 2)) throw std::invalid_argument("configuration requires alpha > 2");
                           if (!(cf.c > 0)) throw std::invalid_argument("configuration requires c > 0");
                       }
                       for (auto w : cf.explicit_weights) {
                           if (w == 0) throw std::invalid_argument("configuration weights must be positive");
                       }
                   },
                   [](const PreferentialAttachment& pa) {
                       if (pa.m < 1) throw std::invalid_argument("preferential attachment requires m >= 1");
                   },
               },
               variant);
}

std::string ModelSpec::name() const {
    return std::visit(Overloaded{
                          [](const ErdosRenyi&) { return std::string("er"); },
                          [](const ChungLu&) { return std::string("chung-lu"); },
                          [](const Configuration&) { return std::string("config"); },
                          [](const PreferentialAttachment&) { return std::string("pa"); },
                      },
                      variant);
}

std::string ModelSpec::describe() const {
    return std::visit(
        Overloaded{
            [](const ErdosRenyi& er) {
                std::string p = format_real(er.coefficient);
                if (er.exponent == -1.0) p += "/n";
                else if (er.exponent != 0.0) p += "*n^" + format_real(er.exponent);
                return "model=er p=" + p;
            },
            [](const ChungLu& cl) { return "model=chung-lu alpha=" + format_real(cl.alpha) + " c=" + format_real(cl.c); },
            [](const Configuration& cf) {
                if (!cf.explicit_weights.empty()) {
                    std::string w;
                    for (auto x : cf.explicit_weights) w += (w.empty() ? "" : ",") + std::to_string(x);
                    return "model=config weights=" + w;
                }
                return "model=config alpha=" + format_real(cf.alpha) + " c=" + format_real(cf.c);
            },
            [](const PreferentialAttachment& pa) { return "model=pa m=" + std::to_string(pa.m); },
        },
        variant);
}

double ModelSpec::alpha() const {
    return std::visit(Overloaded{
                          [](const ErdosRenyi&) { return 0.0; },
                          [](const ChungLu& cl) { return cl.alpha; },
                          [](const Configuration& cf) { return cf.explicit_weights.empty() ? cf.alpha : 0.0; },
                          [](const PreferentialAttachment&) { return 3.0; },
                      },
                      variant);
}

ModelSpec parse_model_description(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + token + "'");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    ModelSpec spec;
    const auto model = get("model", "");
    if (model == "er") {
        spec.variant = parse_er_probability(get("p", "0"));
    } else if (model == "chung-lu") {
        spec.variant = ChungLu{std::stod(get("alpha", "3")), std::stod(get("c", "1"))};
    } else if (model == "config") {
        Configuration cf{std::stod(get("alpha", "3")), std::stod(get("c", "1")), {}};
        if (auto w = get("weights", ""); !w.empty()) {
            std::istringstream ws(w);
            std::string item;
            while (std::getline(ws, item, ',')) cf.explicit_weights.push_back(std::stoull(item));
        }
        spec.variant = cf;
    } else if (model == "pa") {
        spec.variant = PreferentialAttachment{static_cast<std::uint32_t>(std::stoul(get("m", "1")))};
    } else {
        throw std::invalid_argument("unknown model '" + model + "' (er, chung-lu, config, pa)");
    }
    if (auto s = get("seed", ""); !s.empty()) spec.seed = std::stoull(s);
    spec.validate();
    return spec;
}

std::vector<double> power_law_weights(std::size_t n, double alpha, double c) {
    if (!(alpha > 2)) throw std::invalid_argument("power-law weights require alpha > 2");
    if (!(c > 0)) throw std::invalid_argument("power-law weights require c > 0");
    std::vector<double> w(n);
    const double exponent = 1.0 / (alpha - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = c * std::pow(static_cast<double>(n) / static_cast<double>(i + 1), exponent);
    }
    return w;
}

std::vector<std::uint64_t> integer_power_law_weights(std::size_t n, double alpha, double c) {
    auto real = power_law_weights(n, alpha, c);
    std::vector<std::uint64_t> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(real[i])));
    return w;
}

Generated gen_er(std::size_t n, double p, std::uint64_t seed) {
    // Pairs (i,j), i<j, visited in lexicographic order; geometric skips
    // jump over the non-edges so the stream is consumed in pair order.
    std::vector<Edge> edges;
    if (n >= 2 && p > 0) {
        Rng rng(seed);
        std::size_t i = 0;
        std::size_t j = 1;
        while (true) {
            std::uint64_t skip = geometric_skip(rng, p);
            while (i + 1 < n && j + skip >= n) {
                skip -= n - j;
                ++i;
                j = i + 1;
            }
            if (i + 1 >= n) break;
            j += skip;
            edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
            if (++j >= n) {
                ++i;
                j = i + 1;
                if (i + 1 >= n) break;
            }
        }
    }
    return finish_simple(n, std::move(edges));
}

Generated gen_chung_lu_weights(const std::vector<double>& w, std::uint64_t seed) {
    const std::size_t n = w.size();
    double total = 0.0;
    double max_w = 0.0;
    for (double x : w) {
        total += x;
        max_w = std::max(max_w, x);
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (w[i] > w[i - 1]) throw std::invalid_argument("Chung-Lu weights must be non-increasing");
    }
    // Per-row skip sampling (Miller & Hagberg): within row i the edge
    // probability is non-increasing in j, so skipping with the current
    // probability and thinning by q/p is exact.
    std::vector<Edge> edges;
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < n && total > 0; ++i) {
        std::size_t j = i + 1;
        double p = std::min(1.0, w[i] * w[j] / total);
        while (j < n && p > 0) {
            if (p < 1.0) {
                const std::uint64_t skip = geometric_skip(rng, p);
                if (skip >= n - j) break;
                j += skip;
            }
            const double q = std::min(1.0, w[i] * w[j] / total);
            if (rng.uniform() < q / p) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
            p = q;
            ++j;
        }
    }
    auto out = finish_simple(n, std::move(edges));
    out.within_precondition = max_w * max_w <= total;
    if (!out.within_precondition) {
        out.notes.push_back("chung-lu: max w_i^2 > sum w_k; edge probabilities clamped at 1");
    }
    return out;
}

Generated gen_chung_lu(std::size_t n, double alpha, double c, std::uint64_t seed) {
    return gen_chung_lu_weights(power_law_weights(n, alpha, c), seed);
}

Generated gen_config(std::vector<std::uint64_t> weights, std::uint64_t seed) {
    const std::size_t n = weights.size();
    Generated out;
    if (n == 0) return out;
    for (auto w : weights) {
        if (w == 0) throw std::invalid_argument("configuration weights must be positive");
    }
    std::uint64_t sum = 0;
    for (auto w : weights) sum += w;
    if (sum % 2 == 1) {
        ++weights.back();
        ++sum;
        out.notes.push_back("config: odd stub total, w_n incremented to " + std::to_string(weights.back()));
    }
    std::vector<Vertex> stubs;
    stubs.reserve(sum);
    for (std::size_t i = 0; i < n; ++i) stubs.insert(stubs.end(), weights[i], static_cast<Vertex>(i));

    Rng rng(seed);
    for (std::size_t k = stubs.size(); k > 1; --k) std::swap(stubs[k - 1], stubs[rng.below(k)]);

    std::vector<Edge> multi;
    multi.reserve(sum / 2);
    out.pre_erasure_degrees.assign(n, 0);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        multi.emplace_back(stubs[k], stubs[k + 1]);
        ++out.pre_erasure_degrees[stubs[k]];
        ++out.pre_erasure_degrees[stubs[k + 1]];
    }
    out.pre_erasure_edges = multi.size();
    out.graph = Graph::erased(n, std::move(multi));
    return out;
}

Generated gen_pa(std::size_t n, std::uint32_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("preferential attachment requires m >= 1");
    // G_1^{mn}: step t adds mini-vertex t with one edge whose far endpoint is
    // drawn from the endpoint list including t's own fresh stub, i.e. old
    // vertex i with probability deg(i)/(2t+1) and t itself with 1/(2t+1).
    const std::uint64_t total = static_cast<std::uint64_t>(n) * m;
    std::vector<std::uint64_t> endpoints;
    endpoints.reserve(2 * total);
    std::vector<Edge> multi;
    multi.reserve(total);
    Generated out;
    out.pre_erasure_degrees.assign(n, 0);
    Rng rng(seed);
    for (std::uint64_t t = 0; t < total; ++t) {
        endpoints.push_back(t);
        const std::uint64_t target = endpoints[rng.below(endpoints.size())];
        endpoints.push_back(target);
        const auto a = static_cast<Vertex>(t / m);
        const auto b = static_cast<Vertex>(target / m);
        multi.emplace_back(a, b);
        ++out.pre_erasure_degrees[a];
        ++out.pre_erasure_degrees[b];
    }
    out.pre_erasure_edges = multi.size();
    out.graph = Graph::erased(n, std::move(multi));
    return out;
}

Generated generate(const ModelSpec& spec, std::size_t n) {
    spec.validate();
    return std::visit(Overloaded{
                          [&](const ErdosRenyi& er) { return gen_er(n, er.probability(n), spec.seed); },
                          [&](const ChungLu& cl) { return gen_chung_lu(n, cl.alpha, cl.c, spec.seed); },
                          [&](const Configuration& cf) {
                              if (!cf.explicit_weights.empty()) {
                                  if (cf.explicit_weights.size() != n) {
                                      throw std::invalid_argument("explicit configuration weights need n entries");
                                  }
                                  return gen_config(cf.explicit_weights, spec.seed);
                              }
                              return gen_config(integer_power_law_weights(n, cf.alpha, cf.c), spec.seed);
                          },
                          [&](const PreferentialAttachment& pa) { return gen_pa(n, pa.m, spec.seed); },
                      },
                      spec.variant);
}

}  // namespace fomc
