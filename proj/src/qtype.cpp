#include "fomc/qtype.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fomc {

std::size_t TypeCache::KeyHash::operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
    for (auto w : key) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

std::uint32_t TypeCache::intern(const std::vector<std::uint32_t>& key) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
    if (inserted) keys_.push_back(&it->first);
    return it->second;
}

std::size_t TypeCache::size() const {
    std::lock_guard lock(mutex_);
    return keys_.size();
}

// Per-position atomic words: label mask (2 words), then 2 bits per earlier
// position (equal, adjacent) packed into 2 words.
class TypeComputation {
public:
    static constexpr std::size_t kWordsPerPosition = 4;

    TypeComputation(TypeCache& cache, const LabeledGraph& g) : cache_(cache), g_(g) {
        if (g.vertex_count() <= 8192) matrix_.emplace(g.graph());
    }

    bool adjacent(Vertex u, Vertex v) const { return matrix_ ? (*matrix_)(u, v) : g_.graph().has_edge(u, v); }

    struct Extension {
        std::uint64_t relation = 0;  // bit 2i: equal to entry i, bit 2i+1: adjacent to entry i
        std::uint64_t labels = 0;
        friend bool operator==(const Extension&, const Extension&) = default;
    };

    Extension extension(std::span<const Vertex> tuple, Vertex v) const {
        Extension e;
        e.labels = g_.label_mask(v);
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (tuple[i] == v) e.relation |= std::uint64_t{1} << (2 * i);
            else if (adjacent(tuple[i], v)) e.relation |= std::uint64_t{1} << (2 * i + 1);
        }
        return e;
    }

    static void append(std::vector<std::uint32_t>& atomic, const Extension& e) {
        atomic.push_back(static_cast<std::uint32_t>(e.labels));
        atomic.push_back(static_cast<std::uint32_t>(e.labels >> 32));
        atomic.push_back(static_cast<std::uint32_t>(e.relation));
        atomic.push_back(static_cast<std::uint32_t>(e.relation >> 32));
    }

    void header_and_atomic(std::vector<std::uint32_t>& key, unsigned q, std::size_t arity,
                           const std::vector<std::uint32_t>& atomic) const {
        key.clear();
        key.push_back(q);
        key.push_back(static_cast<std::uint32_t>(arity));
        key.push_back(static_cast<std::uint32_t>(g_.label_count()));
        key.insert(key.end(), atomic.begin(), atomic.end());
    }

    std::uint32_t type_of(std::vector<Vertex>& tuple, std::vector<std::uint32_t>& atomic, unsigned q) {
        std::vector<std::uint32_t> key;
        header_and_atomic(key, q, tuple.size(), atomic);
        if (q == 0) return cache_.intern(key);

        std::vector<std::uint32_t> children;
        const auto n = static_cast<Vertex>(g_.vertex_count());
        if (q == 1) {
            // Rank-0 children depend only on the extension code.
            std::vector<Extension> distinct;
            for (Vertex v = 0; v < n; ++v) {
                auto e = extension(tuple, v);
                if (std::find(distinct.begin(), distinct.end(), e) == distinct.end()) distinct.push_back(e);
            }
            std::vector<std::uint32_t> child_key;
            for (const auto& e : distinct) {
                header_and_atomic(child_key, 0, tuple.size() + 1, atomic);
                append(child_key, e);
                children.push_back(cache_.intern(child_key));
            }
        } else {
            children.reserve(n);
            for (Vertex v = 0; v < n; ++v) {
                auto e = extension(tuple, v);
                tuple.push_back(v);
                append(atomic, e);
                children.push_back(type_of(tuple, atomic, q - 1));
                atomic.resize(atomic.size() - kWordsPerPosition);
                tuple.pop_back();
            }
        }
        std::sort(children.begin(), children.end());
        children.erase(std::unique(children.begin(), children.end()), children.end());
        key.insert(key.end(), children.begin(), children.end());
        return cache_.intern(key);
    }

private:
    TypeCache& cache_;
    const LabeledGraph& g_;
    std::optional<AdjacencyMatrix> matrix_;
};

QType TypeCache::compute(const LabeledGraph& g, std::span<const Vertex> tuple, unsigned q) {
    if (tuple.size() + q > kMaxArity) throw std::invalid_argument("tuple arity plus rank exceeds 32");
    for (Vertex v : tuple) {
        if (v >= g.vertex_count()) throw std::invalid_argument("designated vertex out of range");
    }
    TypeComputation comp(*this, g);
    std::vector<Vertex> current;
    std::vector<std::uint32_t> atomic;
    for (Vertex v : tuple) {
        auto e = comp.extension(current, v);
        current.push_back(v);
        TypeComputation::append(atomic, e);
    }
    QType t;
    t.id = comp.type_of(current, atomic, q);
    t.rank = static_cast<std::uint16_t>(q);
    t.arity = static_cast<std::uint16_t>(tuple.size());
    t.alphabet = static_cast<std::uint16_t>(g.label_count());
    t.owner = this;
    return t;
}

std::string TypeCache::serialize_id(std::uint32_t id) const {
    const std::vector<std::uint32_t>* key;
    {
        std::lock_guard lock(mutex_);
        key = keys_.at(id);
    }
    const auto q = (*key)[0];
    const auto arity = (*key)[1];
    const std::size_t atomic_end = 3 + TypeComputation::kWordsPerPosition * arity;
    std::ostringstream os;
    os << "(" << std::hex;
    for (std::size_t i = 1; i < atomic_end; ++i) os << (i > 1 ? "." : "") << (*key)[i];
    os << std::dec;
    if (q > 0) {
        std::vector<std::string> children;
        for (std::size_t i = atomic_end; i < key->size(); ++i) children.push_back(serialize_id((*key)[i]));
        std::sort(children.begin(), children.end());
        os << "{";
        for (std::size_t i = 0; i < children.size(); ++i) os << (i ? "," : "") << children[i];
        os << "}";
    }
    os << ")";
    return os.str();
}

std::string TypeCache::serialize(const QType& t) const {
    if (t.owner != this) throw std::invalid_argument("type belongs to a different cache");
    return serialize_id(t.id);
}

QType compute_qtype(TypeCache& cache, const LabeledGraph& g, std::span<const Vertex> tuple, unsigned q) {
    return cache.compute(g, tuple, q);
}

bool qtype_equal(const QType& a, const QType& b) {
    if (a.owner != b.owner) throw std::invalid_argument("q-types from different caches");
    if (a.rank != b.rank) throw std::invalid_argument("q-types of different rank");
    if (a.arity != b.arity) throw std::invalid_argument("q-types of different tuple arity");
    if (a.alphabet != b.alphabet) throw std::invalid_argument("q-types over different label alphabets");
    return a.id == b.id;
}

}  // namespace fomc
