#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fomc/graph.hpp"

namespace fomc {

class TypeCache;

/// Rank-q back-and-forth type of a graph with a designated tuple. The id is
/// hash-consed inside one TypeCache; ids from different caches are unrelated.
struct QType {
    std::uint32_t id = 0;
    std::uint16_t rank = 0;
    std::uint16_t arity = 0;
    std::uint16_t alphabet = 0;
    const TypeCache* owner = nullptr;

    friend bool operator==(const QType&, const QType&) = default;
};

/// Interning table for q-types.
///
/// Rank 0 is the atomic table of the tuple (pairwise equality, pairwise
/// adjacency, labels per entry). Rank q+1 is the rank-0 table together with
/// the set of rank-q types of all one-vertex extensions. Two designated
/// graphs get the same id iff they agree on every FO formula of quantifier
/// rank <= q in the tuple's variables.
///
/// Inserts are serialized by a mutex; issued ids never change.
class TypeCache {
public:
    static constexpr std::size_t kMaxArity = 32;

    TypeCache() = default;
    TypeCache(const TypeCache&) = delete;
    TypeCache& operator=(const TypeCache&) = delete;

    /// Cost O(|G|^q * (k+q)^2) for a k-tuple. Tuple entries may repeat.
    QType compute(const LabeledGraph& g, std::span<const Vertex> tuple, unsigned q);

    /// Cache-independent text form: nested sorted sets. Equal strings iff
    /// equal types, across caches and runs.
    std::string serialize(const QType& t) const;

    std::size_t size() const;

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
    };

    std::uint32_t intern(const std::vector<std::uint32_t>& key);
    std::string serialize_id(std::uint32_t id) const;

    mutable std::mutex mutex_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> ids_;
    std::vector<const std::vector<std::uint32_t>*> keys_;

    friend class TypeComputation;
};

QType compute_qtype(TypeCache& cache, const LabeledGraph& g, std::span<const Vertex> tuple, unsigned q);

/// Equality of ids. Throws std::invalid_argument when rank, arity, alphabet
/// or owning cache differ.
bool qtype_equal(const QType& a, const QType& b);

}  // namespace fomc
