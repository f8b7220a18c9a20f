#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fomc/formula.hpp"

namespace fomc {

/// exists x_1..x_s: pairwise dist > 2r and omega(x_i) for all i, with omega
/// evaluated on the radius-r ball of its witness.
struct BasicLocalSentence {
    std::string name;
    unsigned r = 0;
    unsigned s = 1;
    Formula omega = Formula::equal("x", "x");  // exactly one free variable, "x"
};

/// Boolean combination over named leaves.
class GnfExpr {
public:
    enum class Kind : std::uint8_t { Leaf, Not, And, Or };

    static GnfExpr leaf(std::size_t index);
    static GnfExpr negation(GnfExpr e);
    static GnfExpr conjunction(GnfExpr a, GnfExpr b);
    static GnfExpr disjunction(GnfExpr a, GnfExpr b);

    Kind kind() const noexcept { return kind_; }
    std::size_t leaf_index() const noexcept { return leaf_; }
    const GnfExpr& child(std::size_t i) const noexcept { return *children_[i]; }

    /// Folds the tree given a truth value per leaf.
    template <class LeafValue>
    bool evaluate(LeafValue&& value) const {
        switch (kind_) {
            case Kind::Leaf: return value(leaf_);
            case Kind::Not: return !child(0).evaluate(value);
            case Kind::And: return child(0).evaluate(value) && child(1).evaluate(value);
            case Kind::Or: return child(0).evaluate(value) || child(1).evaluate(value);
        }
        return false;
    }

private:
    Kind kind_ = Kind::Leaf;
    std::size_t leaf_ = 0;
    std::shared_ptr<const GnfExpr> children_[2];
};

struct GnfSentence {
    std::vector<BasicLocalSentence> leaves;
    GnfExpr tree;
};

/// File format:
///   bls <name> r <int> s <int> omega "<formula in x>"
///   ...
///   sentence <boolean expression over names with & | ~ ( )>
/// Throws ParseError (with line) on an undefined leaf name, an omega whose
/// free variables are not exactly {x}, or s < 1.
GnfSentence parse_gnf(std::string_view text);

std::string to_string(const GnfSentence& s);

}  // namespace fomc
