#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fomc/graph.hpp"

namespace fomc {

enum class FormulaKind : std::uint8_t { Edge, Label, Equal, Not, And, Or, Exists, Forall };

/// Immutable first-order formula over labeled graphs. Nodes are shared, so
/// copies are cheap. Label atoms store the 0-based label index (printed as
/// P<index+1>).
class Formula {
public:
    static Formula edge(std::string x, std::string y);
    static Formula label(std::size_t index, std::string x);
    static Formula equal(std::string x, std::string y);
    static Formula negation(Formula f);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);

    FormulaKind kind() const noexcept { return node_->kind; }
    /// Atom arguments (index 0/1) or the bound variable of a quantifier (index 0).
    const std::string& var(std::size_t i = 0) const noexcept { return node_->vars[i]; }
    std::size_t label_index() const noexcept { return node_->label; }
    const Formula& child(std::size_t i = 0) const noexcept { return *node_->children[i]; }

    /// Maximum quantifier nesting depth.
    unsigned qrank() const noexcept { return node_->qrank; }
    /// Token count of the canonical printing.
    std::size_t size() const noexcept { return node_->size; }
    /// Largest label index + 1 used anywhere (0 if none).
    std::size_t label_bound() const noexcept { return node_->label_bound; }

    std::set<std::string> free_variables() const;
    /// Every variable name occurring, bound or free.
    std::set<std::string> all_variables() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        FormulaKind kind;
        std::size_t label = 0;
        std::string vars[2];
        std::shared_ptr<const Formula> children[2];
        unsigned qrank = 0;
        std::size_t size = 1;
        std::size_t label_bound = 0;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Node node);

    std::shared_ptr<const Node> node_;
};

class FormulaSyntaxError : public std::runtime_error {
public:
    FormulaSyntaxError(std::size_t position, const std::string& what)
        : std::runtime_error("position " + std::to_string(position) + ": " + what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Grammar: E(x,y) | Pk(x) | x=y | ~f | (f & g) | (f | g) | exists v. f |
/// forall v. f | distgt k (x,y). `&` binds tighter than `|` inside parentheses.
/// `distgt k (x,y)` is expanded on the spot into pure FO. If `allowed_free`
/// is given, any other free variable is an error.
Formula parse_formula(std::string_view text, const std::optional<std::set<std::string>>& allowed_free = std::nullopt);

/// Canonical printing; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);

/// dist(x,y) <= k as a pure FO formula: halving the path at a fresh middle
/// vertex, so its quantifier rank is ceil(log2 k) for k >= 2 and 0 otherwise.
/// Bound variables are `<prefix>1`, `<prefix>2`, ...
Formula distance_at_most(unsigned k, const std::string& x, const std::string& y, const std::string& prefix);
/// Quantifier rank of distance_at_most(k, ...).
unsigned distance_formula_rank(unsigned k);

/// A variable prefix such that no name in `used` starts with it.
std::string fresh_prefix(const std::set<std::string>& used, std::string base);

/// Renames free occurrences of `from` to `to`. `to` must not be bound
/// anywhere in f (callers pass fresh names).
Formula substitute_free(const Formula& f, const std::string& from, const std::string& to);

using Assignment = std::map<std::string, Vertex>;

/// Tarskian evaluation by recursive enumeration of vertices. Throws
/// std::invalid_argument on an unassigned free variable or a label index
/// outside the graph's alphabet.
bool naive_check(const LabeledGraph& g, const Formula& phi, const Assignment& assignment = {});

}  // namespace fomc
