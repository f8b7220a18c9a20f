#include <stdexcept>

#include "fomc/oracles.hpp"

namespace fomc::oracle {

namespace {

const char* const kNames[] = {"y", "z", "u", "v", "t"};

class FormulaGenerator {
public:
    FormulaGenerator(Rng& rng, const FormulaShape& shape) : rng_(rng), shape_(shape) {}

    Formula make(std::vector<std::string>& scope, unsigned rank, unsigned depth) {
        if (scope.empty()) {
            if (rank == 0) throw std::invalid_argument("a sentence needs quantifier rank >= 1");
            return quantify(scope, rank, depth);
        }
        if (depth == 0 || rng_.uniform() < 0.25) return atom(scope);
        const double roll = rng_.uniform();
        if (rank > 0 && roll < 0.4) return quantify(scope, rank, depth);
        if (roll < 0.55) return Formula::negation(make(scope, rank, depth - 1));
        auto a = make(scope, rank, depth - 1);
        auto b = make(scope, rank, depth - 1);
        return roll < 0.8 ? Formula::conjunction(a, b) : Formula::disjunction(a, b);
    }

private:
    const std::string& pick(const std::vector<std::string>& scope) { return scope[rng_.below(scope.size())]; }

    Formula atom(const std::vector<std::string>& scope) {
        const auto kinds = shape_.labels > 0 ? 3 : 2;
        switch (rng_.below(kinds)) {
            case 0: return Formula::edge(pick(scope), pick(scope));
            case 1: return Formula::equal(pick(scope), pick(scope));
            default: return Formula::label(rng_.below(shape_.labels), pick(scope));
        }
    }

    Formula quantify(std::vector<std::string>& scope, unsigned rank, unsigned depth) {
        // Occasionally shadow a variable already in scope.
        std::string var = !scope.empty() && rng_.uniform() < 0.15 ? pick(scope) : kNames[rng_.below(5)];
        scope.push_back(var);
        auto body = make(scope, rank - 1, depth == 0 ? 0 : depth - 1);
        scope.pop_back();
        return rng_.uniform() < 0.5 ? Formula::exists(var, body) : Formula::forall(var, body);
    }

    Rng& rng_;
    const FormulaShape& shape_;
};

GnfExpr random_expr(Rng& rng, std::size_t leaves, unsigned depth) {
    if (depth == 0 || rng.uniform() < 0.35) return GnfExpr::leaf(rng.below(leaves));
    const double roll = rng.uniform();
    if (roll < 0.3) return GnfExpr::negation(random_expr(rng, leaves, depth - 1));
    auto a = random_expr(rng, leaves, depth - 1);
    auto b = random_expr(rng, leaves, depth - 1);
    return roll < 0.65 ? GnfExpr::conjunction(a, b) : GnfExpr::disjunction(a, b);
}

Formula expand_expr(const GnfExpr& e, const std::vector<Formula>& leaves) {
    switch (e.kind()) {
        case GnfExpr::Kind::Leaf: return leaves[e.leaf_index()];
        case GnfExpr::Kind::Not: return Formula::negation(expand_expr(e.child(0), leaves));
        case GnfExpr::Kind::And:
            return Formula::conjunction(expand_expr(e.child(0), leaves), expand_expr(e.child(1), leaves));
        case GnfExpr::Kind::Or:
            return Formula::disjunction(expand_expr(e.child(0), leaves), expand_expr(e.child(1), leaves));
    }
    return leaves.front();
}

}  // namespace

Formula random_formula(Rng& rng, const std::vector<std::string>& scope, const FormulaShape& shape) {
    std::vector<std::string> s = scope;
    return FormulaGenerator(rng, shape).make(s, shape.max_rank, shape.max_depth);
}

Formula random_omega(Rng& rng, const FormulaShape& shape) {
    auto f = random_formula(rng, {"x"}, shape);
    if (!f.free_variables().contains("x")) f = Formula::conjunction(f, Formula::equal("x", "x"));
    return f;
}

GnfSentence random_gnf(Rng& rng, const GnfShape& shape) {
    GnfSentence psi;
    const auto count = 1 + rng.below(shape.max_leaves);
    for (std::size_t i = 0; i < count; ++i) {
        BasicLocalSentence leaf;
        leaf.name = "b" + std::to_string(i + 1);
        leaf.r = static_cast<unsigned>(rng.below(shape.max_r + 1));
        leaf.s = static_cast<unsigned>(1 + rng.below(shape.max_s));
        leaf.omega = random_omega(rng, shape.omega);
        psi.leaves.push_back(std::move(leaf));
    }
    psi.tree = random_expr(rng, count, 3);
    return psi;
}

Formula relativize(const Formula& f, const std::string& center, unsigned r, const std::string& dist_prefix) {
    switch (f.kind()) {
        case FormulaKind::Edge:
        case FormulaKind::Label:
        case FormulaKind::Equal: return f;
        case FormulaKind::Not: return Formula::negation(relativize(f.child(0), center, r, dist_prefix));
        case FormulaKind::And:
            return Formula::conjunction(relativize(f.child(0), center, r, dist_prefix),
                                        relativize(f.child(1), center, r, dist_prefix));
        case FormulaKind::Or:
            return Formula::disjunction(relativize(f.child(0), center, r, dist_prefix),
                                        relativize(f.child(1), center, r, dist_prefix));
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            const auto& y = f.var(0);
            if (y == center) throw std::invalid_argument("relativize: formula binds the center variable");
            auto near = distance_at_most(r, center, y, dist_prefix);
            auto body = relativize(f.child(0), center, r, dist_prefix);
            if (f.kind() == FormulaKind::Exists) return Formula::exists(y, Formula::conjunction(near, body));
            return Formula::forall(y, Formula::disjunction(Formula::negation(near), body));
        }
    }
    return f;
}

Formula expand_gnf(const GnfSentence& psi) {
    std::vector<Formula> leaves;
    for (const auto& leaf : psi.leaves) {
        auto used = leaf.omega.all_variables();
        used.insert("x");
        const auto wp = fresh_prefix(used, "w");
        std::vector<std::string> w;
        for (unsigned i = 0; i < leaf.s; ++i) {
            w.push_back(wp + std::to_string(i + 1));
            used.insert(w.back());
        }
        const auto dp = fresh_prefix(used, "d");
        std::vector<Formula> local;
        for (unsigned i = 0; i < leaf.s; ++i) {
            local.push_back(relativize(substitute_free(leaf.omega, "x", w[i]), w[i], leaf.r, dp));
        }
        // Innermost first: exists w_i (omega_i & far from w_1..w_{i-1} & rest).
        std::optional<Formula> acc;
        for (unsigned i = leaf.s; i-- > 0;) {
            Formula body = local[i];
            for (unsigned j = 0; j < i; ++j) {
                body = Formula::conjunction(body, Formula::negation(distance_at_most(2 * leaf.r, w[j], w[i], dp)));
            }
            if (acc) body = Formula::conjunction(body, *acc);
            acc = Formula::exists(w[i], body);
        }
        leaves.push_back(*acc);
    }
    return expand_expr(psi.tree, leaves);
}

std::vector<Formula> hintikka_rank2_sentences(std::size_t labels) {
    if (labels > 2) throw std::invalid_argument("hintikka_rank2_sentences supports at most 2 labels");
    const std::size_t colors = std::size_t{1} << labels;
    auto color_of = [&](const std::string& v, std::size_t c) {
        Formula f = Formula::equal(v, v);
        for (std::size_t b = 0; b < labels; ++b) {
            auto atom = Formula::label(b, v);
            f = Formula::conjunction(f, (c >> b) & 1U ? atom : Formula::negation(atom));
        }
        return f;
    };
    // Atomic types of y relative to x with y != x.
    std::vector<Formula> taus;
    for (int adjacent = 0; adjacent < 2; ++adjacent) {
        for (std::size_t c = 0; c < colors; ++c) {
            auto e = Formula::edge("x", "y");
            taus.push_back(Formula::conjunction(
                Formula::conjunction(Formula::negation(Formula::equal("x", "y")), adjacent ? e : Formula::negation(e)),
                color_of("y", c)));
        }
    }
    std::vector<Formula> out;
    for (std::size_t cx = 0; cx < colors; ++cx) {
        for (std::size_t choice = 0; choice < (std::size_t{1} << taus.size()); ++choice) {
            Formula theta = color_of("x", cx);
            for (std::size_t t = 0; t < taus.size(); ++t) {
                auto ex = Formula::exists("y", taus[t]);
                theta = Formula::conjunction(theta, (choice >> t) & 1U ? ex : Formula::negation(ex));
            }
            out.push_back(Formula::exists("x", theta));
        }
    }
    return out;
}

}  // namespace fomc::oracle
