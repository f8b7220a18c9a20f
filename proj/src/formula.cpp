#include "fomc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iterator>
#include <vector>

namespace fomc {

Formula Formula::make(Node node) {
    switch (node.kind) {
        case FormulaKind::Edge: node.size = 6; break;
        case FormulaKind::Label:
            node.size = 4;
            node.label_bound = node.label + 1;
            break;
        case FormulaKind::Equal: node.size = 3; break;
        case FormulaKind::Not:
            node.qrank = node.children[0]->qrank();
            node.size = 1 + node.children[0]->size();
            node.label_bound = node.children[0]->label_bound();
            break;
        case FormulaKind::And:
        case FormulaKind::Or:
            node.qrank = std::max(node.children[0]->qrank(), node.children[1]->qrank());
            node.size = 3 + node.children[0]->size() + node.children[1]->size();
            node.label_bound = std::max(node.children[0]->label_bound(), node.children[1]->label_bound());
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            node.qrank = 1 + node.children[0]->qrank();
            node.size = 3 + node.children[0]->size();
            node.label_bound = node.children[0]->label_bound();
            break;
    }
    return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::edge(std::string x, std::string y) {
    Node n{};
    n.kind = FormulaKind::Edge;
    n.vars[0] = std::move(x);
    n.vars[1] = std::move(y);
    return make(std::move(n));
}

Formula Formula::label(std::size_t index, std::string x) {
    Node n{};
    n.kind = FormulaKind::Label;
    n.label = index;
    n.vars[0] = std::move(x);
    return make(std::move(n));
}

Formula Formula::equal(std::string x, std::string y) {
    Node n{};
    n.kind = FormulaKind::Equal;
    n.vars[0] = std::move(x);
    n.vars[1] = std::move(y);
    return make(std::move(n));
}

Formula Formula::negation(Formula f) {
    Node n{};
    n.kind = FormulaKind::Not;
    n.children[0] = std::make_shared<const Formula>(std::move(f));
    return make(std::move(n));
}

Formula Formula::conjunction(Formula a, Formula b) {
    Node n{};
    n.kind = FormulaKind::And;
    n.children[0] = std::make_shared<const Formula>(std::move(a));
    n.children[1] = std::make_shared<const Formula>(std::move(b));
    return make(std::move(n));
}

Formula Formula::disjunction(Formula a, Formula b) {
    Node n{};
    n.kind = FormulaKind::Or;
    n.children[0] = std::make_shared<const Formula>(std::move(a));
    n.children[1] = std::make_shared<const Formula>(std::move(b));
    return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
    Node n{};
    n.kind = FormulaKind::Exists;
    n.vars[0] = std::move(var);
    n.children[0] = std::make_shared<const Formula>(std::move(body));
    return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
    Node n{};
    n.kind = FormulaKind::Forall;
    n.vars[0] = std::move(var);
    n.children[0] = std::make_shared<const Formula>(std::move(body));
    return make(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FormulaKind::Edge:
        case FormulaKind::Equal: return a.var(0) == b.var(0) && a.var(1) == b.var(1);
        case FormulaKind::Label: return a.label_index() == b.label_index() && a.var(0) == b.var(0);
        case FormulaKind::Not: return a.child(0) == b.child(0);
        case FormulaKind::And:
        case FormulaKind::Or: return a.child(0) == b.child(0) && a.child(1) == b.child(1);
        case FormulaKind::Exists:
        case FormulaKind::Forall: return a.var(0) == b.var(0) && a.child(0) == b.child(0);
    }
    return false;
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
    auto note = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
    };
    switch (f.kind()) {
        case FormulaKind::Edge:
        case FormulaKind::Equal:
            note(f.var(0));
            note(f.var(1));
            break;
        case FormulaKind::Label: note(f.var(0)); break;
        case FormulaKind::Not: collect_free(f.child(0), bound, out); break;
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_free(f.child(0), bound, out);
            collect_free(f.child(1), bound, out);
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            bound.push_back(f.var(0));
            collect_free(f.child(0), bound, out);
            bound.pop_back();
            break;
    }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Edge:
        case FormulaKind::Equal:
            out.insert(f.var(0));
            out.insert(f.var(1));
            break;
        case FormulaKind::Label: out.insert(f.var(0)); break;
        case FormulaKind::Not: collect_all(f.child(0), out); break;
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_all(f.child(0), out);
            collect_all(f.child(1), out);
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            out.insert(f.var(0));
            collect_all(f.child(0), out);
            break;
    }
}

}  // namespace

std::set<std::string> Formula::free_variables() const {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(*this, bound, out);
    return out;
}

std::set<std::string> Formula::all_variables() const {
    std::set<std::string> out;
    collect_all(*this, out);
    return out;
}

namespace {

void print(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case FormulaKind::Edge: out += "E(" + f.var(0) + "," + f.var(1) + ")"; break;
        case FormulaKind::Label: out += "P" + std::to_string(f.label_index() + 1) + "(" + f.var(0) + ")"; break;
        case FormulaKind::Equal: out += f.var(0) + "=" + f.var(1); break;
        case FormulaKind::Not:
            out += "~";
            print(f.child(0), out);
            break;
        case FormulaKind::And:
        case FormulaKind::Or:
            out += "(";
            print(f.child(0), out);
            out += f.kind() == FormulaKind::And ? " & " : " | ";
            print(f.child(1), out);
            out += ")";
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            out += f.kind() == FormulaKind::Exists ? "exists " : "forall ";
            out += f.var(0) + ". ";
            print(f.child(0), out);
            break;
    }
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {
        // Names used anywhere in the text; distgt expansions must avoid them.
        for (std::size_t i = 0; i < text.size();) {
            if (is_ident_start(text[i])) {
                std::size_t j = i;
                while (j < text.size() && is_ident_char(text[j])) ++j;
                used_.insert(std::string(text.substr(i, j - i)));
                i = j;
            } else {
                ++i;
            }
        }
        prefix_ = fresh_prefix(used_, "_d");
    }

    Formula parse() {
        Formula f = unary();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw FormulaSyntaxError(pos_, what); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string identifier() {
        skip_ws();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected a variable name");
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    long long integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '-')) fail("expected an integer");
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }

    // Identifier at the cursor without consuming it.
    std::string_view lookahead_word() {
        skip_ws();
        std::size_t j = pos_;
        while (j < text_.size() && is_ident_char(text_[j])) ++j;
        return text_.substr(pos_, j - pos_);
    }

    Formula unary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of formula");
        if (text_[pos_] == '~') {
            ++pos_;
            return Formula::negation(unary());
        }
        if (text_[pos_] == '(') {
            ++pos_;
            Formula f = disjunction();
            expect(')');
            return f;
        }
        auto word = lookahead_word();
        if (word == "exists" || word == "forall") {
            pos_ += word.size();
            const bool is_exists = word == "exists";
            std::string var = identifier();
            expect('.');
            Formula body = unary();
            return is_exists ? Formula::exists(var, body) : Formula::forall(var, body);
        }
        if (word == "distgt") {
            const std::size_t at = pos_;
            pos_ += word.size();
            long long k = integer();
            if (k < 0) {
                pos_ = at;
                fail("distgt radius must be >= 0");
            }
            expect('(');
            std::string x = identifier();
            expect(',');
            std::string y = identifier();
            expect(')');
            return Formula::negation(distance_at_most(static_cast<unsigned>(k), x, y, prefix_));
        }
        return atom();
    }

    Formula atom() {
        std::string name = identifier();
        if (peek('(')) {
            ++pos_;
            if (name == "E") {
                std::string x = identifier();
                expect(',');
                std::string y = identifier();
                expect(')');
                return Formula::edge(x, y);
            }
            if (name.size() >= 2 && name[0] == 'P' &&
                std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                const auto index = std::stoull(name.substr(1));
                if (index < 1) fail("label indices start at 1");
                std::string x = identifier();
                expect(')');
                return Formula::label(index - 1, x);
            }
            fail("unknown predicate '" + name + "'");
        }
        if (peek('=')) {
            ++pos_;
            return Formula::equal(name, identifier());
        }
        fail("expected an atom after '" + name + "'");
    }

    Formula conjunction() {
        Formula f = unary();
        while (peek('&')) {
            ++pos_;
            f = Formula::conjunction(f, unary());
        }
        return f;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (peek('|')) {
            ++pos_;
            f = Formula::disjunction(f, conjunction());
        }
        return f;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::set<std::string> used_;
    std::string prefix_;
};

}  // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print(f, out);
    return out;
}

Formula parse_formula(std::string_view text, const std::optional<std::set<std::string>>& allowed_free) {
    Formula f = Parser(text).parse();
    if (allowed_free) {
        for (const auto& v : f.free_variables()) {
            if (!allowed_free->contains(v)) throw FormulaSyntaxError(0, "unbound variable '" + v + "'");
        }
    }
    return f;
}

std::string fresh_prefix(const std::set<std::string>& used, std::string base) {
    auto clashes = [&](const std::string& p) {
        return std::any_of(used.begin(), used.end(), [&](const std::string& v) { return v.starts_with(p); });
    };
    while (clashes(base)) base += "_";
    return base;
}

namespace {

Formula distance_rec(unsigned k, const std::string& x, const std::string& y, const std::string& prefix,
                     unsigned level) {
    if (k == 0) return Formula::equal(x, y);
    if (k == 1) return Formula::disjunction(Formula::equal(x, y), Formula::edge(x, y));
    const std::string mid = prefix + std::to_string(level);
    return Formula::exists(mid, Formula::conjunction(distance_rec((k + 1) / 2, x, mid, prefix, level + 1),
                                                     distance_rec(k / 2, mid, y, prefix, level + 1)));
}

}  // namespace

Formula distance_at_most(unsigned k, const std::string& x, const std::string& y, const std::string& prefix) {
    return distance_rec(k, x, y, prefix, 1);
}

unsigned distance_formula_rank(unsigned k) {
    unsigned rank = 0;
    while (k > 1) {
        k = (k + 1) / 2;
        ++rank;
    }
    return rank;
}

Formula substitute_free(const Formula& f, const std::string& from, const std::string& to) {
    auto swap_var = [&](const std::string& v) { return v == from ? to : v; };
    switch (f.kind()) {
        case FormulaKind::Edge: return Formula::edge(swap_var(f.var(0)), swap_var(f.var(1)));
        case FormulaKind::Equal: return Formula::equal(swap_var(f.var(0)), swap_var(f.var(1)));
        case FormulaKind::Label: return Formula::label(f.label_index(), swap_var(f.var(0)));
        case FormulaKind::Not: return Formula::negation(substitute_free(f.child(0), from, to));
        case FormulaKind::And:
            return Formula::conjunction(substitute_free(f.child(0), from, to), substitute_free(f.child(1), from, to));
        case FormulaKind::Or:
            return Formula::disjunction(substitute_free(f.child(0), from, to), substitute_free(f.child(1), from, to));
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            if (f.var(0) == from) return f;
            return f.kind() == FormulaKind::Exists ? Formula::exists(f.var(0), substitute_free(f.child(0), from, to))
                                                   : Formula::forall(f.var(0), substitute_free(f.child(0), from, to));
    }
    return f;
}

namespace {

// Flattened formula with variables resolved to environment slots.
struct Program {
    struct Op {
        FormulaKind kind;
        std::uint32_t a = 0;  // slot / child index
        std::uint32_t b = 0;
        std::size_t label = 0;
        std::vector<std::uint32_t> free;  // slots read below this op and bound above it
    };
    std::vector<Op> ops;
    std::size_t slots = 0;
};

class Compiler {
public:
    Compiler(Program& program, const Assignment& assignment) : program_(program) {
        for (const auto& [name, v] : assignment) {
            scope_.emplace_back(name, static_cast<std::uint32_t>(free_values.size()));
            free_values.push_back(v);
        }
        program_.slots = free_values.size();
    }

    std::uint32_t compile(const Formula& f) {
        Program::Op op{};
        op.kind = f.kind();
        switch (f.kind()) {
            case FormulaKind::Edge:
            case FormulaKind::Equal:
                op.a = lookup(f.var(0));
                op.b = lookup(f.var(1));
                op.free = {std::min(op.a, op.b), std::max(op.a, op.b)};
                if (op.a == op.b) op.free.pop_back();
                break;
            case FormulaKind::Label:
                op.a = lookup(f.var(0));
                op.label = f.label_index();
                op.free = {op.a};
                break;
            case FormulaKind::Not:
                op.a = compile(f.child(0));
                op.free = program_.ops[op.a].free;
                break;
            case FormulaKind::And:
            case FormulaKind::Or: {
                op.a = compile(f.child(0));
                op.b = compile(f.child(1));
                const auto& fa = program_.ops[op.a].free;
                const auto& fb = program_.ops[op.b].free;
                std::set_union(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(op.free));
                break;
            }
            case FormulaKind::Exists:
            case FormulaKind::Forall: {
                const auto slot = static_cast<std::uint32_t>(program_.slots++);
                scope_.emplace_back(f.var(0), slot);
                op.a = slot;
                op.b = compile(f.child(0));
                scope_.pop_back();
                for (auto s : program_.ops[op.b].free) {
                    if (s != slot) op.free.push_back(s);
                }
                break;
            }
        }
        program_.ops.push_back(op);
        return static_cast<std::uint32_t>(program_.ops.size() - 1);
    }

    std::vector<Vertex> free_values;

private:
    std::uint32_t lookup(const std::string& name) {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == name) return it->second;
        }
        throw std::invalid_argument("unassigned free variable '" + name + "'");
    }

    Program& program_;
    std::vector<std::pair<std::string, std::uint32_t>> scope_;
};

class Evaluator {
public:
    Evaluator(const LabeledGraph& g, const Program& program, std::vector<Vertex> env)
        : g_(g), program_(program), env_(std::move(env)), memo_(program.ops.size()) {
        env_.resize(program.slots);
        if (g.vertex_count() <= 4096) matrix_.emplace(g.graph());
    }

    // Quantified subformulas are memoized on the values of their free slots
    // when the table stays small.
    bool eval(std::uint32_t index) {
        const auto& op = program_.ops[index];
        if (op.kind != FormulaKind::Exists && op.kind != FormulaKind::Forall) return eval_op(op);
        const std::size_t n = g_.vertex_count();
        std::size_t cells = 1;
        for (std::size_t i = 0; i < op.free.size(); ++i) {
            cells *= n;
            if (cells > kMemoLimit) return eval_op(op);
        }
        auto& table = memo_[index];
        if (table.empty()) table.assign(cells, -1);
        std::size_t key = 0;
        for (auto s : op.free) key = key * n + env_[s];
        if (table[key] < 0) {
            const Vertex saved = env_[op.a];
            table[key] = eval_op(op) ? 1 : 0;
            env_[op.a] = saved;
        }
        return table[key] == 1;
    }

private:
    static constexpr std::size_t kMemoLimit = std::size_t{1} << 22;

    bool eval_op(const Program::Op& op) {
        switch (op.kind) {
            case FormulaKind::Edge: {
                const Vertex u = env_[op.a];
                const Vertex v = env_[op.b];
                return matrix_ ? (*matrix_)(u, v) : g_.graph().has_edge(u, v);
            }
            case FormulaKind::Label: return g_.has_label(env_[op.a], op.label);
            case FormulaKind::Equal: return env_[op.a] == env_[op.b];
            case FormulaKind::Not: return !eval(op.a);
            case FormulaKind::And: return eval(op.a) && eval(op.b);
            case FormulaKind::Or: return eval(op.a) || eval(op.b);
            case FormulaKind::Exists:
                for (Vertex v = 0; v < g_.vertex_count(); ++v) {
                    env_[op.a] = v;
                    if (eval(op.b)) return true;
                }
                return false;
            case FormulaKind::Forall:
                for (Vertex v = 0; v < g_.vertex_count(); ++v) {
                    env_[op.a] = v;
                    if (!eval(op.b)) return false;
                }
                return true;
        }
        return false;
    }

    const LabeledGraph& g_;
    const Program& program_;
    std::vector<Vertex> env_;
    std::vector<std::vector<signed char>> memo_;
    std::optional<AdjacencyMatrix> matrix_;
};

}  // namespace

bool naive_check(const LabeledGraph& g, const Formula& phi, const Assignment& assignment) {
    if (phi.label_bound() > g.label_count()) {
        throw std::invalid_argument("label P" + std::to_string(phi.label_bound()) + " outside the graph's alphabet of " +
                                    std::to_string(g.label_count()));
    }
    for (const auto& [name, v] : assignment) {
        if (v >= g.vertex_count()) throw std::invalid_argument("assignment of '" + name + "' out of range");
    }
    Program program;
    Compiler compiler(program, assignment);
    const auto root = compiler.compile(phi);
    Evaluator ev(g, program, compiler.free_values);
    return ev.eval(root);
}

}  // namespace fomc
