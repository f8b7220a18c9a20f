#include "fomc/gnf.hpp"

#include <cctype>
#include <map>

#include "fomc/graph_io.hpp"

namespace fomc {

GnfExpr GnfExpr::leaf(std::size_t index) {
    GnfExpr e;
    e.kind_ = Kind::Leaf;
    e.leaf_ = index;
    return e;
}

GnfExpr GnfExpr::negation(GnfExpr inner) {
    GnfExpr e;
    e.kind_ = Kind::Not;
    e.children_[0] = std::make_shared<const GnfExpr>(std::move(inner));
    return e;
}

GnfExpr GnfExpr::conjunction(GnfExpr a, GnfExpr b) {
    GnfExpr e;
    e.kind_ = Kind::And;
    e.children_[0] = std::make_shared<const GnfExpr>(std::move(a));
    e.children_[1] = std::make_shared<const GnfExpr>(std::move(b));
    return e;
}

GnfExpr GnfExpr::disjunction(GnfExpr a, GnfExpr b) {
    GnfExpr e;
    e.kind_ = Kind::Or;
    e.children_[0] = std::make_shared<const GnfExpr>(std::move(a));
    e.children_[1] = std::make_shared<const GnfExpr>(std::move(b));
    return e;
}

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, const std::map<std::string, std::size_t>& names, std::size_t line)
        : text_(text), names_(names), line_(line) {}

    GnfExpr parse() {
        GnfExpr e = disjunction();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input in sentence");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line_, what + " (column " + std::to_string(pos_ + 1) + ")");
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    GnfExpr unary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of sentence");
        if (text_[pos_] == '~') {
            ++pos_;
            return GnfExpr::negation(unary());
        }
        if (text_[pos_] == '(') {
            ++pos_;
            GnfExpr e = disjunction();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a leaf name");
        std::string name(text_.substr(start, pos_ - start));
        auto it = names_.find(name);
        if (it == names_.end()) fail("undefined leaf '" + name + "'");
        return GnfExpr::leaf(it->second);
    }

    GnfExpr conjunction() {
        GnfExpr e = unary();
        while (peek('&')) {
            ++pos_;
            e = GnfExpr::conjunction(e, unary());
        }
        return e;
    }

    GnfExpr disjunction() {
        GnfExpr e = conjunction();
        while (peek('|')) {
            ++pos_;
            e = GnfExpr::disjunction(e, conjunction());
        }
        return e;
    }

    std::string_view text_;
    const std::map<std::string, std::size_t>& names_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Consumes the next whitespace-delimited word.
std::string_view next_word(std::string_view& s) {
    s = trim(s);
    std::size_t j = 0;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    auto word = s.substr(0, j);
    s.remove_prefix(j);
    return word;
}

long long parse_int(std::string_view word, std::size_t line) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(std::string(word), &used);
        if (used != word.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(line, "expected an integer, got '" + std::string(word) + "'");
    }
}

void print_expr(const GnfExpr& e, const GnfSentence& s, std::string& out) {
    switch (e.kind()) {
        case GnfExpr::Kind::Leaf: out += s.leaves[e.leaf_index()].name; break;
        case GnfExpr::Kind::Not:
            out += "~";
            print_expr(e.child(0), s, out);
            break;
        case GnfExpr::Kind::And:
        case GnfExpr::Kind::Or:
            out += "(";
            print_expr(e.child(0), s, out);
            out += e.kind() == GnfExpr::Kind::And ? " & " : " | ";
            print_expr(e.child(1), s, out);
            out += ")";
            break;
    }
}

}  // namespace

GnfSentence parse_gnf(std::string_view text) {
    GnfSentence out;
    std::map<std::string, std::size_t> names;
    bool have_sentence = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        // Comments only at line start; omega strings may not contain '#'.
        if (auto t = trim(line); t.empty() || t.front() == '#') continue;

        std::string_view rest = line;
        auto keyword = next_word(rest);
        if (keyword == "bls") {
            if (have_sentence) throw ParseError(line_no, "bls after the sentence line");
            BasicLocalSentence leaf;
            leaf.name = std::string(next_word(rest));
            if (leaf.name.empty()) throw ParseError(line_no, "missing leaf name");
            if (names.contains(leaf.name)) throw ParseError(line_no, "duplicate leaf '" + leaf.name + "'");
            if (next_word(rest) != "r") throw ParseError(line_no, "expected 'r <int>'");
            auto r = parse_int(next_word(rest), line_no);
            if (r < 0) throw ParseError(line_no, "r must be >= 0");
            if (next_word(rest) != "s") throw ParseError(line_no, "expected 's <int>'");
            auto s = parse_int(next_word(rest), line_no);
            if (s < 1) throw ParseError(line_no, "s must be >= 1");
            if (next_word(rest) != "omega") throw ParseError(line_no, "expected 'omega \"<formula>\"'");
            rest = trim(rest);
            if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') {
                throw ParseError(line_no, "omega must be a double-quoted formula");
            }
            try {
                leaf.omega = parse_formula(rest.substr(1, rest.size() - 2));
            } catch (const FormulaSyntaxError& e) {
                throw ParseError(line_no, std::string("omega: ") + e.what());
            }
            if (leaf.omega.free_variables() != std::set<std::string>{"x"}) {
                throw ParseError(line_no, "omega must have exactly the free variable x");
            }
            leaf.r = static_cast<unsigned>(r);
            leaf.s = static_cast<unsigned>(s);
            names.emplace(leaf.name, out.leaves.size());
            out.leaves.push_back(std::move(leaf));
        } else if (keyword == "sentence") {
            if (have_sentence) throw ParseError(line_no, "more than one sentence line");
            out.tree = ExprParser(rest, names, line_no).parse();
            have_sentence = true;
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(keyword) + "'");
        }
    }
    if (!have_sentence) throw ParseError(line_no, "missing sentence line");
    return out;
}

std::string to_string(const GnfSentence& s) {
    std::string out;
    for (const auto& leaf : s.leaves) {
        out += "bls " + leaf.name + " r " + std::to_string(leaf.r) + " s " + std::to_string(leaf.s) + " omega \"" +
               to_string(leaf.omega) + "\"\n";
    }
    out += "sentence ";
    print_expr(s.tree, s, out);
    out += "\n";
    return out;
}

}  // namespace fomc
