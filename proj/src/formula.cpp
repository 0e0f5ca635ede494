#include "teamlog/formula.hpp"

#include "teamlog/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace teamlog {

bool is_identifier(std::string_view text) noexcept {
    if (text.empty() || text == "T" || text == "B") {
        return false;
    }
    auto head = static_cast<unsigned char>(text.front());
    if (!(std::isalpha(head) || head == '_')) {
        return false;
    }
    return std::all_of(text.begin() + 1, text.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

Var::Var(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_)) {
        throw FormulaError("invalid variable name '" + name_ + "'");
    }
}

std::string_view to_string(LogicKind kind) noexcept {
    switch (kind) {
        case LogicKind::PL: return "PL";
        case LogicKind::PDL: return "PDL";
        case LogicKind::PINC: return "PINC";
        case LogicKind::PIND: return "PIND";
    }
    return "?";
}

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Top: return "top";
        case NodeKind::Bot: return "bot";
        case NodeKind::Lit: return "lit";
        case NodeKind::And: return "and";
        case NodeKind::Or: return "or";
        case NodeKind::Dep: return "dep";
        case NodeKind::Inc: return "inc";
        case NodeKind::Indep: return "ind";
    }
    return "?";
}

struct Formula::Node {
    NodeKind kind;
    LogicKind logic = LogicKind::PL;
    std::optional<Var> var;
    bool positive = true;
    std::optional<Formula> lhs;
    std::optional<Formula> rhs;
    VarTuple x, y, z;
    std::size_t size = 1;
    std::size_t depth = 0;
};

namespace {

LogicKind combine(LogicKind a, LogicKind b) {
    if (a == LogicKind::PL) return b;
    if (b == LogicKind::PL || a == b) return a;
    throw FormulaError("formula mixes " + std::string(to_string(a)) + " and " +
                       std::string(to_string(b)) + " atoms");
}

}  // namespace

Formula Formula::top() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Top;
    return Formula(std::move(n));
}

Formula Formula::bot() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Bot;
    return Formula(std::move(n));
}

Formula Formula::lit(Var v, bool positive) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Lit;
    n->var = std::move(v);
    n->positive = positive;
    if (!positive) {
        n->size = 2;
        n->depth = 1;
    }
    return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::And;
    n->logic = combine(lhs.logic(), rhs.logic());
    n->size = 1 + lhs.size() + rhs.size();
    n->depth = 1 + std::max(lhs.depth(), rhs.depth());
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Formula(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Or;
    n->logic = combine(lhs.logic(), rhs.logic());
    n->size = 1 + lhs.size() + rhs.size();
    n->depth = 1 + std::max(lhs.depth(), rhs.depth());
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Formula(std::move(n));
}

Formula Formula::dep(VarTuple x, VarTuple y) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Dep;
    n->logic = LogicKind::PDL;
    n->x = std::move(x);
    n->y = std::move(y);
    return Formula(std::move(n));
}

Formula Formula::inc(VarTuple x, VarTuple y) {
    if (x.size() != y.size()) {
        throw FormulaError("inclusion atom needs tuples of equal length, got " +
                           std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Inc;
    n->logic = LogicKind::PINC;
    n->x = std::move(x);
    n->y = std::move(y);
    return Formula(std::move(n));
}

Formula Formula::indep(VarTuple x, VarTuple y, VarTuple z) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Indep;
    n->logic = LogicKind::PIND;
    n->x = std::move(x);
    n->y = std::move(y);
    n->z = std::move(z);
    return Formula(std::move(n));
}

NodeKind Formula::kind() const noexcept { return node_->kind; }
LogicKind Formula::logic() const noexcept { return node_->logic; }

bool Formula::is_leaf() const noexcept {
    return node_->kind != NodeKind::And && node_->kind != NodeKind::Or;
}

bool Formula::is_dependency_atom() const noexcept {
    auto k = node_->kind;
    return k == NodeKind::Dep || k == NodeKind::Inc || k == NodeKind::Indep;
}

const Var& Formula::var() const {
    if (!node_->var) throw FormulaError("var() on a non-literal node");
    return *node_->var;
}

bool Formula::positive() const {
    if (node_->kind != NodeKind::Lit) throw FormulaError("positive() on a non-literal node");
    return node_->positive;
}

const Formula& Formula::left() const {
    if (!node_->lhs) throw FormulaError("left() on a leaf node");
    return *node_->lhs;
}

const Formula& Formula::right() const {
    if (!node_->rhs) throw FormulaError("right() on a leaf node");
    return *node_->rhs;
}

const VarTuple& Formula::x() const { return node_->x; }
const VarTuple& Formula::y() const { return node_->y; }
const VarTuple& Formula::z() const { return node_->z; }

std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const auto& na = *a.node_;
    const auto& nb = *b.node_;
    if (na.kind != nb.kind || na.size != nb.size) return false;
    switch (na.kind) {
        case NodeKind::Top:
        case NodeKind::Bot:
            return true;
        case NodeKind::Lit:
            return na.positive == nb.positive && *na.var == *nb.var;
        case NodeKind::And:
        case NodeKind::Or:
            return *na.lhs == *nb.lhs && *na.rhs == *nb.rhs;
        case NodeKind::Dep:
        case NodeKind::Inc:
        case NodeKind::Indep:
            return na.x == nb.x && na.y == nb.y && na.z == nb.z;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = disjunction();
        skip_ws();
        if (pos_ != text_.size()) {
            fail(ParseError::Kind::Syntax, "unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return f;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(ParseError::Kind kind, const std::string& what) const { fail_at(pos_, kind, what); }

    [[noreturn]] void fail_at(std::size_t at, ParseError::Kind kind, const std::string& what) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(kind, line, col, what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(ParseError::Kind::Syntax,
                 pos_ < text_.size() ? "expected '" + std::string(1, c) + "' but found '" +
                                           std::string(1, text_[pos_]) + "'"
                                     : "expected '" + std::string(1, c) + "' but reached end of input");
        }
    }

    // Raw identifier token, including the reserved words T and B.
    std::optional<std::string_view> word() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size()) {
            auto c = static_cast<unsigned char>(text_[pos_]);
            if (std::isalpha(c) || c == '_') {
                ++pos_;
                while (pos_ < text_.size()) {
                    auto d = static_cast<unsigned char>(text_[pos_]);
                    if (!(std::isalnum(d) || d == '_')) break;
                    ++pos_;
                }
                return text_.substr(start, pos_ - start);
            }
        }
        return std::nullopt;
    }

    // True if the next non-space character after the current position is '('.
    bool followed_by_paren() {
        std::size_t save = pos_;
        bool r = peek('(');
        pos_ = save;
        return r;
    }

    Formula fold(std::size_t at, Formula acc, Formula next, bool is_and) {
        try {
            return is_and ? Formula::conj(std::move(acc), std::move(next))
                          : Formula::disj(std::move(acc), std::move(next));
        } catch (const FormulaError& e) {
            fail_at(at, ParseError::Kind::MixedAtomKinds, e.what());
        }
    }

    Formula disjunction() {
        Formula acc = conjunction();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (!accept('|')) break;
            acc = fold(at, std::move(acc), conjunction(), false);
        }
        return acc;
    }

    Formula conjunction() {
        Formula acc = unit();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (!accept('&')) break;
            acc = fold(at, std::move(acc), unit(), true);
        }
        return acc;
    }

    Formula unit() {
        skip_ws();
        std::size_t start = pos_;
        if (accept('(')) {
            Formula f = disjunction();
            expect(')');
            return f;
        }
        if (accept('!')) {
            std::size_t at = pos_;
            auto w = word();
            if (!w || *w == "T" || *w == "B" ||
                ((*w == "inc" || *w == "ind") && followed_by_paren())) {
                fail_at(at, ParseError::Kind::NonAtomicNegation, "negation may only be applied to a variable");
            }
            return Formula::lit(Var(std::string(*w)), false);
        }
        if (accept('=')) {
            expect('(');
            VarTuple x = var_list();
            expect(';');
            VarTuple y = var_list();
            expect(')');
            return Formula::dep(std::move(x), std::move(y));
        }
        auto w = word();
        if (!w) {
            fail(ParseError::Kind::Syntax,
                 pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                                     : "unexpected end of input");
        }
        if (*w == "T") return Formula::top();
        if (*w == "B") return Formula::bot();
        if (*w == "inc" && followed_by_paren()) {
            expect('(');
            VarTuple x = var_list();
            expect(';');
            VarTuple y = var_list();
            expect(')');
            if (x.size() != y.size()) {
                fail_at(start, ParseError::Kind::ArityMismatch,
                        "inclusion atom needs tuples of equal length, got " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()));
            }
            return Formula::inc(std::move(x), std::move(y));
        }
        if (*w == "ind" && followed_by_paren()) {
            expect('(');
            VarTuple x = var_list();
            expect(';');
            VarTuple y = var_list();
            expect('|');
            VarTuple z = var_list();
            expect(')');
            return Formula::indep(std::move(x), std::move(y), std::move(z));
        }
        return Formula::lit(Var(std::string(*w)), true);
    }

    VarTuple var_list() {
        VarTuple out;
        skip_ws();
        std::size_t at = pos_;
        auto w = word();
        if (!w) return out;
        for (;;) {
            if (*w == "T" || *w == "B") {
                fail_at(at, ParseError::Kind::Syntax, "'" + std::string(*w) + "' is reserved and cannot name a variable");
            }
            out.emplace_back(std::string(*w));
            if (!accept(',')) break;
            skip_ws();
            at = pos_;
            w = word();
            if (!w) fail(ParseError::Kind::Syntax, "expected a variable after ','");
        }
        return out;
    }
};

void join(std::ostream& os, const VarTuple& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) os << ", ";
        os << vars[i].name();
    }
}

void render(std::ostream& os, const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Top: os << 'T'; break;
        case NodeKind::Bot: os << 'B'; break;
        case NodeKind::Lit:
            if (!f.positive()) os << '!';
            os << f.var().name();
            break;
        case NodeKind::And:
        case NodeKind::Or:
            os << '(';
            render(os, f.left());
            os << (f.kind() == NodeKind::And ? " & " : " | ");
            render(os, f.right());
            os << ')';
            break;
        case NodeKind::Dep:
            os << "=(";
            join(os, f.x());
            os << ';';
            if (!f.y().empty()) os << ' ';
            join(os, f.y());
            os << ')';
            break;
        case NodeKind::Inc:
            os << "inc(";
            join(os, f.x());
            os << ';';
            if (!f.y().empty()) os << ' ';
            join(os, f.y());
            os << ')';
            break;
        case NodeKind::Indep:
            os << "ind(";
            join(os, f.x());
            os << ';';
            if (!f.y().empty()) os << ' ';
            join(os, f.y());
            os << " |";
            if (!f.z().empty()) os << ' ';
            join(os, f.z());
            os << ')';
            break;
    }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string render_formula(const Formula& f) {
    std::ostringstream os;
    render(os, f);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) {
    render(os, f);
    return os;
}

std::vector<Formula> children(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::And:
        case NodeKind::Or:
            return {f.left(), f.right()};
        case NodeKind::Lit:
            if (!f.positive()) return {Formula::lit(f.var(), true)};
            return {};
        default:
            return {};
    }
}

IndexedFormula index_formula(const Formula& f, bool expand_negation) {
    IndexedFormula out;
    out.nodes.reserve(f.size());
    // Explicit stack: generated formulas can be deep chains.
    std::vector<std::pair<Formula, int>> stack;
    stack.emplace_back(f, -1);
    while (!stack.empty()) {
        auto [node, parent] = std::move(stack.back());
        stack.pop_back();
        int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back(node);
        out.left.push_back(-1);
        out.right.push_back(-1);
        out.parent.push_back(parent);
        if (parent >= 0) {
            if (out.left[parent] < 0) {
                out.left[parent] = idx;
            } else {
                out.right[parent] = idx;
            }
        }
        if (node.kind() == NodeKind::And || node.kind() == NodeKind::Or) {
            stack.emplace_back(node.right(), idx);
            stack.emplace_back(node.left(), idx);
        } else if (expand_negation && node.kind() == NodeKind::Lit && !node.positive()) {
            stack.emplace_back(Formula::lit(node.var(), true), idx);
        }
    }
    return out;
}

std::vector<Formula> subformulas(const Formula& f) { return index_formula(f, true).nodes; }

std::vector<Var> variables(const Formula& f) {
    std::set<Var> seen;
    for (const auto& node : index_formula(f, false).nodes) {
        switch (node.kind()) {
            case NodeKind::Lit:
                seen.insert(node.var());
                break;
            case NodeKind::Dep:
            case NodeKind::Inc:
            case NodeKind::Indep:
                seen.insert(node.x().begin(), node.x().end());
                seen.insert(node.y().begin(), node.y().end());
                seen.insert(node.z().begin(), node.z().end());
                break;
            default:
                break;
        }
    }
    return {seen.begin(), seen.end()};
}

std::size_t count_splits(const Formula& f) {
    std::size_t n = 0;
    for (const auto& node : index_formula(f, false).nodes) {
        if (node.kind() == NodeKind::Or) ++n;
    }
    return n;
}

}  // namespace teamlog
