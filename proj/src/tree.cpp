#include "birch/tree.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace birch {

namespace {

// Branch order underlying the canonical form. Child keys are compared as
// strings, which is stable because children are already canonical.
bool branch_less(const Tree::Branch& a, const Tree::Branch& b) {
    return std::tie(a.edge.type, a.edge.p.entries(), a.edge.hat, a.child->key) <
           std::tie(b.edge.type, b.edge.p.entries(), b.edge.hat, b.child->key);
}

std::string render(const MultiIndex& root, const std::vector<Tree::Branch>& branches) {
    std::string s;
    if (!root.is_zero()) s = "X^" + root.str();
    for (const auto& b : branches) {
        if (!s.empty()) s += '*';
        s += b.edge.hat ? 'J' : 'I';
        s += '[';
        s += b.edge.type;
        s += ',';
        s += b.edge.p.str();
        s += "](";
        s += b.child->key;
        s += ')';
    }
    if (s.empty()) s = "1";
    return s;
}

Tree::NodePtr make_node(MultiIndex root, std::vector<Tree::Branch> branches) {
    std::sort(branches.begin(), branches.end(), branch_less);
    auto n = std::make_shared<Tree::Node>();
    n->root = std::move(root);
    n->edge_count = 0;
    for (const auto& b : branches) n->edge_count += 1 + b.child->edge_count;
    n->branches = std::move(branches);
    n->key = render(n->root, n->branches);
    return n;
}

}  // namespace

Tree Tree::monomial(const MultiIndex& k) {
    return Tree(make_node(k, {}));
}

Tree Tree::planted(const std::string& type, const MultiIndex& p, const Tree& child, bool hat) {
    if (p.dim() != child.dim()) throw std::invalid_argument("edge decoration dim mismatch");
    return Tree(make_node(MultiIndex(child.dim()), {Branch{EdgeDec{type, p, hat}, child.n_}}));
}

Tree Tree::branch_tree(std::size_t i) const {
    return Tree(make_node(MultiIndex(dim()), {n_->branches.at(i)}));
}

Tree tree_product(const Tree& a, const Tree& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("tree product dim mismatch");
    std::vector<Tree::Branch> branches;
    branches.reserve(a.n_->branches.size() + b.n_->branches.size());
    branches.insert(branches.end(), a.n_->branches.begin(), a.n_->branches.end());
    branches.insert(branches.end(), b.n_->branches.begin(), b.n_->branches.end());
    return Tree(make_node(a.root_dec() + b.root_dec(), std::move(branches)));
}

Tree tree_product(const std::vector<Tree>& factors, std::size_t dim) {
    Tree acc = Tree::unit(dim);
    for (const auto& f : factors) acc = tree_product(acc, f);
    return acc;
}

namespace {

Tree with_hats(const Tree& t, bool hat) {
    Tree acc = Tree::monomial(t.root_dec());
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        acc = tree_product(acc, Tree::planted(e.type, e.p, t.branch_child(i), hat));
    }
    return acc;
}

}  // namespace

Tree clear_hats(const Tree& t) {
    return has_hats(t) ? with_hats(t, false) : t;
}

Tree set_hats(const Tree& t) {
    return with_hats(t, true);
}

bool has_hats(const Tree& t) {
    for (std::size_t i = 0; i < t.branch_count(); ++i)
        if (t.branch_edge(i).hat) return true;
    return false;
}

Rat branch_degree(const EdgeDec& e, const Tree& child, const Scaling& sc) {
    return sc.type(e.type).degree - sc.mi_weight(e.p) + degree(child, sc);
}

Rat degree(const Tree& t, const Scaling& sc) {
    Rat d = sc.mi_weight(t.root_dec());
    for (std::size_t i = 0; i < t.branch_count(); ++i)
        d += branch_degree(t.branch_edge(i), t.branch_child(i), sc);
    return d;
}

std::pair<Rat, long> bigrade(const Tree& t, const Scaling& sc) {
    Rat w = 0;
    long nodes_edges = 0;
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        auto [cw, cn] = bigrade(t.branch_child(i), sc);
        w += sc.mi_weight(t.branch_edge(i).p) + cw;
        nodes_edges += 2 + cn;  // the edge plus the child root
    }
    return {w, nodes_edges};
}

bool is_positive(const Tree& t, const Scaling& sc) {
    for (std::size_t i = 0; i < t.branch_count(); ++i)
        if (!(branch_degree(t.branch_edge(i), t.branch_child(i), sc) > 0)) return false;
    return true;
}

void validate(const Tree& t, const Scaling& sc) {
    if (t.dim() != sc.dim()) throw std::invalid_argument("tree dim mismatch with scaling");
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        const TypeInfo& info = sc.type(e.type);
        Tree child = t.branch_child(i);
        if (info.kind == TypeKind::Noise && sc.terminal_noise() && !child.is_unit())
            throw std::invalid_argument("noise edge must be terminal: " + t.str());
        validate(child, sc);
    }
}

Forest::Forest(std::vector<Tree> parts) {
    for (auto& t : parts)
        if (!t.is_unit()) parts_.push_back(std::move(t));
    rebuild();
}

void Forest::rebuild() {
    std::sort(parts_.begin(), parts_.end());
    if (parts_.empty()) {
        key_ = "1";
        return;
    }
    key_.clear();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) key_ += '.';
        key_ += parts_[i].key();
    }
}

long Forest::edge_count() const {
    long n = 0;
    for (const auto& t : parts_) n += t.edge_count();
    return n;
}

Forest forest_product(const Forest& a, const Forest& b) {
    std::vector<Tree> parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    return Forest(std::move(parts));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Cursor {
public:
    Cursor(const std::string& s, const Scaling& sc) : s_(s), sc_(sc) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_end() {
        skip_ws();
        return pos_ == s_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("parse error at position " + std::to_string(pos_) + ": " + why +
                         " in '" + s_ + "'");
    }

    unsigned parse_uint() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_])) fail("expected integer");
        unsigned long v = 0;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
            v = v * 10 + (unsigned long)(s_[pos_] - '0');
            if (v > 1000000) fail("integer out of range");
            ++pos_;
        }
        return (unsigned)v;
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_' || s_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) fail("expected type name");
        return s_.substr(start, pos_ - start);
    }

    // Bare integer n means n in the first direction; otherwise [k1,...,kd1].
    MultiIndex parse_mindex() {
        skip_ws();
        if (peek() == '[') {
            expect('[');
            std::vector<unsigned> ks;
            ks.push_back(parse_uint());
            while (eat(',')) ks.push_back(parse_uint());
            expect(']');
            if (ks.size() != sc_.dim()) fail("multi-index has wrong dimension");
            return MultiIndex(ks);
        }
        unsigned n = parse_uint();
        return MultiIndex::unit(sc_.dim(), 0, n);
    }

    Tree parse_factor() {
        skip_ws();
        char c = peek();
        if (c == '1') {
            ++pos_;
            return Tree::unit(sc_.dim());
        }
        if (c == 'X') {
            ++pos_;
            if (peek() == '^') {
                ++pos_;
                return Tree::monomial(parse_mindex());
            }
            return Tree::monomial(MultiIndex::unit(sc_.dim(), 0, 1));
        }
        if (c == 'I' || c == 'J') {
            bool hat = c == 'J';
            ++pos_;
            expect('[');
            std::string type = parse_name();
            if (!sc_.has_type(type)) fail("unknown edge type '" + type + "'");
            expect(',');
            MultiIndex p = parse_mindex();
            expect(']');
            expect('(');
            Tree child = parse_tree();
            expect(')');
            return Tree::planted(type, p, child, hat);
        }
        fail("expected '1', 'X', 'I[..]' or 'J[..]'");
    }

    Tree parse_tree() {
        Tree acc = parse_factor();
        while (eat('*')) acc = tree_product(acc, parse_factor());
        return acc;
    }

    Forest parse_forest() {
        std::vector<Tree> parts{parse_tree()};
        while (eat('.')) parts.push_back(parse_tree());
        return Forest(std::move(parts));
    }

private:
    const std::string& s_;
    const Scaling& sc_;
    std::size_t pos_ = 0;
};

}  // namespace

Tree parse_tree(const std::string& text, const Scaling& sc) {
    Cursor c(text, sc);
    Tree t = c.parse_tree();
    if (!c.at_end()) c.fail("trailing input");
    return t;
}

Forest parse_forest(const std::string& text, const Scaling& sc) {
    Cursor c(text, sc);
    Forest f = c.parse_forest();
    if (!c.at_end()) c.fail("trailing input");
    return f;
}

}  // namespace birch
