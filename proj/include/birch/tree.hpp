#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "birch/multiindex.hpp"
#include "birch/scaling.hpp"

namespace birch {

// Edge decoration: type label, derivative multi-index, and the planted
// marker. The marker distinguishes abstract planted trees J[t,p](..) living
// in the hatted space from integration edges I[t,p](..); it is only ever set
// on root-adjacent edges and does not affect degrees.
struct EdgeDec {
    std::string type;
    MultiIndex p;
    bool hat = false;
};

// Immutable decorated rooted tree in canonical form. A tree is a root
// decoration X^k together with a multiset of planted branches; the branch
// list is kept sorted by (type, p, hat, child key), so structural equality
// coincides with equality of the printed form, which doubles as the
// canonical key. Copies share nodes.
class Tree {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Branch {
        EdgeDec edge;
        NodePtr child;
    };
    struct Node {
        MultiIndex root;
        std::vector<Branch> branches;
        std::string key;
        long edge_count = 0;
    };

    // The unit 1 = X^0: single undecorated node.
    static Tree unit(std::size_t dim) { return monomial(MultiIndex(dim)); }
    static Tree monomial(const MultiIndex& k);
    // I[t,p](child), or J[t,p](child) when hat is set.
    static Tree planted(const std::string& type, const MultiIndex& p, const Tree& child,
                        bool hat = false);

    std::size_t dim() const { return n_->root.dim(); }
    const MultiIndex& root_dec() const { return n_->root; }
    std::size_t branch_count() const { return n_->branches.size(); }
    const EdgeDec& branch_edge(std::size_t i) const { return n_->branches[i].edge; }
    Tree branch_child(std::size_t i) const { return Tree(n_->branches[i].child); }
    // The i-th root branch as a standalone planted tree.
    Tree branch_tree(std::size_t i) const;

    bool is_monomial() const { return n_->branches.empty(); }
    bool is_unit() const { return is_monomial() && n_->root.is_zero(); }
    long edge_count() const { return n_->edge_count; }

    const std::string& key() const { return n_->key; }
    const std::string& str() const { return n_->key; }

    friend bool operator==(const Tree& a, const Tree& b) { return a.key() == b.key(); }
    friend bool operator<(const Tree& a, const Tree& b) { return a.key() < b.key(); }

    explicit Tree(NodePtr n) : n_(std::move(n)) {}

private:
    friend Tree tree_product(const Tree& a, const Tree& b);
    NodePtr n_;
};

// Tree product: merge the two roots (decorations add, branch multisets
// unite). This is the product of the deformed tree algebra, not the free
// forest product.
Tree tree_product(const Tree& a, const Tree& b);
Tree tree_product(const std::vector<Tree>& factors, std::size_t dim);

// Erase planted markers on root branches (the injection from the hatted
// space back into plain trees).
Tree clear_hats(const Tree& t);
// Set planted markers on all root branches.
Tree set_hats(const Tree& t);
bool has_hats(const Tree& t);

// Degree |tau|_s: node decorations count positively, each edge contributes
// its type degree minus its derivative weight.
Rat degree(const Tree& t, const Scaling& sc);
// Degree of the branch I[t,p](child) without materialising the planted tree.
Rat branch_degree(const EdgeDec& e, const Tree& child, const Scaling& sc);

// Bigrading (sum of edge-decoration weights, non-root nodes + edges). The
// second component equals twice the edge count for trees; both components
// are non-decreasing along coproduct legs, which makes truncated sums exact.
std::pair<Rat, long> bigrade(const Tree& t, const Scaling& sc);

// True when every root branch has strictly positive degree (membership in
// the positive subspace; monomials qualify vacuously).
bool is_positive(const Tree& t, const Scaling& sc);

// Structural checks against a degree table: known types, matching dims and,
// when the table demands it, terminal noise edges with undecorated leaves.
void validate(const Tree& t, const Scaling& sc);

// Forest: finite multiset of non-unit trees, the free commutative product.
// The empty forest is the algebra unit.
class Forest {
public:
    Forest() = default;
    explicit Forest(const Tree& t) {
        if (!t.is_unit()) parts_.push_back(t);
        rebuild();
    }
    explicit Forest(std::vector<Tree> parts);

    bool is_empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }
    const std::vector<Tree>& parts() const { return parts_; }
    long edge_count() const;

    const std::string& key() const { return key_; }
    const std::string& str() const { return key_; }

    friend bool operator==(const Forest& a, const Forest& b) { return a.key_ == b.key_; }
    friend bool operator<(const Forest& a, const Forest& b) { return a.key_ < b.key_; }

private:
    void rebuild();
    std::vector<Tree> parts_;
    std::string key_ = "1";
};

Forest forest_product(const Forest& a, const Forest& b);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text grammar: `1`, `X`, `X^[k1,...]`, `I[t,p](..)`, `J[t,p](..)`,
// `*` tree product, `.` forest product. A bare integer multi-index is
// shorthand for that many derivatives in the first direction. Parsing a
// canonical print returns an equal tree.
Tree parse_tree(const std::string& text, const Scaling& sc);
Forest parse_forest(const std::string& text, const Scaling& sc);

}  // namespace birch
