#include "birch/hopf.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace birch {

namespace {

TensorSum tensor_mul(const TensorSum& a, const TensorSum& b) {
    TensorSum out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
            out.add({tree_product(ka.first, kb.first), tree_product(ka.second, kb.second)},
                    ca * cb);
    return out;
}

TreeSum treesum_mul(const TreeSum& a, const TreeSum& b) {
    TreeSum out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add(tree_product(ka, kb), ca * cb);
    return out;
}

bool simplified_mode(PlusCoproduct mode) {
    return mode == PlusCoproduct::SimplifiedHat || mode == PlusCoproduct::SimplifiedBar;
}

// Monomial rule. The simplified coaction recenters around a fixed origin, so
// monomials carry a trivial right leg there; otherwise the full binomial
// expansion applies.
TensorSum delta_monomial(const MultiIndex& k, bool simplified) {
    TensorSum out;
    std::size_t dim = k.dim();
    if (simplified) {
        out.add({Tree::monomial(k), Tree::unit(dim)}, 1);
        return out;
    }
    for (const auto& j : enumerate_below(k))
        out.add({Tree::monomial(j), Tree::monomial(k - j)}, MultiIndex::binomial(k, j));
    return out;
}

// Shared branch rule for Hat and SimplifiedHat: once the positivity
// projector is folded in, both read
//   (I_(t,p) (x) id) Delta child  +  sum_{|l|_s < deg} X^l/l! (x) I_(t,p+l) child
// and differ only through the recursion mode used on the child.
TensorSum delta_branch_hat(const EdgeDec& e, const Tree& child, const Scaling& sc,
                           PlusCoproduct mode) {
    TensorSum out;
    for (const auto& [k, c] : delta_plus(child, sc, mode))
        out.add({Tree::planted(e.type, e.p, k.first), k.second}, c);
    Rat alpha = branch_degree(e, child, sc);
    for (const auto& l : enumerate_multiindices(sc.weights(), alpha, /*strict=*/true)) {
        Tree right = Tree::planted(e.type, e.p + l, child);
        out.add({Tree::monomial(l), right}, 1 / l.factorial());
    }
    return out;
}

TensorSum delta_branch_full(const EdgeDec& e, const Tree& child, const Scaling& sc, long cutoff) {
    TensorSum out;
    std::size_t dim = child.dim();
    out.add({Tree::unit(dim), Tree::planted(e.type, e.p, child)}, 1);
    for (const auto& [k, c] : delta_plus(child, sc, PlusCoproduct::FullTruncated, cutoff))
        out.add({Tree::planted(e.type, e.p, k.first), k.second}, c);
    for (const auto& l : enumerate_multiindices(sc.weights(), Rat(cutoff), /*strict=*/false)) {
        if (l.is_zero()) continue;
        out.add({Tree::monomial(l), Tree::planted(e.type, e.p + l, child)}, 1 / l.factorial());
    }
    return out;
}

// Connected positive coproduct on a planted positive tree:
//   (J_(t,p) (x) id) Delta-hat child + 1 (x) J_(t,p) child,
// with the left planted legs projected to positive degree.
TensorSum delta_branch_bar_simplified(const EdgeDec& e, const Tree& child, const Scaling& sc) {
    TensorSum out;
    std::size_t dim = child.dim();
    for (const auto& [k, c] : delta_plus(child, sc, PlusCoproduct::SimplifiedHat)) {
        if (!(branch_degree(e, k.first, sc) > 0)) continue;
        out.add({Tree::planted(e.type, e.p, k.first), k.second}, c);
    }
    if (branch_degree(e, child, sc) > 0)
        out.add({Tree::unit(dim), Tree::planted(e.type, e.p, child)}, 1);
    return out;
}

}  // namespace

TensorSum delta_plus(const Tree& t_in, const Scaling& sc, PlusCoproduct mode, long cutoff) {
    Tree t = clear_hats(t_in);
    if (mode == PlusCoproduct::Bar)
        return delta_plus(t, sc, PlusCoproduct::Hat)
            .filter([&](const std::pair<Tree, Tree>& k) { return is_positive(k.first, sc); });
    if (mode == PlusCoproduct::Reduced) return delta_plus_reduced(t, sc, false);

    TensorSum acc = delta_monomial(t.root_dec(), simplified_mode(mode));
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        Tree child = t.branch_child(i);
        TensorSum db;
        switch (mode) {
            case PlusCoproduct::FullTruncated:
                db = delta_branch_full(e, child, sc, cutoff);
                break;
            case PlusCoproduct::Hat:
                db = delta_branch_hat(e, child, sc, PlusCoproduct::Hat);
                break;
            case PlusCoproduct::SimplifiedHat:
                db = delta_branch_hat(e, child, sc, PlusCoproduct::SimplifiedHat);
                break;
            case PlusCoproduct::SimplifiedBar:
                db = delta_branch_bar_simplified(e, child, sc);
                break;
            default:
                throw std::logic_error("unreachable coproduct mode");
        }
        acc = tensor_mul(acc, db);
    }
    return acc;
}

TensorSum delta_plus_reduced(const Tree& t_in, const Scaling& sc, bool simplified) {
    Tree t = clear_hats(t_in);
    if (t.is_monomial()) return {};
    Tree one = Tree::unit(t.dim());
    auto mode = simplified ? PlusCoproduct::SimplifiedHat : PlusCoproduct::Hat;
    return delta_plus(t, sc, mode).filter([&](const std::pair<Tree, Tree>& k) {
        return !k.first.is_monomial() && !(k.first == t && k.second == one);
    });
}

bool coaction_compose_check(const Tree& t, const Scaling& sc) {
    using Triple = std::tuple<Tree, Tree, Tree>;
    LinComb<Triple, Rat> lhs, rhs;
    TensorSum d = delta_plus(t, sc, PlusCoproduct::Hat);
    for (const auto& [k, c] : d) {
        for (const auto& [k2, c2] : delta_plus(k.first, sc, PlusCoproduct::Hat))
            lhs.add({k2.first, k2.second, k.second}, c * c2);
        for (const auto& [k2, c2] : delta_plus(k.second, sc, PlusCoproduct::Bar))
            rhs.add({k.first, k2.first, k2.second}, c * c2);
    }
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Antipodes

namespace {

struct AntipodeCtx {
    const Scaling& sc;
    PlusAntipode variant;
    long cutoff;
    TwistedBound bound;
};

Rat sign_of(const MultiIndex& k) {
    return k.abs() % 2 == 0 ? Rat(1) : Rat(-1);
}

PlusCoproduct base_coproduct(PlusAntipode v) {
    switch (v) {
        case PlusAntipode::FullTruncated:
            return PlusCoproduct::FullTruncated;
        case PlusAntipode::Bar:
        case PlusAntipode::Twisted:
            return PlusCoproduct::Hat;
        case PlusAntipode::Simplified:
        case PlusAntipode::SimplifiedTwisted:
            return PlusCoproduct::SimplifiedHat;
    }
    throw std::logic_error("unreachable antipode variant");
}

// Derivative shifts attached to the planted left leg for one coproduct term
// with left child `a`. Empty multi-index only for the simplified variants.
std::vector<MultiIndex> antipode_shifts(const AntipodeCtx& cx, const EdgeDec& e, const Tree& child,
                                        const Tree& a) {
    switch (cx.variant) {
        case PlusAntipode::FullTruncated:
            return enumerate_multiindices(cx.sc.weights(), Rat(cx.cutoff), /*strict=*/false);
        case PlusAntipode::Bar:
            // pi_+ on the shifted planted leg: |l|_s < deg I_(t,p)(a).
            return enumerate_multiindices(cx.sc.weights(), branch_degree(e, a, cx.sc),
                                          /*strict=*/true);
        case PlusAntipode::Twisted:
        case PlusAntipode::SimplifiedTwisted:
            // Sum bounded by the degree of the argument itself, not the leg.
            // The simplified coaction keeps the root deformation, so its
            // twisted antipode needs the same shifts to invert it.
            return enumerate_multiindices(cx.sc.weights(), branch_degree(e, child, cx.sc),
                                          cx.bound == TwistedBound::BelowDegree);
        case PlusAntipode::Simplified:
            return {MultiIndex(child.dim())};
    }
    throw std::logic_error("unreachable antipode variant");
}

bool hatted_output(PlusAntipode v) {
    return v == PlusAntipode::Twisted || v == PlusAntipode::SimplifiedTwisted;
}

// One unfolding of the antipode recursion; `lookup` supplies values on
// strictly smaller trees. Both evaluation strategies share this.
TreeSum antipode_step(const Tree& t, const AntipodeCtx& cx,
                      const std::function<TreeSum(const Tree&)>& lookup) {
    if (t.is_monomial()) return TreeSum::single(t, sign_of(t.root_dec()));

    bool planted = t.root_dec().is_zero() && t.branch_count() == 1;
    if (!planted) {
        TreeSum acc =
            TreeSum::single(Tree::monomial(t.root_dec()), sign_of(t.root_dec()));
        for (std::size_t i = 0; i < t.branch_count(); ++i)
            acc = treesum_mul(acc, lookup(clear_hats(t.branch_tree(i))));
        return acc;
    }

    const EdgeDec& e = t.branch_edge(0);
    Tree child = t.branch_child(0);
    bool hat = hatted_output(cx.variant);
    bool project = cx.variant == PlusAntipode::Bar || cx.variant == PlusAntipode::Simplified;

    TreeSum out;
    TensorSum d = delta_plus(child, cx.sc, base_coproduct(cx.variant), cx.cutoff);
    for (const auto& [k, c] : d) {
        const Tree& a = k.first;
        TreeSum rec = lookup(k.second);
        if (rec.empty()) continue;
        for (const auto& l : antipode_shifts(cx, e, child, a)) {
            MultiIndex p = e.p + l;
            if (project && !(branch_degree(EdgeDec{e.type, p, false}, a, cx.sc) > 0)) continue;
            Tree planted_leg = Tree::planted(e.type, p, a, hat);
            Rat coeff = Rat(-1) * sign_of(l) * c / l.factorial();
            Tree mono = Tree::monomial(l);
            for (const auto& [kb, cb] : rec)
                out.add(tree_product(mono, tree_product(planted_leg, kb)), coeff * cb);
        }
    }
    return out;
}

// Right legs feeding the recursion, i.e. exactly the lookups antipode_step
// performs. Used by the worklist driver to build the dependency closure.
std::vector<Tree> antipode_deps(const Tree& t, const AntipodeCtx& cx) {
    std::vector<Tree> deps;
    if (t.is_monomial()) return deps;
    bool planted = t.root_dec().is_zero() && t.branch_count() == 1;
    if (!planted) {
        for (std::size_t i = 0; i < t.branch_count(); ++i)
            deps.push_back(clear_hats(t.branch_tree(i)));
        return deps;
    }
    TensorSum d = delta_plus(t.branch_child(0), cx.sc, base_coproduct(cx.variant), cx.cutoff);
    for (const auto& [k, c] : d) deps.push_back(k.second);
    return deps;
}

TreeSum antipode_recursive(const Tree& t, const AntipodeCtx& cx) {
    std::map<std::string, TreeSum> memo;
    std::function<TreeSum(const Tree&)> rec = [&](const Tree& u) -> TreeSum {
        auto it = memo.find(u.key());
        if (it != memo.end()) return it->second;
        TreeSum v = antipode_step(u, cx, rec);
        memo.emplace(u.key(), v);
        return v;
    };
    return rec(t);
}

TreeSum antipode_worklist(const Tree& t, const AntipodeCtx& cx) {
    // Dependency closure, then evaluation in graded order: every lookup must
    // hit an already-filled table slot or the grading argument is wrong.
    std::map<std::string, Tree> todo;
    std::deque<Tree> queue{t};
    todo.emplace(t.key(), t);
    while (!queue.empty()) {
        Tree u = queue.front();
        queue.pop_front();
        for (const auto& d : antipode_deps(u, cx))
            if (todo.emplace(d.key(), d).second) queue.push_back(d);
    }
    std::vector<Tree> order;
    order.reserve(todo.size());
    for (const auto& [k, u] : todo) order.push_back(u);
    std::sort(order.begin(), order.end(), [](const Tree& a, const Tree& b) {
        return std::tuple(a.edge_count(), a.root_dec().abs(), a.key()) <
               std::tuple(b.edge_count(), b.root_dec().abs(), b.key());
    });

    std::map<std::string, TreeSum> table;
    auto lookup = [&](const Tree& u) -> TreeSum {
        auto it = table.find(u.key());
        if (it == table.end())
            throw std::logic_error("worklist order violated at " + u.key());
        return it->second;
    };
    for (const auto& u : order) table.emplace(u.key(), antipode_step(u, cx, lookup));
    return table.at(t.key());
}

}  // namespace

TreeSum antipode_plus(const Tree& t_in, const Scaling& sc, PlusAntipode variant, long cutoff,
                      TwistedBound bound, EvalStrategy strategy) {
    Tree t = clear_hats(t_in);
    AntipodeCtx cx{sc, variant, cutoff, bound};
    return strategy == EvalStrategy::Recursive ? antipode_recursive(t, cx)
                                               : antipode_worklist(t, cx);
}

// ---------------------------------------------------------------------------
// Undecorated Connes-Kreimer structure

void CkTree::rebuild() {
    std::sort(children_.begin(), children_.end());
    vertices_ = 1;
    for (const auto& c : children_) vertices_ += c.vertex_count();
    if (children_.empty()) {
        key_ = "o";
        return;
    }
    key_ = "o(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) key_ += ",";
        key_ += children_[i].key();
    }
    key_ += ")";
}

void CkForest::rebuild() {
    std::sort(parts_.begin(), parts_.end());
    vertices_ = 0;
    for (const auto& p : parts_) vertices_ += p.vertex_count();
    if (parts_.empty()) {
        key_ = "1";
        return;
    }
    key_.clear();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) key_ += ".";
        key_ += parts_[i].key();
    }
}

CkForest ck_forest_product(const CkForest& a, const CkForest& b) {
    std::vector<CkTree> parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    return CkForest(std::move(parts));
}

CkTree ck_from_tree(const Tree& t) {
    if (!t.root_dec().is_zero())
        throw std::invalid_argument("plain tree expected (node decoration found): " + t.str());
    std::vector<CkTree> kids;
    std::string type;
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        if (!e.p.is_zero() || e.hat)
            throw std::invalid_argument("plain tree expected (edge decoration found): " +
                                        t.str());
        if (type.empty()) type = e.type;
        if (e.type != type)
            throw std::invalid_argument("plain tree expected (mixed edge types): " + t.str());
        kids.push_back(ck_from_tree(t.branch_child(i)));
    }
    return CkTree(std::move(kids));
}

namespace {

CkTensor ck_tensor_mul(const CkTensor& a, const CkTensor& b) {
    CkTensor out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
            out.add({ck_forest_product(ka.first, kb.first),
                     ck_forest_product(ka.second, kb.second)},
                    ca * cb);
    return out;
}

}  // namespace

// Delta tau = 1 (x) tau + (B_+ (x) id) Delta (children), trunk on the left.
CkTensor ck_coproduct(const CkTree& t) {
    CkTensor out;
    out.add({CkForest(), CkForest(t)}, 1);
    for (const auto& [k, c] : ck_coproduct(CkForest(t.children())))
        out.add({CkForest(CkTree(k.first.parts())), k.second}, c);
    return out;
}

CkTensor ck_coproduct(const CkForest& f) {
    CkTensor acc = CkTensor::single({CkForest(), CkForest()});
    for (const auto& part : f.parts()) acc = ck_tensor_mul(acc, ck_coproduct(part));
    return acc;
}

CkTensor ck_coproduct_by_cuts(const CkTree& t) {
    // For each branch: either cut the edge (child joins the pruned forest)
    // or keep it and splice one of the child's own cut options into the
    // trunk. The left leg always keeps the root, so the term 1 (x) tau from
    // the cut above the root is added separately.
    std::function<CkTensor(const CkTree&)> cuts = [&](const CkTree& u) -> CkTensor {
        using Partial = LinComb<std::pair<CkForest, CkForest>, Rat>;
        Partial acc = Partial::single({CkForest(), CkForest()});
        for (const auto& child : u.children()) {
            Partial opts;
            opts.add({CkForest(), CkForest(child)}, 1);
            for (const auto& [k, c] : cuts(child)) {
                if (k.first.parts().size() != 1)
                    throw std::logic_error("cut trunk must stay connected");
                opts.add({k.first, k.second}, c);
            }
            acc = ck_tensor_mul(acc, opts);
        }
        CkTensor out;
        for (const auto& [k, c] : acc)
            out.add({CkForest(CkTree(k.first.parts())), k.second}, c);
        return out;
    };

    CkTensor out = cuts(t);
    out.add({CkForest(), CkForest(t)}, 1);
    return out;
}

CkForestSum ck_antipode(const CkTree& t) {
    // A(tau) = -tau - sum over proper cuts of A(trunk) * pruned.
    CkForestSum out;
    out.add(CkForest(t), -1);
    for (const auto& [k, c] : ck_coproduct(t)) {
        if (k.first.is_empty() || k.first == CkForest(t)) continue;
        if (k.first.parts().size() != 1) throw std::logic_error("trunk must be a single tree");
        for (const auto& [kf, cf] : ck_antipode(k.first.parts().front()))
            out.add(ck_forest_product(kf, k.second), Rat(-1) * c * cf);
    }
    return out;
}

CkForestSum ck_antipode(const CkForest& f) {
    CkForestSum acc = CkForestSum::single(CkForest());
    for (const auto& part : f.parts()) {
        CkForestSum next;
        for (const auto& [ka, ca] : acc)
            for (const auto& [kb, cb] : ck_antipode(part))
                next.add(ck_forest_product(ka, kb), ca * cb);
        acc = next;
    }
    return acc;
}

}  // namespace birch
