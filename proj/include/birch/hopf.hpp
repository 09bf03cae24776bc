#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "birch/linear.hpp"
#include "birch/scaling.hpp"
#include "birch/tree.hpp"

namespace birch {

// Coproduct flavours on decorated trees.
//
//  FullTruncated  untruncated recursion with the derivative sums cut at
//                 |l|_s <= cutoff; exact in each bigrade once the cutoff
//                 clears that grade.
//  Hat            (id (x) pi_+) of the full coproduct; finite without a
//                 cutoff because positivity bounds the derivative sums.
//  Bar            (pi_+ (x) pi_+), the restriction to the positive subspace.
//  Reduced        Hat minus the primitive part: drops t (x) 1 and every term
//                 whose left leg is a bare monomial. Monomials map to 0.
//  SimplifiedHat  recentering around the origin only: X_i (x) 1 for
//                 monomials, and the derivative sum absorbed into planted
//                 right legs.
//  SimplifiedBar  coproduct of the connected positive Hopf algebra built on
//                 planted positive trees.
enum class PlusCoproduct { FullTruncated, Hat, Bar, Reduced, SimplifiedHat, SimplifiedBar };

TensorSum delta_plus(const Tree& t, const Scaling& sc, PlusCoproduct mode, long cutoff = 0);

// Reduced coproduct used by the Bogoliubov recursions; `simplified` selects
// the SimplifiedHat base coproduct instead of Hat.
TensorSum delta_plus_reduced(const Tree& t, const Scaling& sc, bool simplified = false);

// Antipode flavours matching the coproducts.
//
//  FullTruncated    antipode of the full coproduct, derivative sums cut at
//                   |l|_s <= cutoff.
//  Bar              antipode of the positive Hopf algebra (projected planted
//                   left legs, finite sums).
//  Twisted          twisted antipode into the hatted space: planted left
//                   legs keep negative branches (J markers) and the
//                   derivative sum stops at the degree of the argument.
//  Simplified       antipode of the connected simplified Hopf algebra.
//  SimplifiedTwisted twisted antipode in the simplified setting.
enum class PlusAntipode { FullTruncated, Bar, Twisted, Simplified, SimplifiedTwisted };

// Boundary convention for the Twisted derivative sum: the displayed
// recursion sums |l|_s <= degree, while the model construction uses the
// strict variant that matches the Taylor-jet convention. The two coincide
// whenever the degree is not attained by an integer weight.
enum class TwistedBound { UpToDegree, BelowDegree };

// Evaluation strategy; both must produce bit-identical results. Recursive is
// plain memoised descent, Worklist precomputes the dependency closure and
// fills a table in graded order.
enum class EvalStrategy { Recursive, Worklist };

TreeSum antipode_plus(const Tree& t, const Scaling& sc, PlusAntipode variant, long cutoff = 0,
                      TwistedBound bound = TwistedBound::UpToDegree,
                      EvalStrategy strategy = EvalStrategy::Recursive);

// (Delta_hat (x) id) Delta_hat == (id (x) Delta_bar) Delta_hat, checked
// exactly; the comodule-over-Hopf compatibility of the recentering coaction.
bool coaction_compose_check(const Tree& t, const Scaling& sc);

// --- Undecorated Connes-Kreimer structure ---------------------------------
//
// Classical rooted trees need their own carrier: here the single vertex is a
// generator and the algebra unit is the empty forest, whereas in the
// decorated algebra the bare node X^0 is the unit. Coproduct legs are
// ordered trunk (x) pruned forest, matching the convention used by the
// renormalisation recursions (counterterms act on the pruned leg).

// Undecorated rooted tree in canonical form (children sorted by key).
class CkTree {
public:
    CkTree() { rebuild(); }
    explicit CkTree(std::vector<CkTree> children) : children_(std::move(children)) { rebuild(); }
    CkTree(std::initializer_list<CkTree> children) : children_(children) { rebuild(); }

    const std::vector<CkTree>& children() const { return children_; }
    long vertex_count() const { return vertices_; }

    const std::string& key() const { return key_; }
    const std::string& str() const { return key_; }

    friend bool operator==(const CkTree& a, const CkTree& b) { return a.key_ == b.key_; }
    friend bool operator<(const CkTree& a, const CkTree& b) { return a.key_ < b.key_; }

private:
    void rebuild();
    std::vector<CkTree> children_;
    std::string key_;
    long vertices_ = 0;
};

// Multiset of classical trees; the empty forest is the unit.
class CkForest {
public:
    CkForest() { rebuild(); }
    explicit CkForest(const CkTree& t) : parts_{t} { rebuild(); }
    explicit CkForest(std::vector<CkTree> parts) : parts_(std::move(parts)) { rebuild(); }
    CkForest(std::initializer_list<CkTree> parts) : parts_(parts) { rebuild(); }

    const std::vector<CkTree>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }
    long vertex_count() const { return vertices_; }

    const std::string& key() const { return key_; }
    const std::string& str() const { return key_; }

    friend bool operator==(const CkForest& a, const CkForest& b) { return a.key_ == b.key_; }
    friend bool operator<(const CkForest& a, const CkForest& b) { return a.key_ < b.key_; }

private:
    void rebuild();
    std::vector<CkTree> parts_;
    std::string key_;
    long vertices_ = 0;
};

CkForest ck_forest_product(const CkForest& a, const CkForest& b);

using CkForestSum = LinComb<CkForest, Rat>;
using CkTensor = LinComb<std::pair<CkForest, CkForest>, Rat>;

// Bridge from the shared grammar: accepts a tree with zero decorations and a
// single edge type; the decorated unit maps to the single vertex.
CkTree ck_from_tree(const Tree& t);

CkTensor ck_coproduct(const CkTree& t);
CkTensor ck_coproduct(const CkForest& f);

// Independent oracle: enumerate admissible edge cuts directly instead of
// unfolding the B_+ recursion.
CkTensor ck_coproduct_by_cuts(const CkTree& t);

CkForestSum ck_antipode(const CkTree& t);
CkForestSum ck_antipode(const CkForest& f);

}  // namespace birch
