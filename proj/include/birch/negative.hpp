#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "birch/gausspoly.hpp"
#include "birch/hopf.hpp"
#include "birch/linear.hpp"
#include "birch/models.hpp"
#include "birch/scaling.hpp"
#include "birch/symtensor.hpp"
#include "birch/tree.hpp"

namespace birch {

// Negative renormalisation lives on the free commutative algebra over trees:
// forests are the monomials, the empty forest is the unit. The quotient
// algebra keeps only forests all of whose parts have strictly negative
// degree; anything containing a nonnegative tree is zero there.

Rat degree(const Forest& f, const Scaling& sc);
bool is_negative_forest(const Forest& f, const Scaling& sc);

// Coproduct on forests: extracted forest (x) contracted remainder.
using ForestCoproduct = LinComb<std::pair<Forest, Forest>, Rat>;

// Extraction-contraction coaction, tree to extracted-forest (x) contracted
// tree. A summand per family of vertex-disjoint connected subtrees, each of
// strictly negative degree: the left leg collects the extracted subtrees
// with their decorations, the right leg is the input with every subtree
// collapsed to one node carrying the sum of the collapsed decorations (edge
// decorations elsewhere unchanged). The empty family gives 1_1 (x) t; when
// degree(t) < 0 the full family gives t (x) X^(total decoration). Planted
// markers are inert: a marked root branch pins the root and its edge
// outside every subtree, so extraction only sees the subtree below it.
ForestTensor extraction_contraction(const Tree& t, const Scaling& sc);

// Multiplicative extension to forests (right legs collected as a forest).
ForestCoproduct extraction_contraction(const Forest& f, const Scaling& sc);

// Pluggable coaction handle so the recursions downstream do not care which
// extraction rule produced their terms; the default is the undeformed
// extraction-contraction above.
struct NegCoaction {
    std::function<ForestTensor(const Tree&, const Scaling&)> coact;
    static NegCoaction undeformed();
};

// Coproduct of the quotient Hopf algebra: apply the coaction partwise,
// project both legs. Contracted right legs of nonnegative degree die; the
// full-extraction leg X^k is the class of the unit, so it normalises to the
// empty forest. Input containing a nonnegative part maps to zero.
ForestCoproduct delta_minus_bar(const Forest& f, const Scaling& sc,
                                const NegCoaction& co = NegCoaction::undeformed());

// Negative twisted antipode into the full forest algebra:
//   A_- tau = -tau - sum A_-(extracted) . contracted
// over the proper extraction terms (empty and full families dropped; the
// full term must go or the recursion would never shrink). Multiplicative
// over forests; throws when a part has nonnegative degree.
ForestSum negative_twisted_antipode(const Tree& t, const Scaling& sc,
                                    const NegCoaction& co = NegCoaction::undeformed());
ForestSum negative_twisted_antipode(const Forest& f, const Scaling& sc,
                                    const NegCoaction& co = NegCoaction::undeformed());

// Antipode of the quotient Hopf algebra (connected by edge grading, so the
// usual reduced-coproduct recursion applies). Throws off the quotient.
ForestSum negative_antipode(const Forest& f, const Scaling& sc);

// Bogoliubov recursion for the negative factorisation. psi lifts a tree
// character into symmetric tensors: a forest becomes the word of its parts'
// atoms. prep is the Bogoliubov preparation
//   psibar(tau) = psi(tau) + sum psi_-(extracted) psi(contracted)
// over proper extraction terms; the counterterm evaluates the prepared
// tensor at the origin,
//   psi_-(tau) = -E(psibar(tau))(0),
// is 1 on the unit, 0 on nonnegative trees (the quotient), and
// multiplicative over forests. The renormalised side is the Bogoliubov
// split of the prepared tensor,
//   psi_+(tau) = psibar(tau) - E(psibar(tau))(0) = psibar(tau) + psi_-(tau),
// which lands in the kernel of E(.)(0) by construction and extends to
// forests multiplicatively. star is the bare convolution
// (psi_- (x) psi) of the full coaction; it differs from psi_+ only through
// the total extraction leg, by psi_-(tau) (psi(X^k) - 1) with k the total
// node decoration, so the two routes agree on zero-decorated trees.
class NegativeBogoliubov {
public:
    NegativeBogoliubov(const Scaling& sc, TreeFn psi_tree,
                       NegCoaction co = NegCoaction::undeformed());

    SymTensor psi(const Tree& t) const;
    SymTensor psi(const Forest& f) const;
    SymTensor prep(const Tree& t) const;
    double minus(const Tree& t) const;
    double minus(const Forest& f) const;
    SymTensor plus(const Tree& t) const;
    SymTensor plus(const Forest& f) const;
    SymTensor star(const Tree& t) const;

private:
    Scaling sc_;
    TreeFn psit_;
    NegCoaction co_;
    mutable std::map<std::string, double> minus_memo_;
};

// M = (psi_- (x) id) applied to the coaction; the counterterm character is
// any constant-valued character on the quotient (nonnegative parts are its
// business to kill).
RealTreeSum renormalisation_map(const std::function<double(const Forest&)>& counter,
                                const Tree& t, const Scaling& sc,
                                const NegCoaction& co = NegCoaction::undeformed());

// Renormalised model Pi-hat_x = (Pi M (x) f_x M) of the recentring
// coproduct, with the lift and counterterm character of the given model.
// Trunk legs renormalise plainly; pruned legs keep their planted markers, so
// M only reaches below the cut edges. Equals (Pi_x M) whenever the
// cointeraction check passes for the tree.
GaussPolyFn renormalised_pi(const Model& m, const std::function<double(const Forest&)>& counter,
                            const Tree& t, const std::vector<double>& x,
                            const NegCoaction& co = NegCoaction::undeformed());

// Compatibility of extraction with recentring,
//   M^{(13)(2)(4)} (Delta^- (x) Delta^-) Delta^+ = (id (x) Delta^+) Delta^-,
// compared exactly as rational combinations of forest (x) tree (x) tree.
// Undeformed uses the plain cut coproduct (no derivative sums, the degree
// table untouched), the setting where the identity is a theorem; Hat uses
// the recentring coproduct, where recentring jets and extraction can
// collide, so the result is informative rather than guaranteed.
enum class CointeractionMode { Undeformed, Hat };

bool cointeraction_check(const Tree& t, const Scaling& sc, CointeractionMode mode);

// --- Double Hopf scaffolding ------------------------------------------------
//
// Pairs negative-forest (x) positive-tree with componentwise product. The
// coproduct twists the positive side by the coaction:
//   Delta_pm(a (x) b) = sum (a1 . c (x) b1) (x) (a2 (x) d)
// with a1 (x) a2 from the quotient coproduct, b1 (x) b2 from the positive
// coproduct and c (x) d from the coaction on b2. The antipode is
//   A_pm(a (x) b) = sum A_-(a . c) (x) A_+(d)
// over the coaction on b. Characters multiply by the semidirect law.

using PairKey = std::pair<Forest, Tree>;
using PairSum = LinComb<PairKey, Rat>;
using PairTensor = LinComb<std::pair<PairKey, PairKey>, Rat>;

PairKey pair_product(const PairKey& a, const PairKey& b);
PairTensor delta_pm(const PairKey& k, const Scaling& sc);
PairSum antipode_pm(const PairKey& k, const Scaling& sc);

struct PairCharacter {
    std::function<double(const Forest&)> minus;
    std::function<double(const Tree&)> plus;
};

// (g1, f1)(g2, f2) = (g1 * g2, f1 * (g1 * f2)): the minus components
// convolve over the quotient coproduct, g1 acts on f2 through the coaction,
// and the result convolves with f1 over the positive coproduct.
PairCharacter semidirect_product(const PairCharacter& a, const PairCharacter& b,
                                 const Scaling& sc);

}  // namespace birch
