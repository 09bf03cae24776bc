#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "birch/gausspoly.hpp"
#include "birch/hopf.hpp"
#include "birch/linear.hpp"
#include "birch/models.hpp"
#include "birch/rational.hpp"
#include "birch/scaling.hpp"
#include "birch/tree.hpp"

namespace birch {

namespace detail {

// Coproduct coefficients are exact rationals; targets carry double scalars.
template <class A>
A rat_scale(const Rat& c, const A& v) {
    return rat_double(c) * v;
}

template <class A>
void accumulate(std::optional<A>& acc, A v) {
    if (acc)
        *acc = *acc + v;
    else
        acc = std::move(v);
}

}  // namespace detail

// --- Convolution of characters --------------------------------------------

// (f * g)(t) = sum f(t') g(t'') over the chosen coproduct. Right legs are
// handed over verbatim (hatted trees included); characters that do not
// distinguish the planted marker should clear it themselves.
template <class A>
std::function<A(const Tree&)> convolve(std::function<A(const Tree&)> f,
                                       std::function<A(const Tree&)> g, const Scaling& sc,
                                       PlusCoproduct mode, long cutoff = 0) {
    return [f, g, sc, mode, cutoff](const Tree& t) {
        std::optional<A> acc;
        for (const auto& [legs, c] : delta_plus(t, sc, mode, cutoff))
            detail::accumulate(acc, detail::rat_scale(c, f(legs.first) * g(legs.second)));
        if (!acc) throw std::logic_error("empty coproduct in convolution");
        return *acc;
    };
}

// Evaluate a linear combination of trees through a character.
template <class A>
A eval_tree_sum(const TreeSum& s, const std::function<A(const Tree&)>& f, A zero) {
    A acc = std::move(zero);
    for (const auto& [t, c] : s) acc = acc + detail::rat_scale(c, f(t));
    return acc;
}

// --- Classical Birkhoff factorisation --------------------------------------
//
// Counterterm recursion for a character phi on the undecorated Hopf algebra
// with values in a commutative algebra A split by a Rota-Baxter projector
// proj of weight -1:
//
//   prep(t)  = sum over cuts with non-empty trunk of phi(trunk) minus(pruned)
//   minus(t) = -proj(prep(t)),             extended multiplicatively
//   plus(t)  = prep(t) - proj(prep(t))  =  (phi * minus)(t)
//
// All maps are memoised; evaluation order does not affect the values.
template <class A>
class CkBirkhoff {
public:
    CkBirkhoff(std::function<A(const CkTree&)> phi, std::function<A(const A&)> proj, A one,
               long max_grade = 24)
        : phi_(std::move(phi)), proj_(std::move(proj)), one_(std::move(one)),
          max_grade_(max_grade) {}

    // Character extension of phi to forests.
    A phi_forest(const CkForest& f) {
        if (f.is_empty()) return one_;
        A v = phi_(f.parts().front());
        for (std::size_t i = 1; i < f.parts().size(); ++i) v = v * phi_(f.parts()[i]);
        return v;
    }

    // Bogoliubov's preparation map.
    A prep(const CkTree& t) {
        if (auto it = prep_.find(t.key()); it != prep_.end()) return it->second;
        if (t.vertex_count() > max_grade_)
            throw std::invalid_argument("birkhoff: tree exceeds max_grade");
        std::optional<A> acc;
        for (const auto& [legs, c] : ck_coproduct(t)) {
            if (legs.first.is_empty()) continue;  // (phi - 1*) kills the empty trunk
            detail::accumulate(acc, detail::rat_scale(c, phi_forest(legs.first) * minus(legs.second)));
        }
        A v = *acc;  // the trunk = t cut is always present
        prep_.emplace(t.key(), v);
        return v;
    }

    A minus(const CkTree& t) {
        if (auto it = minus_.find(t.key()); it != minus_.end()) return it->second;
        A v = -proj_(prep(t));
        minus_.emplace(t.key(), v);
        return v;
    }
    A minus(const CkForest& f) {
        if (f.is_empty()) return one_;
        A v = minus(f.parts().front());
        for (std::size_t i = 1; i < f.parts().size(); ++i) v = v * minus(f.parts()[i]);
        return v;
    }

    A plus(const CkTree& t) {
        A p = prep(t);
        return p - proj_(p);
    }
    A plus(const CkForest& f) {
        if (f.is_empty()) return one_;
        A v = plus(f.parts().front());
        for (std::size_t i = 1; i < f.parts().size(); ++i) v = v * plus(f.parts()[i]);
        return v;
    }

    // (phi * minus)(t): independent route to plus through the convolution.
    A phi_star_minus(const CkTree& t) {
        std::optional<A> acc;
        for (const auto& [legs, c] : ck_coproduct(t))
            detail::accumulate(acc, detail::rat_scale(c, phi_forest(legs.first) * minus(legs.second)));
        return *acc;
    }

private:
    std::function<A(const CkTree&)> phi_;
    std::function<A(const A&)> proj_;
    A one_;
    long max_grade_;
    std::map<std::string, A> prep_, minus_;
};

// --- Comodule Birkhoff ------------------------------------------------------
//
// The decorated trees form a comodule over their positive Hopf algebra via
// the recentring coaction (Hat, or SimplifiedHat when simplified is set).
// For a map phi into A and a Rota-Baxter projector the factorisation reads
//
//   prep(t)  = sum over coaction terms with non-unit left leg of
//              phi(left) minus(right)
//   minus(t) = -proj(prep(t)) on positive trees, 1 on the unit
//   plus(t)  = (phi (x) minus) of the full coaction
//
// Right legs live in the positive algebra (planted markers set); minus
// clears the marker before recursing. prep(1) is reported as 1 to match the
// recursion for recentred families, although no recursion ever consumes it.
template <class A>
class ComoduleBirkhoff {
public:
    ComoduleBirkhoff(Scaling sc, bool simplified, std::function<A(const Tree&)> phi,
                     std::function<A(const A&)> proj, A one)
        : sc_(std::move(sc)),
          mode_(simplified ? PlusCoproduct::SimplifiedHat : PlusCoproduct::Hat),
          phi_(std::move(phi)), proj_(std::move(proj)), one_(std::move(one)) {}

    A prep(const Tree& t0) {
        Tree t = clear_hats(t0);
        if (t.is_unit()) return one_;
        if (auto it = prep_.find(t.key()); it != prep_.end()) return it->second;
        std::optional<A> acc;
        for (const auto& [legs, c] : delta_plus(t, sc_, mode_)) {
            if (legs.first.is_unit()) continue;
            detail::accumulate(acc, detail::rat_scale(c, phi_(legs.first) * minus(legs.second)));
        }
        A v = *acc;  // the t (x) 1 term engages the accumulator
        prep_.emplace(t.key(), v);
        return v;
    }

    A minus(const Tree& t0) {
        Tree t = clear_hats(t0);
        if (t.is_unit()) return one_;
        if (!is_positive(t, sc_))
            throw std::invalid_argument("comodule birkhoff: tree is not positive: " + t.str());
        if (auto it = minus_.find(t.key()); it != minus_.end()) return it->second;
        A v = -proj_(prep(t));
        minus_.emplace(t.key(), v);
        return v;
    }

    A plus(const Tree& t0) {
        Tree t = clear_hats(t0);
        std::optional<A> acc;
        for (const auto& [legs, c] : delta_plus(t, sc_, mode_))
            detail::accumulate(acc, detail::rat_scale(c, phi_(legs.first) * minus(legs.second)));
        return *acc;
    }

private:
    Scaling sc_;
    PlusCoproduct mode_;
    std::function<A(const Tree&)> phi_;
    std::function<A(const A&)> proj_;
    A one_;
    std::map<std::string, A> prep_, minus_;
};

// --- Bogoliubov recursion for recentred families ----------------------------
//
// family(tau, xbar) realises the recentred character phi_xbar as a function
// of the running point. x is the base point of the Taylor subtraction, xbar
// the recentring point:
//
//   prep(t)        = phi_xbar(t) + sum over the reduced coaction of
//                    phi_xbar(left) counterterm(right)
//   minus(t)       = -T_{deg t, x, .} prep(t) on positive trees, else 0
//   counterterm(t) = minus(t) evaluated at xbar
//   plus(t)        = (phi_xbar (x) counterterm) of the full coaction
//
// minus is a function of the subtraction endpoint; the counterterm character
// is its value at xbar. Outside the positive subspace the counterterm
// vanishes by definition.
class RsBogoliubov {
public:
    RsBogoliubov(Scaling sc, RecentredFamily family, std::vector<double> x,
                 std::vector<double> xbar);

    GaussPolyFn prep(const Tree& t);
    GaussPolyFn minus(const Tree& t);
    double counterterm(const Tree& t);
    GaussPolyFn plus(const Tree& t);

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& xbar() const { return xbar_; }

private:
    Scaling sc_;
    RecentredFamily family_;
    std::vector<double> x_, xbar_;
    std::map<std::string, GaussPolyFn> prep_, minus_, plus_;
    std::map<std::string, double> counter_;
};

// Simplified variant: recentring is dropped in favour of the origin, the
// counterterm legs stay functions of the running point throughout, and both
// coproducts are the simplified ones:
//
//   prep(t)  = phi(t) + sum over the reduced simplified coaction of
//              phi(left) . minus(right)          (pointwise products)
//   minus(t) = -T_{deg t, 0, .} prep(t) on positive trees, else 0
//   plus(t)  = sum over the simplified coaction of
//              phi(left) . minus(right)(0)
class RsSimplifiedBogoliubov {
public:
    RsSimplifiedBogoliubov(Scaling sc, TreeFn phi);

    GaussPolyFn prep(const Tree& t);
    GaussPolyFn minus(const Tree& t);
    GaussPolyFn plus(const Tree& t);

private:
    Scaling sc_;
    TreeFn phi_;
    std::vector<double> origin_;
    std::map<std::string, GaussPolyFn> prep_, minus_, plus_;
};

}  // namespace birch
