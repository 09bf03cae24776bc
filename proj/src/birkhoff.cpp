#include "birch/birkhoff.hpp"

#include <utility>

namespace birch {

RsBogoliubov::RsBogoliubov(Scaling sc, RecentredFamily family, std::vector<double> x,
                           std::vector<double> xbar)
    : sc_(std::move(sc)), family_(std::move(family)), x_(std::move(x)), xbar_(std::move(xbar)) {
    if (x_.size() != sc_.dim() || xbar_.size() != sc_.dim())
        throw std::invalid_argument("point dim mismatch with scaling");
}

GaussPolyFn RsBogoliubov::prep(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = prep_.find(t.key()); it != prep_.end()) return it->second;
    GaussPolyFn v = family_(t, xbar_);
    for (const auto& [legs, c] : delta_plus_reduced(t, sc_, false)) {
        double w = rat_double(c) * counterterm(legs.second);
        if (w != 0.0) v = v + w * family_(legs.first, xbar_);
    }
    prep_.emplace(t.key(), v);
    return v;
}

GaussPolyFn RsBogoliubov::minus(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = minus_.find(t.key()); it != minus_.end()) return it->second;
    GaussPolyFn v(sc_.dim());
    if (t.is_unit())
        v = GaussPolyFn::constant(sc_.dim(), 1.0);
    else if (is_positive(t, sc_))
        v = -taylor_jet(prep(t), degree(t, sc_), x_, sc_.weights());
    minus_.emplace(t.key(), v);
    return v;
}

double RsBogoliubov::counterterm(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = counter_.find(t.key()); it != counter_.end()) return it->second;
    double v = minus(t).eval(xbar_);
    counter_.emplace(t.key(), v);
    return v;
}

GaussPolyFn RsBogoliubov::plus(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = plus_.find(t.key()); it != plus_.end()) return it->second;
    GaussPolyFn v(sc_.dim());
    for (const auto& [legs, c] : delta_plus(t, sc_, PlusCoproduct::Hat)) {
        double w = rat_double(c) * counterterm(legs.second);
        if (w != 0.0) v = v + w * family_(legs.first, xbar_);
    }
    plus_.emplace(t.key(), v);
    return v;
}

RsSimplifiedBogoliubov::RsSimplifiedBogoliubov(Scaling sc, TreeFn phi)
    : sc_(std::move(sc)), phi_(std::move(phi)), origin_(sc_.dim(), 0.0) {}

GaussPolyFn RsSimplifiedBogoliubov::prep(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = prep_.find(t.key()); it != prep_.end()) return it->second;
    GaussPolyFn v = phi_(t);
    for (const auto& [legs, c] : delta_plus_reduced(t, sc_, true))
        v = v + rat_double(c) * (phi_(legs.first) * minus(legs.second));
    prep_.emplace(t.key(), v);
    return v;
}

GaussPolyFn RsSimplifiedBogoliubov::minus(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = minus_.find(t.key()); it != minus_.end()) return it->second;
    GaussPolyFn v(sc_.dim());
    if (t.is_unit())
        v = GaussPolyFn::constant(sc_.dim(), 1.0);
    else if (is_positive(t, sc_))
        v = -taylor_jet(prep(t), degree(t, sc_), origin_, sc_.weights());
    minus_.emplace(t.key(), v);
    return v;
}

GaussPolyFn RsSimplifiedBogoliubov::plus(const Tree& t0) {
    Tree t = clear_hats(t0);
    if (auto it = plus_.find(t.key()); it != plus_.end()) return it->second;
    GaussPolyFn v(sc_.dim());
    for (const auto& [legs, c] : delta_plus(t, sc_, PlusCoproduct::SimplifiedHat)) {
        double w = rat_double(c) * minus(legs.second).eval(origin_);
        if (w != 0.0) v = v + w * phi_(legs.first);
    }
    plus_.emplace(t.key(), v);
    return v;
}

}  // namespace birch
