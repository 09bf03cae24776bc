#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "birch/rational.hpp"
#include "birch/tree.hpp"

namespace birch {

// Finite linear combination of keys with exact-zero normalisation: a key is
// stored only with a nonzero coefficient, so equality of maps is equality of
// sums. Keys need a strict total order; Tree and Forest compare by canonical
// key, pairs/tuples lexicographically.
template <class K, class C = Rat>
class LinComb {
public:
    using key_type = K;
    using coeff_type = C;
    using map_type = std::map<K, C>;

    LinComb() = default;

    static LinComb single(const K& k, const C& c = C(1)) {
        LinComb r;
        r.add(k, c);
        return r;
    }

    void add(const K& k, const C& c) {
        if (c == C(0)) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    LinComb& operator+=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, C(0) - c);
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }

    LinComb operator-() const {
        LinComb r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, C(0) - c);
        return r;
    }

    friend LinComb operator*(const C& s, const LinComb& a) {
        LinComb r;
        if (s == C(0)) return r;
        for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, s * c);
        return r;
    }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    C coeff(const K& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }

    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

    // Linear extension: f maps a key to a LinComb (possibly of another key
    // type); coefficients multiply through.
    template <class F>
    auto bind(F&& f) const {
        using R = decltype(f(std::declval<const K&>()));
        R out;
        for (const auto& [k, c] : terms_) out += c * f(k);
        return out;
    }

    template <class F>
    auto map_keys(F&& f) const {
        using K2 = decltype(f(std::declval<const K&>()));
        LinComb<K2, C> out;
        for (const auto& [k, c] : terms_) out.add(f(k), c);
        return out;
    }

    template <class Pred>
    LinComb filter(Pred&& keep) const {
        LinComb out;
        for (const auto& [k, c] : terms_)
            if (keep(k)) out.terms_.emplace(k, c);
        return out;
    }

private:
    template <class K2, class C2>
    friend class LinComb;
    map_type terms_;
};

using TreeSum = LinComb<Tree, Rat>;
using ForestSum = LinComb<Forest, Rat>;
using TensorSum = LinComb<std::pair<Tree, Tree>, Rat>;          // tree (x) tree
using ForestTensor = LinComb<std::pair<Forest, Tree>, Rat>;     // forest (x) tree
using TreeSumD = LinComb<Tree, double>;

template <class A, class B, class C>
LinComb<std::pair<A, B>, C> tensor(const LinComb<A, C>& a, const LinComb<B, C>& b) {
    LinComb<std::pair<A, B>, C> out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add({ka, kb}, ca * cb);
    return out;
}

template <class K>
LinComb<K, double> to_double(const LinComb<K, Rat>& a) {
    LinComb<K, double> out;
    for (const auto& [k, c] : a) out.add(k, rat_double(c));
    return out;
}

// Largest absolute coefficient gap between two double-coefficient sums.
template <class K>
double max_gap(const LinComb<K, double>& a, const LinComb<K, double>& b) {
    double m = 0;
    for (const auto& [k, c] : a) m = std::max(m, std::fabs(c - b.coeff(k)));
    for (const auto& [k, c] : b) m = std::max(m, std::fabs(c - a.coeff(k)));
    return m;
}

}  // namespace birch
