#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "birch/rational.hpp"

namespace birch {

// Multi-index over the d+1 space-time directions. Used both for node
// decorations (polynomial exponents) and edge decorations (derivative
// counts). Entries are small non-negative integers.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : k_(dim, 0) {}
    explicit MultiIndex(std::vector<unsigned> k) : k_(std::move(k)) {}

    static MultiIndex unit(std::size_t dim, std::size_t axis, unsigned v = 1) {
        MultiIndex m(dim);
        m.k_.at(axis) = v;
        return m;
    }

    std::size_t dim() const { return k_.size(); }
    unsigned operator[](std::size_t i) const { return k_[i]; }
    const std::vector<unsigned>& entries() const { return k_; }

    bool is_zero() const {
        return std::all_of(k_.begin(), k_.end(), [](unsigned v) { return v == 0; });
    }

    // |k|_1, plain entry sum (grading by total exponent).
    unsigned abs() const { return std::accumulate(k_.begin(), k_.end(), 0u); }

    // |k|_s with integer scaling weights s.
    long weight(const std::vector<int>& s) const {
        if (s.size() != k_.size()) throw std::invalid_argument("scaling dim mismatch");
        long w = 0;
        for (std::size_t i = 0; i < k_.size(); ++i) w += (long)s[i] * (long)k_[i];
        return w;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        check_dim(o);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < k_.size(); ++i) r.k_[i] += o.k_[i];
        return r;
    }

    // Componentwise difference; caller must know o <= *this.
    MultiIndex operator-(const MultiIndex& o) const {
        check_dim(o);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < k_.size(); ++i) {
            if (o.k_[i] > k_[i]) throw std::invalid_argument("multiindex subtraction underflow");
            r.k_[i] -= o.k_[i];
        }
        return r;
    }

    bool leq(const MultiIndex& o) const {  // componentwise
        check_dim(o);
        for (std::size_t i = 0; i < k_.size(); ++i)
            if (k_[i] > o.k_[i]) return false;
        return true;
    }

    auto operator<=>(const MultiIndex& o) const = default;

    // k! = prod k_i!
    Rat factorial() const {
        Rat r = 1;
        for (unsigned v : k_) r *= rat_factorial(v);
        return r;
    }

    // (n choose k) = prod (n_i choose k_i); zero unless k <= n componentwise.
    static Rat binomial(const MultiIndex& n, const MultiIndex& k) {
        if (!k.leq(n)) return 0;
        Rat r = 1;
        for (std::size_t i = 0; i < n.dim(); ++i) r *= binomial_long(n[i], k[i]);
        return r;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < k_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(k_[i]);
        }
        s += ']';
        return s;
    }

private:
    void check_dim(const MultiIndex& o) const {
        if (o.k_.size() != k_.size()) throw std::invalid_argument("multiindex dim mismatch");
    }
    std::vector<unsigned> k_;
};

// All l with |l|_s <= bound (or < bound when strict). The scaling weights are
// positive integers, so the enumeration is finite. Order is deterministic
// (lexicographic in the entries).
inline std::vector<MultiIndex> enumerate_multiindices(const std::vector<int>& s, const Rat& bound,
                                                      bool strict) {
    std::vector<MultiIndex> out;
    std::size_t dim = s.size();
    std::vector<unsigned> cur(dim, 0);
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t axis, Rat used) {
        if (axis == dim) {
            out.emplace_back(cur);
            return;
        }
        for (unsigned v = 0;; ++v) {
            Rat w = used + Rat((long)s[axis]) * (long)v;
            if (strict ? !(w < bound) : !(w <= bound)) break;
            cur[axis] = v;
            rec(axis + 1, w);
        }
        cur[axis] = 0;
    };
    if (strict ? (Rat(0) < bound) : (Rat(0) <= bound)) rec(0, 0);
    return out;
}

// All j with j <= n componentwise, for binomial expansions of X^n.
inline std::vector<MultiIndex> enumerate_below(const MultiIndex& n) {
    std::vector<MultiIndex> out;
    std::size_t dim = n.dim();
    std::vector<unsigned> cur(dim, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t axis) {
        if (axis == dim) {
            out.emplace_back(cur);
            return;
        }
        for (unsigned v = 0; v <= n[axis]; ++v) {
            cur[axis] = v;
            rec(axis + 1);
        }
        cur[axis] = 0;
    };
    rec(0);
    return out;
}

}  // namespace birch
