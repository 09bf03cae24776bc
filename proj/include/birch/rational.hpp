#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace birch {

// Exact rational scalar used throughout the combinatorial layer. All
// coproduct/antipode coefficients are computed in Rat so that equality
// checks on tree sums are exact, not approximate.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "3", "-3", "3/4", "-3/4". Used by the scaling config loader and
// the CLI, which both exchange rationals as strings to avoid float drift.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) {
    return q.get_str();
}

inline double rat_double(const Rat& q) {
    return q.get_d();
}

inline bool is_integer(const Rat& q) {
    return q.get_den() == 1;
}

// n! as an exact rational; n stays desk-sized (multi-index entries).
inline Rat rat_factorial(unsigned n) {
    Rat r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= (long)i;
    return r;
}

inline long binomial_long(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (long)(n - k + i) / (long)i;
    return r;
}

}  // namespace birch
