#pragma once

#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include "birch/multiindex.hpp"

namespace birch {

// Phase polynomial in the frequency variables k_1..k_n with integer
// coefficients; exponent -> coefficient, zero coefficients never stored.
// The zero polynomial (empty map) is the zero phase.
using Phase = std::map<MultiIndex, long>;

// Polynomial in the scalar variable z.
using ZPoly = std::map<unsigned, double>;

inline Phase phase_add(const Phase& a, const Phase& b) {
    Phase r = a;
    for (auto& [k, c] : b) {
        long& slot = r[k];
        slot += c;
        if (slot == 0) r.erase(k);
    }
    return r;
}

// Functions z -> sum_j Q_j(z) exp(i z P_j(k_1..k_n)), an algebra under the
// pointwise product (phases add, polynomial prefactors multiply). The
// projector onto the zero-phase part is an idempotent algebra morphism as
// long as no two nonzero phases in a product cancel; the verification
// suites draw phases with nonnegative coefficients, where cancellation is
// impossible.
class OscillatoryFn {
public:
    explicit OscillatoryFn(std::size_t freq_dim) : freq_dim_(freq_dim) {}

    static OscillatoryFn zpoly(std::size_t freq_dim, const ZPoly& q) {
        OscillatoryFn f(freq_dim);
        for (auto& [n, c] : q) f.add_term(Phase{}, n, c);
        return f;
    }

    static OscillatoryFn oscillation(std::size_t freq_dim, const Phase& p, const ZPoly& q) {
        OscillatoryFn f(freq_dim);
        for (auto& [n, c] : q) f.add_term(p, n, c);
        return f;
    }

    std::size_t freq_dim() const { return freq_dim_; }
    const std::map<Phase, ZPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Phase& p, unsigned zpow, double c) {
        if (c == 0.0) return;
        for (auto& [k, v] : p)
            if (k.dim() != freq_dim_) throw std::invalid_argument("phase dim mismatch");
        ZPoly& q = terms_[p];
        double& slot = q[zpow];
        slot += c;
        if (slot == 0.0) {
            q.erase(zpow);
            if (q.empty()) terms_.erase(p);
        }
    }

    friend OscillatoryFn operator+(const OscillatoryFn& f, const OscillatoryFn& g) {
        OscillatoryFn r = f;
        for (auto& [p, q] : g.terms_)
            for (auto& [n, c] : q) r.add_term(p, n, c);
        return r;
    }
    friend OscillatoryFn operator-(const OscillatoryFn& f, const OscillatoryFn& g) {
        OscillatoryFn r = f;
        for (auto& [p, q] : g.terms_)
            for (auto& [n, c] : q) r.add_term(p, n, -c);
        return r;
    }
    friend OscillatoryFn operator*(const OscillatoryFn& f, const OscillatoryFn& g) {
        if (f.freq_dim_ != g.freq_dim_) throw std::invalid_argument("frequency dim mismatch");
        OscillatoryFn r(f.freq_dim_);
        for (auto& [p1, q1] : f.terms_)
            for (auto& [p2, q2] : g.terms_) {
                Phase p = phase_add(p1, p2);
                for (auto& [n1, c1] : q1)
                    for (auto& [n2, c2] : q2) r.add_term(p, n1 + n2, c1 * c2);
            }
        return r;
    }
    friend OscillatoryFn operator*(double s, const OscillatoryFn& f) {
        OscillatoryFn r(f.freq_dim_);
        for (auto& [p, q] : f.terms_)
            for (auto& [n, c] : q) r.add_term(p, n, s * c);
        return r;
    }

    friend bool operator==(const OscillatoryFn& f, const OscillatoryFn& g) {
        return f.freq_dim_ == g.freq_dim_ && f.terms_ == g.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [p, q] : terms_) {
            for (auto& [n, c] : q) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", c);
                if (!s.empty()) s += " + ";
                s += buf;
                if (n != 0) s += "*z^" + std::to_string(n);
                if (!p.empty()) {
                    s += "*e^{iz(";
                    bool first = true;
                    for (auto& [k, v] : p) {
                        if (!first) s += "+";
                        first = false;
                        s += std::to_string(v) + "*k^" + k.str();
                    }
                    s += ")}";
                }
            }
        }
        return s;
    }

private:
    std::size_t freq_dim_;
    std::map<Phase, ZPoly> terms_;
};

// Projection onto the zero-phase (polynomial) part.
inline OscillatoryFn osc_project(const OscillatoryFn& f) {
    OscillatoryFn r(f.freq_dim());
    auto it = f.terms().find(Phase{});
    if (it != f.terms().end())
        for (auto& [n, c] : it->second) r.add_term(Phase{}, n, c);
    return r;
}

}  // namespace birch
