#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

namespace birch {

// Laurent series with finite pole part, truncated at a fixed top exponent.
// Coefficients are doubles; the Birkhoff tests feed dyadic values so that
// sums and products stay exact. Zero coefficients are never stored, which
// makes operator== a genuine equality of truncated series.
class LaurentSeries {
public:
    explicit LaurentSeries(int trunc = 10) : trunc_(trunc) {}

    static LaurentSeries term(double a, int n, int trunc = 10) {
        LaurentSeries s(trunc);
        s.add(n, a);
        return s;
    }

    int trunc() const { return trunc_; }
    const std::map<int, double>& coeffs() const { return c_; }

    double coeff(int n) const {
        auto it = c_.find(n);
        return it == c_.end() ? 0.0 : it->second;
    }

    bool is_zero() const { return c_.empty(); }

    void add(int n, double a) {
        if (n > trunc_ || a == 0.0) return;
        double& slot = c_[n];
        slot += a;
        if (slot == 0.0) c_.erase(n);
    }

    friend LaurentSeries operator+(const LaurentSeries& x, const LaurentSeries& y) {
        LaurentSeries r(std::min(x.trunc_, y.trunc_));
        for (auto& [n, a] : x.c_) r.add(n, a);
        for (auto& [n, a] : y.c_) r.add(n, a);
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& x, const LaurentSeries& y) {
        LaurentSeries r(std::min(x.trunc_, y.trunc_));
        for (auto& [n, a] : x.c_) r.add(n, a);
        for (auto& [n, a] : y.c_) r.add(n, -a);
        return r;
    }
    friend LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y) {
        LaurentSeries r(std::min(x.trunc_, y.trunc_));
        for (auto& [n, a] : x.c_)
            for (auto& [m, b] : y.c_) r.add(n + m, a * b);
        return r;
    }
    friend LaurentSeries operator*(double s, const LaurentSeries& y) {
        LaurentSeries r(y.trunc_);
        for (auto& [n, a] : y.c_) r.add(n, s * a);
        return r;
    }
    LaurentSeries operator-() const { return -1.0 * *this; }

    friend bool operator==(const LaurentSeries& x, const LaurentSeries& y) {
        return x.c_ == y.c_;
    }

    // Minimal-subtraction projector: keep the pole part.
    LaurentSeries pole_part() const {
        LaurentSeries r(trunc_);
        for (auto& [n, a] : c_)
            if (n < 0) r.add(n, a);
        return r;
    }

    LaurentSeries regular_part() const {
        LaurentSeries r(trunc_);
        for (auto& [n, a] : c_)
            if (n >= 0) r.add(n, a);
        return r;
    }

    // Series inverse via the geometric expansion around the leading term.
    // Only used as a cross-check; the Birkhoff layer inverts characters
    // through the antipode instead, which avoids division entirely.
    LaurentSeries inverse() const {
        if (c_.empty()) throw std::domain_error("inverse of zero Laurent series");
        auto lead = c_.begin();
        int m = lead->first;
        double a = lead->second;
        LaurentSeries u(trunc_);  // f = a t^m (1 + u)
        for (auto it = std::next(c_.begin()); it != c_.end(); ++it)
            u.add(it->first - m, it->second / a);
        LaurentSeries inv = term(1.0 / a, -m, trunc_);
        LaurentSeries pow = term(1.0 / a, -m, trunc_);
        // u has strictly positive exponents, so the expansion terminates
        for (int j = 0; j < 2 * trunc_ + 4 && !pow.is_zero(); ++j) {
            pow = -1.0 * (pow * u);
            inv = inv + pow;
        }
        return inv;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (auto& [n, a] : c_) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", a);
            if (!s.empty()) s += " + ";
            s += buf;
            if (n != 0) s += "*t^" + std::to_string(n);
        }
        return s;
    }

private:
    std::map<int, double> c_;
    int trunc_;
};

inline LaurentSeries laurent_pole_project(const LaurentSeries& f) {
    return f.pole_part();
}

}  // namespace birch
