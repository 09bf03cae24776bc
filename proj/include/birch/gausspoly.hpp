#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "birch/multiindex.hpp"
#include "birch/rational.hpp"

namespace birch {

// Polynomial over the d+1 space-time variables: exponent -> coefficient.
using Poly = std::map<MultiIndex, double>;

// Smooth function of the form sum_j p_j(x) exp(-a_j |x|^2) with polynomial
// p_j and rational width a_j >= 0. The class is closed under sums, pointwise
// products, derivatives, convolution (when defined) and Taylor jets, so the
// analytic identities of the recursions can be checked without quadrature.
class GaussPolyFn {
public:
    explicit GaussPolyFn(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("function dimension must be positive");
    }

    static GaussPolyFn constant(std::size_t dim, double c) {
        GaussPolyFn f(dim);
        f.add_term(Rat(0), MultiIndex(dim), c);
        return f;
    }

    static GaussPolyFn monomial(std::size_t dim, const MultiIndex& k, double c = 1.0) {
        GaussPolyFn f(dim);
        f.add_term(Rat(0), k, c);
        return f;
    }

    // c * x^k * exp(-a |x|^2)
    static GaussPolyFn gaussian(std::size_t dim, const Rat& a, double c = 1.0) {
        GaussPolyFn f(dim);
        f.add_term(a, MultiIndex(dim), c);
        return f;
    }

    std::size_t dim() const { return dim_; }
    const std::map<Rat, Poly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Rat& width, const MultiIndex& k, double c) {
        if (width < 0) throw std::invalid_argument("negative Gaussian width");
        if (k.dim() != dim_) throw std::invalid_argument("monomial dim mismatch");
        if (c == 0.0) return;
        Poly& p = terms_[width];
        double& slot = p[k];
        slot += c;
        if (slot == 0.0) {
            p.erase(k);
            if (p.empty()) terms_.erase(width);
        }
    }

    friend GaussPolyFn operator+(const GaussPolyFn& f, const GaussPolyFn& g) {
        GaussPolyFn r = f;
        for (auto& [a, p] : g.terms_)
            for (auto& [k, c] : p) r.add_term(a, k, c);
        return r;
    }
    friend GaussPolyFn operator-(const GaussPolyFn& f, const GaussPolyFn& g) {
        GaussPolyFn r = f;
        for (auto& [a, p] : g.terms_)
            for (auto& [k, c] : p) r.add_term(a, k, -c);
        return r;
    }
    friend GaussPolyFn operator*(const GaussPolyFn& f, const GaussPolyFn& g) {
        if (f.dim_ != g.dim_) throw std::invalid_argument("function dim mismatch");
        GaussPolyFn r(f.dim_);
        for (auto& [a, p] : f.terms_)
            for (auto& [b, q] : g.terms_)
                for (auto& [k, c] : p)
                    for (auto& [l, d] : q) r.add_term(a + b, k + l, c * d);
        return r;
    }
    friend GaussPolyFn operator*(double s, const GaussPolyFn& f) {
        GaussPolyFn r(f.dim_);
        for (auto& [a, p] : f.terms_)
            for (auto& [k, c] : p) r.add_term(a, k, s * c);
        return r;
    }
    GaussPolyFn operator-() const { return -1.0 * *this; }

    friend bool operator==(const GaussPolyFn& f, const GaussPolyFn& g) {
        return f.dim_ == g.dim_ && f.terms_ == g.terms_;
    }

    // d/dx_axis of p(x) e^{-a|x|^2} = (dp/dx_axis - 2 a x_axis p) e^{-a|x|^2}
    GaussPolyFn derivative(std::size_t axis) const {
        if (axis >= dim_) throw std::invalid_argument("derivative axis out of range");
        GaussPolyFn r(dim_);
        for (auto& [a, p] : terms_) {
            for (auto& [k, c] : p) {
                if (k[axis] > 0) {
                    MultiIndex down = k - MultiIndex::unit(dim_, axis);
                    r.add_term(a, down, c * (double)k[axis]);
                }
                if (!(a == 0)) {
                    MultiIndex up = k + MultiIndex::unit(dim_, axis);
                    r.add_term(a, up, -2.0 * rat_double(a) * c);
                }
            }
        }
        return r;
    }

    GaussPolyFn derivative(const MultiIndex& l) const {
        GaussPolyFn r = *this;
        for (std::size_t i = 0; i < l.dim(); ++i)
            for (unsigned j = 0; j < l[i]; ++j) r = r.derivative(i);
        return r;
    }

    double eval(const std::vector<double>& x) const {
        if (x.size() != dim_) throw std::invalid_argument("evaluation point dim mismatch");
        double norm2 = 0;
        for (double xi : x) norm2 += xi * xi;
        double total = 0;
        for (auto& [a, p] : terms_) {
            double poly = 0;
            for (auto& [k, c] : p) {
                double mono = c;
                for (std::size_t i = 0; i < dim_; ++i)
                    for (unsigned j = 0; j < k[i]; ++j) mono *= x[i];
                poly += mono;
            }
            total += poly * std::exp(-rat_double(a) * norm2);
        }
        return total;
    }

    // True when every term has positive width (the function is integrable
    // with all moments finite).
    bool integrable() const {
        return terms_.empty() || terms_.begin()->first > 0;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [a, p] : terms_) {
            for (auto& [k, c] : p) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", c);
                if (!s.empty()) s += " + ";
                s += buf;
                if (!k.is_zero()) s += "*x^" + k.str();
                if (!(a == 0)) s += "*exp(-" + rat_str(a) + "|x|^2)";
            }
        }
        return s;
    }

private:
    std::size_t dim_;
    std::map<Rat, Poly> terms_;
};

// Exact convolution within the class. Throws std::domain_error when both
// factors contain a width-0 (pure polynomial) term, where the integral
// diverges.
GaussPolyFn gp_convolve(const GaussPolyFn& f, const GaussPolyFn& g);

// Taylor jet T_{alpha,x,.}: y -> sum_{|l|_s < alpha} ((y-x)^l / l!) D^l f(x),
// a pure polynomial in y. The non-strict variant sums |l|_s <= alpha.
GaussPolyFn taylor_jet(const GaussPolyFn& f, const Rat& alpha, const std::vector<double>& x,
                       const std::vector<int>& s, bool strict = true);

}  // namespace birch
