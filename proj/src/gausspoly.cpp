#include "birch/gausspoly.hpp"

#include <cmath>

namespace birch {

namespace {

// Gaussian moment: integral of u^r exp(-c u^2) du over the line, c > 0.
// Zero for odd r; (r-1)!! sqrt(pi/c) / (2c)^{r/2} for even r.
double gauss_moment(unsigned r, const Rat& c) {
    if (r % 2 == 1) return 0.0;
    double cd = rat_double(c);
    double m = std::sqrt(M_PI / cd);
    for (unsigned s = 0; s < r / 2; ++s) m *= (double)(2 * s + 1) / (2.0 * cd);
    return m;
}

// One-dimensional block: coefficients (z-power -> value) of
//   integral y^m (z-y)^n exp(-a y^2) exp(-b (z-y)^2) dy
// with the common factor exp(-(ab/c) z^2), c = a+b > 0, taken out. The
// substitution u = y - (b/c) z turns the integral into Gaussian moments.
std::map<unsigned, double> conv1d(unsigned m, unsigned n, const Rat& a, const Rat& b) {
    Rat c = a + b;
    double shift = rat_double(b / c);  // y = u + shift*z, z - y = (1-shift)z - u
    double co = 1.0 - shift;
    std::map<unsigned, double> out;
    // expand y^m = sum_i binom(m,i) u^i (shift z)^{m-i}
    // expand (z-y)^n = sum_j binom(n,j) (-u)^j (co z)^{n-j}
    for (unsigned i = 0; i <= m; ++i) {
        for (unsigned j = 0; j <= n; ++j) {
            double moment = gauss_moment(i + j, c);
            if (moment == 0.0) continue;
            double coeff = (double)binomial_long(m, i) * (double)binomial_long(n, j) *
                           ((j % 2) ? -1.0 : 1.0) * std::pow(shift, (double)(m - i)) *
                           std::pow(co, (double)(n - j)) * moment;
            unsigned zpow = (m - i) + (n - j);
            double& slot = out[zpow];
            slot += coeff;
            if (slot == 0.0) out.erase(zpow);
        }
    }
    return out;
}

}  // namespace

GaussPolyFn gp_convolve(const GaussPolyFn& f, const GaussPolyFn& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("convolution dim mismatch");
    std::size_t dim = f.dim();
    GaussPolyFn out(dim);
    for (auto& [a, p] : f.terms()) {
        for (auto& [b, q] : g.terms()) {
            Rat c = a + b;
            if (c == 0)
                throw std::domain_error(
                    "convolution diverges: both factors contain width-0 terms");
            Rat width = a * b / c;
            for (auto& [k, ck] : p) {
                for (auto& [l, cl] : q) {
                    // separable: product over coordinates of 1-d blocks
                    std::vector<std::map<unsigned, double>> blocks;
                    blocks.reserve(dim);
                    for (std::size_t i = 0; i < dim; ++i)
                        blocks.push_back(conv1d(k[i], l[i], a, b));
                    // outer product of the per-coordinate polynomials
                    std::map<MultiIndex, double> acc{{MultiIndex(dim), ck * cl}};
                    for (std::size_t i = 0; i < dim; ++i) {
                        std::map<MultiIndex, double> next;
                        for (auto& [mk, mc] : acc)
                            for (auto& [zp, zc] : blocks[i]) {
                                MultiIndex ext = mk + MultiIndex::unit(dim, i, zp);
                                next[ext] += mc * zc;
                            }
                        acc = std::move(next);
                    }
                    for (auto& [mk, mc] : acc) out.add_term(width, mk, mc);
                }
            }
        }
    }
    return out;
}

GaussPolyFn taylor_jet(const GaussPolyFn& f, const Rat& alpha, const std::vector<double>& x,
                       const std::vector<int>& s, bool strict) {
    if (x.size() != f.dim() || s.size() != f.dim())
        throw std::invalid_argument("taylor_jet dim mismatch");
    std::size_t dim = f.dim();
    GaussPolyFn out(dim);
    for (const auto& l : enumerate_multiindices(s, alpha, strict)) {
        double dlf = f.derivative(l).eval(x);
        if (dlf == 0.0) continue;
        double scale = dlf / rat_double(l.factorial());
        // (y - x)^l expanded into monomials in y
        for (const auto& j : enumerate_below(l)) {
            double c = scale;
            for (std::size_t i = 0; i < dim; ++i) {
                c *= (double)binomial_long(l[i], j[i]);
                for (unsigned r = 0; r < l[i] - j[i]; ++r) c *= -x[i];
            }
            out.add_term(Rat(0), j, c);
        }
    }
    return out;
}

}  // namespace birch
