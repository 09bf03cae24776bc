#include "birch/models.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "birch/multiindex.hpp"
#include "birch/rational.hpp"

namespace birch {

const GaussPolyFn& KernelAssignment::kernel(const std::string& type) const {
    auto it = kernels.find(type);
    if (it == kernels.end()) throw std::invalid_argument("no kernel assigned to type " + type);
    return it->second;
}

const GaussPolyFn& KernelAssignment::noise(const std::string& type) const {
    auto it = noises.find(type);
    if (it == noises.end()) throw std::invalid_argument("no noise assigned to type " + type);
    return it->second;
}

KernelAssignment KernelAssignment::standard(const Scaling& sc) {
    KernelAssignment ka;
    ka.dim = sc.dim();
    GaussPolyFn bump = GaussPolyFn::gaussian(sc.dim(), rat(1));
    for (const auto& [name, info] : sc.types()) {
        if (info.kind == TypeKind::Kernel)
            ka.kernels.emplace(name, bump);
        else
            ka.noises.emplace(name, bump);
    }
    return ka;
}

GaussPolyFn shifted_monomial(const MultiIndex& k, const std::vector<double>& xbar) {
    std::size_t dim = k.dim();
    if (xbar.size() != dim) throw std::invalid_argument("point dim mismatch");
    // prod_i (y_i - xbar_i)^{k_i} = sum_{l <= k} binom(k,l) (-xbar)^{k-l} y^l
    GaussPolyFn out(dim);
    for (const auto& l : enumerate_below(k)) {
        double c = 1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            c *= static_cast<double>(binomial_long(k[i], l[i]));
            for (unsigned r = l[i]; r < k[i]; ++r) c *= -xbar[i];
        }
        out.add_term(rat(0), l, c);
    }
    return out;
}

namespace {

struct PiState {
    KernelAssignment ka;
    Scaling sc;
    // memo key: point rendered first, then the canonical tree key
    std::map<std::pair<std::vector<double>, std::string>, GaussPolyFn> memo;

    GaussPolyFn eval(const Tree& t, const std::vector<double>& xbar) {
        auto key = std::make_pair(xbar, t.key());
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        GaussPolyFn out = shifted_monomial(t.root_dec(), xbar);
        for (std::size_t i = 0; i < t.branch_count(); ++i) {
            const EdgeDec& e = t.branch_edge(i);
            Tree child = t.branch_child(i);
            const TypeInfo& info = sc.type(e.type);
            if (info.kind == TypeKind::Noise) {
                if (!child.is_unit())
                    throw std::invalid_argument("noise edges must be terminal: " + t.str());
                out = out * ka.noise(e.type).derivative(e.p);
            } else {
                out = out * gp_convolve(ka.kernel(e.type).derivative(e.p), eval(child, xbar));
            }
        }
        memo.emplace(std::move(key), out);
        return out;
    }
};

}  // namespace

TreeFn canonical_pi(const KernelAssignment& ka, const Scaling& sc,
                    const std::vector<double>& xbar) {
    auto st = std::make_shared<PiState>(PiState{ka, sc, {}});
    return [st, xbar](const Tree& t) { return st->eval(t, xbar); };
}

RecentredFamily canonical_family(const KernelAssignment& ka, const Scaling& sc) {
    auto st = std::make_shared<PiState>(PiState{ka, sc, {}});
    return [st](const Tree& t, const std::vector<double>& xbar) { return st->eval(t, xbar); };
}

RealTreeSum shifted_tree_monomial(const MultiIndex& k, const std::vector<double>& h) {
    std::size_t dim = k.dim();
    if (h.size() != dim) throw std::invalid_argument("point dim mismatch");
    RealTreeSum out;
    for (const auto& m : enumerate_below(k)) {
        double c = 1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            c *= static_cast<double>(binomial_long(k[i], m[i]));
            for (unsigned r = m[i]; r < k[i]; ++r) c *= h[i];
        }
        out.add(Tree::monomial(m), c);
    }
    return out;
}

namespace {

struct ModelState {
    PiState lift;
    std::vector<double> xbar;
    std::map<std::string, TreeSum> twisted, antibar;
    std::map<std::string, TensorSum> coaction, coproduct;
    std::map<std::pair<std::vector<double>, std::string>, double> f_memo;
    std::map<std::pair<std::vector<double>, std::string>, GaussPolyFn> pix_memo;
    std::map<std::tuple<std::vector<double>, std::vector<double>, std::string>, double>
        gamma_memo;

    const TensorSum& dhat(const Tree& t) {
        auto it = coaction.find(t.key());
        if (it != coaction.end()) return it->second;
        return coaction.emplace(t.key(), delta_plus(t, lift.sc, PlusCoproduct::Hat)).first->second;
    }

    const TensorSum& dbar(const Tree& t) {
        auto it = coproduct.find(t.key());
        if (it != coproduct.end()) return it->second;
        return coproduct.emplace(t.key(), delta_plus(t, lift.sc, PlusCoproduct::Bar))
            .first->second;
    }

    double f(const Tree& t_in, const std::vector<double>& z) {
        Tree t = clear_hats(t_in);
        if (t.is_unit()) return 1.0;
        auto key = std::make_pair(z, t.key());
        auto it = f_memo.find(key);
        if (it != f_memo.end()) return it->second;
        auto at = twisted.find(t.key());
        if (at == twisted.end())
            at = twisted
                     .emplace(t.key(), antipode_plus(t, lift.sc, PlusAntipode::Twisted, 0,
                                                     TwistedBound::BelowDegree))
                     .first;
        double acc = 0.0;
        for (const auto& [k, c] : at->second)
            acc += rat_double(c) * lift.eval(clear_hats(k), xbar).eval(z);
        f_memo.emplace(std::move(key), acc);
        return acc;
    }

    GaussPolyFn pix(const Tree& t_in, const std::vector<double>& x) {
        Tree t = clear_hats(t_in);
        auto key = std::make_pair(x, t.key());
        auto it = pix_memo.find(key);
        if (it != pix_memo.end()) return it->second;
        GaussPolyFn out(lift.ka.dim);
        for (const auto& [k, c] : dhat(t))
            out = out + (rat_double(c) * f(k.second, x)) * lift.eval(k.first, xbar);
        pix_memo.emplace(std::move(key), out);
        return out;
    }

    double gamma(const Tree& t_in, const std::vector<double>& x, const std::vector<double>& y) {
        Tree t = clear_hats(t_in);
        if (t.is_unit()) return 1.0;
        auto key = std::make_tuple(x, y, t.key());
        auto it = gamma_memo.find(key);
        if (it != gamma_memo.end()) return it->second;
        double acc = 0.0;
        for (const auto& [k, c] : dbar(t)) {
            Tree left = clear_hats(k.first);
            auto ab = antibar.find(left.key());
            if (ab == antibar.end())
                ab = antibar.emplace(left.key(), antipode_plus(left, lift.sc, PlusAntipode::Bar))
                         .first;
            double swapped = 0.0;
            for (const auto& [ak, ac] : ab->second) swapped += rat_double(ac) * f(ak, x);
            acc += rat_double(c) * swapped * f(k.second, y);
        }
        gamma_memo.emplace(std::move(key), acc);
        return acc;
    }

    RealTreeSum reexpand(const Tree& t_in, const std::vector<double>& x,
                         const std::vector<double>& y) {
        Tree t = clear_hats(t_in);
        RealTreeSum out;
        for (const auto& [k, c] : dhat(t)) {
            double w = rat_double(c) * gamma(k.second, x, y);
            if (w != 0.0) out.add(k.first, w);
        }
        return out;
    }
};

}  // namespace

Model build_model(const KernelAssignment& ka, const Scaling& sc, const std::vector<double>& xbar) {
    if (xbar.size() != sc.dim()) throw std::invalid_argument("point dim mismatch");
    auto st = std::make_shared<ModelState>(ModelState{PiState{ka, sc, {}}, xbar});
    return Model{
        [st](const Tree& t, const std::vector<double>& x) { return st->pix(t, x); },
        [st](const Tree& t, const std::vector<double>& x) { return st->f(t, x); },
        [st](const Tree& t, const std::vector<double>& x, const std::vector<double>& y) {
            return st->gamma(t, x, y);
        },
        [st](const Tree& t, const std::vector<double>& x, const std::vector<double>& y) {
            return st->reexpand(t, x, y);
        },
        ka,
        sc,
        xbar,
    };
}

GaussPolyFn pi_x_recursive(const KernelAssignment& ka, const Scaling& sc, const Tree& t_in,
                           const std::vector<double>& x) {
    if (x.size() != sc.dim()) throw std::invalid_argument("point dim mismatch");
    Tree t = clear_hats(t_in);
    GaussPolyFn out = shifted_monomial(t.root_dec(), x);
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        Tree child = t.branch_child(i);
        if (sc.is_noise(e.type)) {
            if (!child.is_unit())
                throw std::invalid_argument("noise edges must be terminal: " + t.str());
            out = out * ka.noise(e.type).derivative(e.p);
        } else {
            GaussPolyFn conv =
                gp_convolve(ka.kernel(e.type).derivative(e.p), pi_x_recursive(ka, sc, child, x));
            Rat alpha = branch_degree(e, child, sc);
            out = out * (conv - taylor_jet(conv, alpha, x, sc.weights(), /*strict=*/false));
        }
    }
    return out;
}

double f_x_recursive(const KernelAssignment& ka, const Scaling& sc, const Tree& planted,
                     const std::vector<double>& x, const std::vector<double>& xbar) {
    Tree t = clear_hats(planted);
    if (!t.root_dec().is_zero() || t.branch_count() != 1)
        throw std::invalid_argument("f_x_recursive expects a planted tree: " + t.str());
    const EdgeDec& e = t.branch_edge(0);
    Tree child = t.branch_child(0);
    Rat alpha = branch_degree(e, child, sc);
    if (!(alpha > 0))
        throw std::invalid_argument("f_x_recursive expects positive degree: " + t.str());
    GaussPolyFn base = pi_x_recursive(ka, sc, child, x);
    double acc = 0.0;
    for (const auto& l : enumerate_multiindices(sc.weights(), alpha, /*strict=*/false)) {
        double coeff = 1.0 / rat_double(l.factorial());
        for (std::size_t i = 0; i < l.dim(); ++i)
            for (unsigned r = 0; r < l[i]; ++r) coeff *= xbar[i] - x[i];
        acc += coeff * gp_convolve(ka.kernel(e.type).derivative(e.p + l), base).eval(x);
    }
    return -acc;
}

RealTreeSum gamma_recursive(const Model& m, const Tree& t_in, const std::vector<double>& x,
                            const std::vector<double>& y) {
    const Scaling& sc = m.scaling;
    Tree t = clear_hats(t_in);
    std::vector<double> h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h[i] = y[i] - x[i];
    RealTreeSum acc = shifted_tree_monomial(t.root_dec(), h);
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        Tree child = t.branch_child(i);
        RealTreeSum gc = gamma_recursive(m, child, x, y);
        RealTreeSum branch;
        for (const auto& [s, c] : gc) branch.add(Tree::planted(e.type, e.p, s), c);
        if (!sc.is_noise(e.type)) {
            Rat alpha = branch_degree(e, child, sc);
            for (const auto& l : enumerate_multiindices(sc.weights(), alpha, /*strict=*/false)) {
                // polynomial defect of the recentring: the jet inside Pi_x
                // supplies the base-point shift, and the keys of Gamma(child)
                // that dropped below degree zero no longer vanish at y, so
                // their raw lifts have to be subtracted back out
                double val = m.pi(Tree::planted(e.type, e.p + l, child), x).eval(y);
                for (const auto& [s, c] : gc) {
                    Tree pl = Tree::planted(e.type, e.p + l, s);
                    if (degree(pl, sc) < Rat(0)) val -= c * m.pi(pl, y).eval(y);
                }
                if (val == 0.0) continue;
                branch.add(Tree::monomial(l), val / rat_double(l.factorial()));
            }
        }
        RealTreeSum next;
        for (const auto& [a, ca] : acc)
            for (const auto& [b, cb] : branch) next.add(tree_product(a, b), ca * cb);
        acc = next;
    }
    return acc;
}

namespace {

// Deterministic probe points for comparing Gaussian-polynomial functions.
std::vector<std::vector<double>> probe_points(std::size_t dim) {
    std::vector<std::vector<double>> out;
    for (double c : {-1.1, -0.4, 0.0, 0.6, 1.3}) out.emplace_back(dim, c);
    std::vector<double> alt(dim);
    for (std::size_t i = 0; i < dim; ++i) alt[i] = i % 2 ? -0.7 : 0.7;
    out.push_back(alt);
    return out;
}

double gp_gap(const GaussPolyFn& a, const GaussPolyFn& b, std::size_t dim) {
    double gap = 0.0;
    GaussPolyFn d = a - b;
    for (const auto& w : probe_points(dim)) gap = std::max(gap, std::abs(d.eval(w)));
    return gap;
}

double rts_gap(const RealTreeSum& a, const RealTreeSum& b) {
    double gap = 0.0;
    for (const auto& [k, c] : a - b) {
        (void)k;
        gap += std::abs(c);
    }
    return gap;
}

RealTreeSum rts_bind(const RealTreeSum& v,
                     const std::function<RealTreeSum(const Tree&)>& f) {
    RealTreeSum out;
    for (const auto& [k, c] : v) {
        for (const auto& [k2, c2] : f(k)) out.add(k2, c * c2);
    }
    return out;
}

}  // namespace

ModelReport verify_model(const Model& m, ModelSuite suite, const std::vector<Tree>& trees,
                         const std::vector<std::vector<double>>& points, double tol) {
    ModelReport rep;
    std::size_t dim = m.scaling.dim();
    auto add = [&](const std::string& check, const Tree& t, const std::string& pts, double gap) {
        bool ok = gap <= tol;
        rep.checks.push_back({check, t.str(), pts, gap, ok});
        rep.pass = rep.pass && ok;
        rep.max_gap = std::max(rep.max_gap, gap);
    };
    std::size_t n = points.size();

    switch (suite) {
        case ModelSuite::Algebraic: {
            for (const auto& t : trees) {
                double gap_id = 0.0, gap_comp = 0.0, gap_pi = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& x = points[i];
                    gap_id = std::max(gap_id,
                                      rts_gap(m.Gamma(t, x, x), RealTreeSum::single(t, 1.0)));
                    for (std::size_t j = 0; j < n; ++j) {
                        const auto& y = points[j];
                        const auto& z = points[(i + j) % n];
                        RealTreeSum two = rts_bind(m.Gamma(t, y, z), [&](const Tree& u) {
                            return m.Gamma(u, x, y);
                        });
                        gap_comp = std::max(gap_comp, rts_gap(two, m.Gamma(t, x, z)));
                        GaussPolyFn rhs(dim);
                        for (const auto& [k, c] : m.Gamma(t, x, y)) rhs = rhs + c * m.pi(k, x);
                        gap_pi = std::max(gap_pi, gp_gap(m.pi(t, y), rhs, dim));
                    }
                }
                add("Gamma_xx = id", t, "grid", gap_id);
                add("Gamma_xy Gamma_yz = Gamma_xz", t, "grid pairs", gap_comp);
                add("Pi_y = Pi_x Gamma_xy", t, "grid pairs", gap_pi);
            }
            break;
        }
        case ModelSuite::Invariance: {
            for (double alt : {0.0, 0.5, -1.0}) {
                std::vector<double> xb2(dim, alt);
                if (xb2 == m.xbar) continue;
                Model m2 = build_model(m.assignment, m.scaling, xb2);
                for (const auto& t : trees) {
                    double gap_pi = 0.0, gap_ga = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const auto& x = points[i];
                        gap_pi = std::max(gap_pi, gp_gap(m.pi(t, x), m2.pi(t, x), dim));
                        const auto& y = points[(i + 1) % n];
                        gap_ga = std::max(gap_ga, rts_gap(m.Gamma(t, x, y), m2.Gamma(t, x, y)));
                    }
                    add("Pi_x free of the lift point", t, "grid", gap_pi);
                    add("Gamma_xy free of the lift point", t, "grid", gap_ga);
                }
            }
            break;
        }
        case ModelSuite::Recursive: {
            for (const auto& t : trees) {
                double gap_pi = 0.0, gap_ga = 0.0;
                double gap_f = 0.0;
                bool planted_positive = t.root_dec().is_zero() && t.branch_count() == 1 &&
                                        branch_degree(t.branch_edge(0), t.branch_child(0),
                                                      m.scaling) > 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& x = points[i];
                    gap_pi = std::max(
                        gap_pi,
                        gp_gap(m.pi(t, x), pi_x_recursive(m.assignment, m.scaling, t, x), dim));
                    if (planted_positive)
                        gap_f = std::max(
                            gap_f, std::abs(m.f(t, x) - f_x_recursive(m.assignment, m.scaling, t,
                                                                      x, m.xbar)));
                    const auto& y = points[(i + 2) % n];
                    gap_ga = std::max(gap_ga,
                                      rts_gap(gamma_recursive(m, t, x, y), m.Gamma(t, y, x)));
                }
                add("Pi_x recursion = coaction route", t, "grid", gap_pi);
                if (planted_positive) add("f_x recursion = antipode route", t, "grid", gap_f);
                add("Gamma recursion = transposed coaction route", t, "grid", gap_ga);
            }
            break;
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> pi_bound_samples(const Model& m, const Tree& t,
                                                        const std::vector<double>& x,
                                                        const std::vector<double>& dir,
                                                        int levels) {
    std::vector<std::pair<double, double>> out;
    double deg = rat_double(degree(t, m.scaling));
    GaussPolyFn v = m.pi(t, x);
    double h = 1.0;
    for (int k = 0; k < levels; ++k) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + h * dir[i];
        out.emplace_back(h, std::abs(v.eval(y)) / std::pow(h, deg));
        h *= 0.5;
    }
    return out;
}

}  // namespace birch
