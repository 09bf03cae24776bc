#include "birch/negative.hpp"

#include <bit>
#include <stdexcept>
#include <tuple>

namespace birch {

Rat degree(const Forest& f, const Scaling& sc) {
    Rat d(0);
    for (const auto& t : f.parts()) d += degree(t, sc);
    return d;
}

bool is_negative_forest(const Forest& f, const Scaling& sc) {
    for (const auto& t : f.parts())
        if (!(degree(t, sc) < Rat(0))) return false;
    return true;
}

namespace {

// Flattened tree: vertex arrays indexed by discovery order, root first.
struct Flat {
    std::vector<MultiIndex> dec;
    std::vector<int> parent;             // -1 at the root
    std::vector<EdgeDec> pedge;          // edge up to the parent
    std::vector<Rat> edge_deg;           // degree of that edge
    std::vector<std::vector<int>> kids;
    std::size_t dim = 0;
};

void flatten_into(const Tree& t, int parent, const EdgeDec* up, Flat& f, const Scaling& sc) {
    int id = (int)f.dec.size();
    f.dec.push_back(t.root_dec());
    f.parent.push_back(parent);
    f.pedge.push_back(up ? *up : EdgeDec{});
    f.edge_deg.push_back(up ? sc.type(up->type).degree - sc.mi_weight(up->p) : Rat(0));
    f.kids.emplace_back();
    if (parent >= 0) f.kids[parent].push_back(id);
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        flatten_into(t.branch_child(i), id, &e, f, sc);
    }
}

Flat flatten(const Tree& t, const Scaling& sc) {
    Flat f;
    f.dim = t.dim();
    flatten_into(t, -1, nullptr, f, sc);
    return f;
}

// Subtree induced by the vertices of `mask`, rooted at v.
Tree build_masked(const Flat& f, int v, unsigned mask) {
    std::vector<Tree> factors{Tree::monomial(f.dec[v])};
    for (int c : f.kids[v])
        if (mask & (1u << c))
            factors.push_back(Tree::planted(f.pedge[c].type, f.pedge[c].p,
                                            build_masked(f, c, mask), f.pedge[c].hat));
    return tree_product(factors, f.dim);
}

// Remainder after collapsing each selected piece to one vertex. comp maps a
// vertex to its piece index or -1; group(v) is then a stable id.
struct Contractor {
    const Flat& f;
    const std::vector<int>& comp;
    const std::vector<unsigned>& masks;

    int group(int v) const { return comp[v] >= 0 ? comp[v] : (int)masks.size() + v; }

    Tree build(int v0) const {
        int g = group(v0);
        std::vector<int> members;
        if (comp[v0] >= 0) {
            for (int v = 0; v < (int)f.dec.size(); ++v)
                if (masks[comp[v0]] & (1u << v)) members.push_back(v);
        } else {
            members.push_back(v0);
        }
        MultiIndex nd(f.dim);
        std::vector<Tree> factors;
        for (int v : members) {
            nd = nd + f.dec[v];
            for (int c : f.kids[v])
                if (group(c) != g)
                    factors.push_back(Tree::planted(f.pedge[c].type, f.pedge[c].p, build(c),
                                                    f.pedge[c].hat));
        }
        factors.push_back(Tree::monomial(nd));
        return tree_product(factors, f.dim);
    }
};

struct Piece {
    unsigned mask;
    int root;
};

// Connected induced subtrees of strictly negative degree. Planted markers
// pin their parent vertex (and with it the marked edge) outside every piece.
std::vector<Piece> negative_pieces(const Flat& f, const Scaling& sc) {
    int n = (int)f.dec.size();
    unsigned banned = 0;
    for (int v = 0; v < n; ++v)
        if (f.parent[v] >= 0 && f.pedge[v].hat) banned |= 1u << f.parent[v];
    std::vector<Piece> out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (mask & banned) continue;
        int cnt = std::popcount(mask);
        int inside = 0;
        int root = -1;
        Rat deg(0);
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            if (!(mask & (1u << v))) continue;
            deg += sc.mi_weight(f.dec[v]);
            if (f.parent[v] >= 0 && (mask & (1u << f.parent[v]))) {
                if (f.pedge[v].hat) ok = false;
                ++inside;
                deg += f.edge_deg[v];
            } else {
                if (root >= 0) ok = false;  // second local root: disconnected
                root = v;
            }
        }
        if (!ok || inside != cnt - 1) continue;
        if (deg < Rat(0)) out.push_back({mask, root});
    }
    return out;
}

}  // namespace

ForestTensor extraction_contraction(const Tree& t, const Scaling& sc) {
    Flat f = flatten(t, sc);
    int n = (int)f.dec.size();
    if (n > 20) throw std::invalid_argument("tree too large for extraction enumeration");
    std::vector<Piece> pieces = negative_pieces(f, sc);

    ForestTensor out;
    std::vector<int> comp((std::size_t)n, -1);
    std::vector<unsigned> masks;
    std::vector<int> chosen;

    auto emit = [&]() {
        masks.clear();
        std::fill(comp.begin(), comp.end(), -1);
        std::vector<Tree> extracted;
        for (int idx : chosen) {
            const Piece& p = pieces[idx];
            int id = (int)masks.size();
            masks.push_back(p.mask);
            for (int v = 0; v < n; ++v)
                if (p.mask & (1u << v)) comp[v] = id;
            extracted.push_back(build_masked(f, p.root, p.mask));
        }
        Contractor ctr{f, comp, masks};
        out.add({Forest(std::move(extracted)), ctr.build(0)}, Rat(1));
    };

    // Backtracking over vertex-disjoint families, the empty family included.
    auto rec = [&](auto&& self, std::size_t i, unsigned used) -> void {
        if (i == pieces.size()) {
            emit();
            return;
        }
        self(self, i + 1, used);
        if (!(pieces[i].mask & used)) {
            chosen.push_back((int)i);
            self(self, i + 1, used | pieces[i].mask);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0u);
    return out;
}

ForestCoproduct extraction_contraction(const Forest& f, const Scaling& sc) {
    ForestCoproduct acc = ForestCoproduct::single({Forest{}, Forest{}});
    for (const auto& part : f.parts()) {
        ForestCoproduct next;
        for (const auto& [k, c] : extraction_contraction(part, sc))
            for (const auto& [k0, c0] : acc)
                next.add({forest_product(k0.first, k.first),
                          forest_product(k0.second, Forest(k.second))},
                         c0 * c);
        acc = std::move(next);
    }
    return acc;
}

NegCoaction NegCoaction::undeformed() {
    NegCoaction co;
    co.coact = [](const Tree& t, const Scaling& sc) { return extraction_contraction(t, sc); };
    return co;
}

ForestCoproduct delta_minus_bar(const Forest& f, const Scaling& sc, const NegCoaction& co) {
    if (!is_negative_forest(f, sc)) return {};
    ForestCoproduct acc = ForestCoproduct::single({Forest{}, Forest{}});
    for (const auto& part : f.parts()) {
        ForestCoproduct term;
        for (const auto& [k, c] : co.coact(part, sc)) {
            if (k.second.is_monomial())  // full family: the class of X^k is the unit
                term.add({k.first, Forest{}}, c);
            else if (degree(k.second, sc) < Rat(0))
                term.add({k.first, Forest(k.second)}, c);
        }
        ForestCoproduct next;
        for (const auto& [k, c] : term)
            for (const auto& [k0, c0] : acc)
                next.add({forest_product(k0.first, k.first),
                          forest_product(k0.second, k.second)},
                         c0 * c);
        acc = std::move(next);
    }
    return acc;
}

namespace {

ForestSum forestsum_mul(const ForestSum& a, const Forest& b) {
    ForestSum out;
    for (const auto& [k, c] : a) out.add(forest_product(k, b), c);
    return out;
}

ForestSum forestsum_mul(const ForestSum& a, const ForestSum& b) {
    ForestSum out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out.add(forest_product(ka, kb), ca * cb);
    return out;
}

struct TwistedMinus {
    const Scaling& sc;
    const NegCoaction& co;
    std::map<std::string, ForestSum> memo;

    ForestSum tree(const Tree& t) {
        if (t.is_unit()) return ForestSum::single(Forest{});
        if (!(degree(t, sc) < Rat(0)))
            throw std::invalid_argument("negative twisted antipode off the quotient: " + t.str());
        auto it = memo.find(t.key());
        if (it != memo.end()) return it->second;
        ForestSum out = ForestSum::single(Forest(t), Rat(-1));
        for (const auto& [k, c] : co.coact(t, sc)) {
            if (k.first.is_empty()) continue;       // counit leg
            if (k.second.is_monomial()) continue;   // full family; keeps the recursion shrinking
            out -= c * forestsum_mul(forest(k.first), Forest(k.second));
        }
        memo.emplace(t.key(), out);
        return out;
    }

    ForestSum forest(const Forest& f) {
        ForestSum out = ForestSum::single(Forest{});
        for (const auto& part : f.parts()) out = forestsum_mul(out, tree(part));
        return out;
    }
};

}  // namespace

ForestSum negative_twisted_antipode(const Tree& t, const Scaling& sc, const NegCoaction& co) {
    TwistedMinus tm{sc, co, {}};
    return tm.tree(t);
}

ForestSum negative_twisted_antipode(const Forest& f, const Scaling& sc, const NegCoaction& co) {
    TwistedMinus tm{sc, co, {}};
    return tm.forest(f);
}

namespace {

struct QuotientAntipode {
    const Scaling& sc;
    std::map<std::string, ForestSum> memo;

    ForestSum tree(const Tree& t) {
        if (t.is_unit()) return ForestSum::single(Forest{});
        if (!(degree(t, sc) < Rat(0)))
            throw std::invalid_argument("negative antipode off the quotient: " + t.str());
        auto it = memo.find(t.key());
        if (it != memo.end()) return it->second;
        ForestSum out = ForestSum::single(Forest(t), Rat(-1));
        for (const auto& [k, c] : delta_minus_bar(Forest(t), sc)) {
            if (k.first.is_empty() || k.second.is_empty()) continue;
            out -= c * forestsum_mul(forest(k.first), k.second);
        }
        memo.emplace(t.key(), out);
        return out;
    }

    ForestSum forest(const Forest& f) {
        ForestSum out = ForestSum::single(Forest{});
        for (const auto& part : f.parts()) out = forestsum_mul(out, tree(part));
        return out;
    }
};

}  // namespace

ForestSum negative_antipode(const Forest& f, const Scaling& sc) {
    QuotientAntipode qa{sc, {}};
    return qa.forest(f);
}

NegativeBogoliubov::NegativeBogoliubov(const Scaling& sc, TreeFn psi_tree, NegCoaction co)
    : sc_(sc), psit_(std::move(psi_tree)), co_(std::move(co)) {}

SymTensor NegativeBogoliubov::psi(const Tree& t) const {
    if (t.is_unit()) return SymTensor::unit(sc_.dim());
    return SymTensor::atom(psit_(t));
}

SymTensor NegativeBogoliubov::psi(const Forest& f) const {
    std::vector<GaussPolyFn> atoms;
    atoms.reserve(f.size());
    for (const auto& part : f.parts()) atoms.push_back(psit_(part));
    SymTensor out(sc_.dim());
    out.add_word(std::move(atoms), 1.0);
    return out;
}

SymTensor NegativeBogoliubov::prep(const Tree& t) const {
    SymTensor acc = psi(t);
    for (const auto& [k, c] : co_.coact(t, sc_)) {
        if (k.first.is_empty() || k.second.is_monomial()) continue;
        acc = acc + (rat_double(c) * minus(k.first)) * psi(Forest(k.second));
    }
    return acc;
}

double NegativeBogoliubov::minus(const Tree& t) const {
    if (t.is_unit()) return 1.0;
    auto it = minus_memo_.find(t.key());
    if (it != minus_memo_.end()) return it->second;
    double v = 0.0;
    if (degree(t, sc_) < Rat(0)) v = -sym_expectation(prep(t));
    minus_memo_.emplace(t.key(), v);
    return v;
}

double NegativeBogoliubov::minus(const Forest& f) const {
    double v = 1.0;
    for (const auto& part : f.parts()) v *= minus(part);
    return v;
}

SymTensor NegativeBogoliubov::plus(const Tree& t) const {
    if (t.is_unit()) return SymTensor::unit(sc_.dim());
    return prep(t) + minus(t) * SymTensor::unit(sc_.dim());
}

SymTensor NegativeBogoliubov::plus(const Forest& f) const {
    SymTensor acc = SymTensor::unit(sc_.dim());
    for (const auto& part : f.parts()) acc = acc * plus(part);
    return acc;
}

SymTensor NegativeBogoliubov::star(const Tree& t) const {
    SymTensor acc(sc_.dim());
    for (const auto& [k, c] : co_.coact(t, sc_))
        acc = acc + (rat_double(c) * minus(k.first)) * psi(Forest(k.second));
    return acc;
}

RealTreeSum renormalisation_map(const std::function<double(const Forest&)>& counter,
                                const Tree& t, const Scaling& sc, const NegCoaction& co) {
    RealTreeSum out;
    for (const auto& [k, c] : co.coact(t, sc)) out.add(k.second, rat_double(c) * counter(k.first));
    return out;
}

GaussPolyFn renormalised_pi(const Model& m, const std::function<double(const Forest&)>& counter,
                            const Tree& t, const std::vector<double>& x, const NegCoaction& co) {
    TreeFn lift = canonical_pi(m.assignment, m.scaling, m.xbar);
    GaussPolyFn out = GaussPolyFn::constant(m.scaling.dim(), 0.0);
    for (const auto& [k, c] : delta_plus(t, m.scaling, PlusCoproduct::Hat)) {
        GaussPolyFn a = GaussPolyFn::constant(m.scaling.dim(), 0.0);
        for (const auto& [k1, c1] : co.coact(k.first, m.scaling))
            a = a + (rat_double(c1) * counter(k1.first)) * lift(clear_hats(k1.second));
        double b = 0.0;
        for (const auto& [k2, c2] : co.coact(set_hats(k.second), m.scaling))
            b += rat_double(c2) * counter(k2.first) * m.f(clear_hats(k2.second), x);
        out = out + (rat_double(c) * b) * a;
    }
    return out;
}

namespace {

TensorSum delta_plus_undeformed(const Tree& t) {
    std::size_t dim = t.dim();
    TensorSum acc = TensorSum::single({Tree::monomial(t.root_dec()), Tree::unit(dim)});
    for (std::size_t i = 0; i < t.branch_count(); ++i) {
        const EdgeDec& e = t.branch_edge(i);
        TensorSum db;
        for (const auto& [k, c] : delta_plus_undeformed(t.branch_child(i)))
            db.add({Tree::planted(e.type, e.p, k.first), k.second}, c);
        db.add({Tree::unit(dim), t.branch_tree(i)}, Rat(1));
        TensorSum next;
        for (const auto& [ka, ca] : acc)
            for (const auto& [kb, cb] : db)
                next.add({tree_product(ka.first, kb.first), tree_product(ka.second, kb.second)},
                         ca * cb);
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

bool cointeraction_check(const Tree& t, const Scaling& sc, CointeractionMode mode) {
    auto plus_side = [&](const Tree& u) {
        return mode == CointeractionMode::Hat ? delta_plus(u, sc, PlusCoproduct::Hat)
                                              : delta_plus_undeformed(u);
    };
    using TripleSum = LinComb<std::tuple<Forest, Tree, Tree>, Rat>;

    TripleSum lhs;
    for (const auto& [k, c] : plus_side(t)) {
        ForestTensor d1 = extraction_contraction(k.first, sc);
        ForestTensor d2 = extraction_contraction(set_hats(k.second), sc);
        for (const auto& [k1, c1] : d1)
            for (const auto& [k2, c2] : d2)
                lhs.add({forest_product(k1.first, k2.first), clear_hats(k1.second),
                         clear_hats(k2.second)},
                        c * c1 * c2);
    }

    TripleSum rhs;
    for (const auto& [k, c] : extraction_contraction(t, sc))
        for (const auto& [k2, c2] : plus_side(clear_hats(k.second)))
            rhs.add({k.first, k2.first, k2.second}, c * c2);

    return lhs == rhs;
}

PairKey pair_product(const PairKey& a, const PairKey& b) {
    return {forest_product(a.first, b.first), tree_product(a.second, b.second)};
}

namespace {

void check_pair_domain(const PairKey& k, const Scaling& sc) {
    if (!is_negative_forest(k.first, sc))
        throw std::invalid_argument("pair key: left component off the negative quotient");
    if (!is_positive(k.second, sc))
        throw std::invalid_argument("pair key: right component not positive");
}

}  // namespace

PairTensor delta_pm(const PairKey& k, const Scaling& sc) {
    check_pair_domain(k, sc);
    PairTensor out;
    for (const auto& [ka, ca] : delta_minus_bar(k.first, sc))
        for (const auto& [kb, cb] : delta_plus(k.second, sc, PlusCoproduct::Bar))
            for (const auto& [kc, cc] : extraction_contraction(kb.second, sc))
                out.add({{forest_product(ka.first, kc.first), kb.first}, {ka.second, kc.second}},
                        ca * cb * cc);
    return out;
}

PairSum antipode_pm(const PairKey& k, const Scaling& sc) {
    check_pair_domain(k, sc);
    PairSum out;
    for (const auto& [kc, cc] : extraction_contraction(k.second, sc)) {
        ForestSum am = negative_antipode(forest_product(k.first, kc.first), sc);
        TreeSum ap = antipode_plus(kc.second, sc, PlusAntipode::Bar);
        for (const auto& [fa, ca] : am)
            for (const auto& [tb, cb] : ap) out.add({fa, tb}, cc * ca * cb);
    }
    return out;
}

PairCharacter semidirect_product(const PairCharacter& a, const PairCharacter& b,
                                 const Scaling& sc) {
    PairCharacter out;
    out.minus = [ga = a.minus, gb = b.minus, sc](const Forest& f) {
        double s = 0.0;
        for (const auto& [k, c] : delta_minus_bar(f, sc))
            s += rat_double(c) * ga(k.first) * gb(k.second);
        return s;
    };
    out.plus = [fa = a.plus, ga = a.minus, fb = b.plus, sc](const Tree& t) {
        double s = 0.0;
        for (const auto& [k, c] : delta_plus(t, sc, PlusCoproduct::Bar)) {
            double inner = 0.0;
            for (const auto& [k2, c2] : extraction_contraction(k.second, sc))
                inner += rat_double(c2) * ga(k2.first) * fb(k2.second);
            s += rat_double(c) * fa(k.first) * inner;
        }
        return s;
    };
    return out;
}

}  // namespace birch
