#ifdef NDEBUG
#error "the test suites verify with assert; build them with asserts enabled"
#endif

#include "birch/enumerate.hpp"
#include "birch/tree.hpp"

#include <cassert>
#include <cstdio>
#include <set>
#include <string>

using namespace birch;

static bool parse_fails(const std::string& s, const Scaling& sc) {
    try {
        parse_tree(s, sc);
    } catch (const ParseError&) {
        return true;
    }
    return false;
}

static bool validate_fails(const Tree& t, const Scaling& sc) {
    try {
        validate(t, sc);
    } catch (const std::invalid_argument&) {
        return true;
    }
    return false;
}

int main() {
    Scaling sc = Scaling::standard();

    std::puts("canonical form and parser round trips");
    {
        Tree a = parse_tree("I[t,0](1)*I[u,1](1)", sc);
        Tree b = parse_tree("I[u,[1]](1) * I[t,[0]](1)", sc);
        assert(a == b);
        assert(a.str() == "I[t,[0]](1)*I[u,[1]](1)");
        assert(parse_tree(a.str(), sc) == a);

        assert(parse_tree("X*X", sc) == parse_tree("X^2", sc));
        assert(parse_tree("X^[3]", sc) == parse_tree("X^3", sc));
        assert(parse_tree("1*1", sc).is_unit());
        assert(parse_tree("1", sc) == Tree::unit(1));

        Tree nested = parse_tree("I[t,1](X^2*I[l,0](1))", sc);
        assert(parse_tree(nested.str(), sc) == nested);
        assert(nested.edge_count() == 2);
        assert(nested.branch_count() == 1);
        assert(nested.branch_child(0).root_dec().abs() == 2);

        // branch_tree lifts one branch back to a standalone planted tree
        Tree prod = parse_tree("X*I[t,0](1)", sc);
        assert(prod.branch_count() == 1);
        assert(prod.branch_tree(0) == parse_tree("I[t,0](1)", sc));
        assert(!prod.root_dec().is_zero());
    }

    std::puts("parse errors");
    {
        assert(parse_fails("I[q,0](1)", sc));       // unknown type
        assert(parse_fails("X^[1,2]", sc));         // wrong dimension
        assert(parse_fails("I[t,0](1))", sc));      // trailing input
        assert(parse_fails("I[t,0](", sc));         // unterminated
        assert(parse_fails("", sc));                // empty
        assert(parse_fails("Y", sc));               // unknown head
        assert(parse_fails("I[t 0](1)", sc));       // missing comma
    }

    std::puts("degrees");
    {
        assert(degree(parse_tree("I[t,0](X)", sc), sc) == rat(3));
        assert(degree(parse_tree("I[t,0](1)", sc), sc) == rat(2));
        assert(degree(parse_tree("I[u,1](1)", sc), sc) == rat(1, 2));
        assert(degree(parse_tree("I[l,0](1)", sc), sc) == rat(-151, 100));
        assert(degree(parse_tree("I[t,1](I[l,0](1))", sc), sc) == rat(2) - 1 + rat(-151, 100));
        assert(degree(parse_tree("X^3", sc), sc) == rat(3));
        assert(degree(Tree::unit(1), sc) == rat(0));

        // degree is additive under the root-merging product
        Tree a = parse_tree("X*I[u,0](1)", sc);
        Tree b = parse_tree("I[t,1](I[l,0](1))", sc);
        assert(degree(tree_product(a, b), sc) == degree(a, sc) + degree(b, sc));

        // planted markers do not change degrees
        assert(degree(parse_tree("J[t,0](1)", sc), sc) == rat(2));
    }

    std::puts("bigrading");
    {
        auto [w, ne] = bigrade(parse_tree("I[t,1](I[l,2](1))", sc), sc);
        assert(w == rat(3));
        assert(ne == 4);
        auto [w2, ne2] = bigrade(parse_tree("X^3", sc), sc);
        assert(w2 == rat(0));
        assert(ne2 == 0);
        // second component is twice the edge count on trees
        Tree t = parse_tree("I[t,0](I[u,1](1)*I[l,0](1))", sc);
        assert(bigrade(t, sc).second == 2 * t.edge_count());
    }

    std::puts("positivity");
    {
        assert(is_positive(parse_tree("I[t,0](1)", sc), sc));
        assert(is_positive(parse_tree("I[u,1](1)", sc), sc));        // degree 1/2
        assert(!is_positive(parse_tree("I[l,0](1)", sc), sc));       // noise branch
        assert(!is_positive(parse_tree("X*I[l,0](1)", sc), sc));
        assert(is_positive(parse_tree("X^2", sc), sc));              // vacuous
        assert(is_positive(Tree::unit(1), sc));
        // only root branches count: a negative branch deeper inside is fine
        assert(is_positive(parse_tree("I[t,0](I[l,0](1))", sc), sc));
        // degree 2 - 2 = 0 is not strictly positive
        assert(!is_positive(parse_tree("I[t,2](1)", sc), sc));
    }

    std::puts("planted markers");
    {
        Tree j = parse_tree("J[t,0](1)", sc);
        assert(has_hats(j));
        assert(j.str() == "J[t,[0]](1)");
        assert(clear_hats(j) == parse_tree("I[t,0](1)", sc));
        assert(!has_hats(clear_hats(j)));
        Tree two = parse_tree("I[t,0](1)*I[u,0](1)", sc);
        assert(set_hats(two) == parse_tree("J[t,0](1)*J[u,0](1)", sc));
        assert(clear_hats(set_hats(two)) == two);
        // the marker is part of the canonical key
        assert(!(j == clear_hats(j)));
    }

    std::puts("validation");
    {
        validate(parse_tree("I[t,0](I[l,1](1))", sc), sc);
        assert(validate_fails(parse_tree("I[l,0](I[t,0](1))", sc), sc));  // noise not terminal
        Scaling loose({1},
                      {TypeInfo{"t", rat(2), TypeKind::Kernel},
                       TypeInfo{"l", rat(-151, 100), TypeKind::Noise}},
                      /*terminal_noise=*/false);
        validate(parse_tree("I[l,0](I[t,0](1))", loose), loose);
    }

    std::puts("forests");
    {
        Forest f = parse_forest("I[t,0](1) . I[t,0](1) . 1", sc);
        assert(f.size() == 2);
        assert(f.str() == "I[t,[0]](1).I[t,[0]](1)");
        assert(f.edge_count() == 2);
        assert(parse_forest(f.str(), sc) == f);
        assert(parse_forest("1", sc).is_empty());
        Forest g = forest_product(f, Forest(parse_tree("X^2", sc)));
        assert(g.size() == 3);
        assert(forest_product(f, Forest()) == f);
        // forests do not merge roots: f has two parts, the tree product one root
        assert(parse_tree("I[t,0](1)*I[t,0](1)", sc).branch_count() == 2);
    }

    std::puts("multi-index enumeration");
    {
        auto le2 = enumerate_multiindices({1}, rat(2), false);
        assert(le2.size() == 3);
        auto lt2 = enumerate_multiindices({1}, rat(2), true);
        assert(lt2.size() == 2);
        auto mixed = enumerate_multiindices({1, 2}, rat(2), false);
        assert(mixed.size() == 4);  // [0,0],[0,1],[1,0],[2,0]
        assert(enumerate_multiindices({1}, rat(0), true).empty());
        MultiIndex n({2, 1});
        assert(enumerate_below(n).size() == 6);
        assert(MultiIndex::binomial(n, MultiIndex({1, 1})) == rat(2));
        assert(MultiIndex({3, 2}).factorial() == rat(12));
    }

    std::puts("tree pool enumeration");
    {
        PoolSpec spec;
        spec.max_edges = 3;
        spec.dec_max_edges = 2;
        auto pool = enumerate_trees(sc, spec);
        std::set<std::string> keys;
        for (const auto& t : pool) {
            assert(t.edge_count() <= 3);
            assert(keys.insert(t.key()).second);
            validate(t, sc);
        }
        assert(pool.size() > 40);
        assert(keys.count("1") == 1);
        assert(keys.count("I[t,[0]](1)") == 1);
        std::printf("  pool size (<=3 edges, default budgets): %zu\n", pool.size());
    }

    std::puts("all ok");
    return 0;
}
