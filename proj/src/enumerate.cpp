#include "birch/enumerate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace birch {

namespace {

struct Gen {
    const Scaling& sc;
    std::vector<std::string> types;
    std::map<std::tuple<long, long, long>, std::vector<Tree>> memo;

    long node_weight(const Tree& t) const {
        long w = t.root_dec().weight(sc.weights());
        for (std::size_t i = 0; i < t.branch_count(); ++i) w += node_weight(t.branch_child(i));
        return w;
    }

    long edge_weight(const Tree& t) const {
        long w = 0;
        for (std::size_t i = 0; i < t.branch_count(); ++i)
            w += t.branch_edge(i).p.weight(sc.weights()) + edge_weight(t.branch_child(i));
        return w;
    }

    // Append one more branch at a time; permutations collapse in `seen`
    // because the tree product is canonical.
    void extend(const Tree& acc, long n, long nb, long eb, std::set<std::string>& seen,
                std::vector<Tree>& out) {
        if (n == 0) {
            if (seen.insert(acc.key()).second) out.push_back(acc);
            return;
        }
        for (long e = 1; e <= n; ++e) {
            for (const auto& type : types) {
                bool leaf_only = sc.is_noise(type) && sc.terminal_noise();
                if (leaf_only && e != 1) continue;
                for (const auto& p : enumerate_multiindices(sc.weights(), Rat(eb), false)) {
                    long pcost = p.weight(sc.weights());
                    for (const auto& child : trees(e - 1, nb, eb - pcost)) {
                        if (leaf_only && !child.is_unit()) continue;
                        long ncost = node_weight(child);
                        long ecost = pcost + edge_weight(child);
                        if (ncost > nb || ecost > eb) continue;
                        extend(tree_product(acc, Tree::planted(type, p, child)), n - e,
                               nb - ncost, eb - ecost, seen, out);
                    }
                }
            }
        }
    }

    // All trees with exactly n edges within the given budgets.
    const std::vector<Tree>& trees(long n, long nb, long eb) {
        auto key = std::tuple(n, nb, eb);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<Tree> out;
        std::set<std::string> seen;
        for (const auto& k : enumerate_multiindices(sc.weights(), Rat(nb), false))
            extend(Tree::monomial(k), n, nb - k.weight(sc.weights()), eb, seen, out);
        std::sort(out.begin(), out.end());
        return memo.emplace(key, std::move(out)).first->second;
    }
};

}  // namespace

std::vector<Tree> enumerate_trees(const Scaling& sc, const PoolSpec& spec) {
    Gen gen{sc, spec.types, {}};
    if (gen.types.empty())
        for (const auto& [name, info] : sc.types()) gen.types.push_back(name);

    std::vector<Tree> out;
    for (long n = 0; n <= spec.max_edges; ++n) {
        bool decorated = n <= spec.dec_max_edges;
        const auto& batch =
            gen.trees(n, decorated ? spec.node_budget : 0, decorated ? spec.edge_budget : 0);
        out.insert(out.end(), batch.begin(), batch.end());
    }
    for (const auto& t : out) validate(t, sc);
    return out;
}

}  // namespace birch
