#pragma once

#include <string>
#include <vector>

#include "birch/scaling.hpp"
#include "birch/tree.hpp"

namespace birch {

// Exhaustive pool of decorated trees for the verification suites. The
// decoration budgets keep the enumeration desk-sized: a tree may spend at
// most node_budget on node decorations (|n(v)|_s summed over vertices) and
// edge_budget on derivative decorations (|p(e)|_s summed over edges), and
// trees with more than dec_max_edges edges carry no decorations at all.
// Terminal-noise constraints of the scaling are respected. The result is
// deduplicated and sorted by (edge count, canonical key).
struct PoolSpec {
    long max_edges = 4;
    long node_budget = 1;
    long edge_budget = 1;
    long dec_max_edges = 4;
    std::vector<std::string> types;  // empty: every type in the scaling
};

std::vector<Tree> enumerate_trees(const Scaling& sc, const PoolSpec& spec);

}  // namespace birch
