#include "birch/symtensor.hpp"

namespace birch {

GaussPolyFn sym_expand(const SymTensor& t) {
    GaussPolyFn out(t.dim());
    for (auto& [key, word] : t.words()) {
        GaussPolyFn prod = GaussPolyFn::constant(t.dim(), word.coeff);
        for (const auto& a : word.atoms) prod = prod * a;
        out = out + prod;
    }
    return out;
}

double sym_expectation(const SymTensor& t) {
    return sym_expand(t).eval(std::vector<double>(t.dim(), 0.0));
}

}  // namespace birch
