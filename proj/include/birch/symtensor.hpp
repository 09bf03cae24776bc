#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "birch/gausspoly.hpp"

namespace birch {

// Element of the symmetric tensor algebra over Gaussian-polynomial
// functions: a linear combination of commuting words f_1 (.) ... (.) f_m.
// Words are kept as multisets of atoms, canonically keyed by the atom
// printouts, so equal tensors compare equal. The empty word is the unit.
class SymTensor {
public:
    struct Word {
        std::vector<GaussPolyFn> atoms;  // sorted by str()
        double coeff = 0.0;
    };

    explicit SymTensor(std::size_t dim) : dim_(dim) {}

    static SymTensor unit(std::size_t dim, double c = 1.0) {
        SymTensor t(dim);
        t.add_word({}, c);
        return t;
    }

    static SymTensor atom(const GaussPolyFn& f, double c = 1.0) {
        SymTensor t(f.dim());
        t.add_word({f}, c);
        return t;
    }

    std::size_t dim() const { return dim_; }
    bool is_zero() const { return words_.empty(); }
    const std::map<std::string, Word>& words() const { return words_; }

    void add_word(std::vector<GaussPolyFn> atoms, double c) {
        if (c == 0.0) return;
        for (const auto& a : atoms)
            if (a.dim() != dim_) throw std::invalid_argument("atom dim mismatch");
        // A zero atom kills the whole word.
        for (const auto& a : atoms)
            if (a == GaussPolyFn(dim_)) return;
        std::sort(atoms.begin(), atoms.end(),
                  [](const GaussPolyFn& x, const GaussPolyFn& y) { return x.str() < y.str(); });
        std::string key;
        for (const auto& a : atoms) key += a.str() + " (.) ";
        auto it = words_.find(key);
        if (it == words_.end()) {
            words_.emplace(std::move(key), Word{std::move(atoms), c});
        } else {
            it->second.coeff += c;
            if (it->second.coeff == 0.0) words_.erase(it);
        }
    }

    friend SymTensor operator+(const SymTensor& a, const SymTensor& b) {
        SymTensor r = a;
        for (auto& [k, w] : b.words_) r.add_word(w.atoms, w.coeff);
        return r;
    }
    friend SymTensor operator-(const SymTensor& a, const SymTensor& b) {
        SymTensor r = a;
        for (auto& [k, w] : b.words_) r.add_word(w.atoms, -w.coeff);
        return r;
    }
    friend SymTensor operator*(double s, const SymTensor& a) {
        SymTensor r(a.dim_);
        for (auto& [k, w] : a.words_) r.add_word(w.atoms, s * w.coeff);
        return r;
    }
    // Symmetric (commutative) tensor product: concatenates words.
    friend SymTensor operator*(const SymTensor& a, const SymTensor& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("tensor dim mismatch");
        SymTensor r(a.dim_);
        for (auto& [ka, wa] : a.words_)
            for (auto& [kb, wb] : b.words_) {
                std::vector<GaussPolyFn> atoms = wa.atoms;
                atoms.insert(atoms.end(), wb.atoms.begin(), wb.atoms.end());
                r.add_word(std::move(atoms), wa.coeff * wb.coeff);
            }
        return r;
    }

    friend bool operator==(const SymTensor& a, const SymTensor& b) {
        if (a.dim_ != b.dim_ || a.words_.size() != b.words_.size()) return false;
        auto ia = a.words_.begin();
        for (auto ib = b.words_.begin(); ib != b.words_.end(); ++ia, ++ib)
            if (ia->first != ib->first || ia->second.coeff != ib->second.coeff) return false;
        return true;
    }

    std::string str() const {
        if (words_.empty()) return "0";
        std::string s;
        for (auto& [k, w] : words_) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", w.coeff);
            if (!s.empty()) s += " + ";
            s += buf;
            for (const auto& a : w.atoms) s += " (.) " + a.str();
        }
        return s;
    }

private:
    std::size_t dim_;
    std::map<std::string, Word> words_;
};

// Deterministic expectation functional: collapses each word to the
// pointwise product of its atoms. Multiplicative by construction.
GaussPolyFn sym_expand(const SymTensor& t);

// Evaluation at the origin after expansion; the scalar-valued functional
// whose kernel is the renormalisation projector on this algebra.
double sym_expectation(const SymTensor& t);

}  // namespace birch
