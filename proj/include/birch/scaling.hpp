#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "birch/multiindex.hpp"
#include "birch/rational.hpp"

namespace birch {

enum class TypeKind { Kernel, Noise };

struct TypeInfo {
    std::string name;
    Rat degree;  // |t|_s; positive for kernel types, negative for noise types
    TypeKind kind = TypeKind::Kernel;
};

// Degree table: space-time dimension d+1, integer scaling s, and the edge
// type table. Degrees of trees and the positivity projector are computed
// against one of these. Immutable after construction.
class Scaling {
public:
    Scaling(std::vector<int> s, std::vector<TypeInfo> types, bool terminal_noise = true)
        : s_(std::move(s)), terminal_noise_(terminal_noise) {
        if (s_.empty()) throw std::invalid_argument("scaling needs at least one direction");
        for (int w : s_)
            if (w <= 0) throw std::invalid_argument("scaling weights must be positive");
        for (auto& t : types) {
            if (t.name.empty() || t.name.find_first_of("[](),.*^ \t") != std::string::npos)
                throw std::invalid_argument("bad type name: '" + t.name + "'");
            if (!types_.emplace(t.name, t).second)
                throw std::invalid_argument("duplicate type name: " + t.name);
        }
    }

    std::size_t dim() const { return s_.size(); }
    const std::vector<int>& weights() const { return s_; }
    bool terminal_noise() const { return terminal_noise_; }

    bool has_type(const std::string& name) const { return types_.count(name) != 0; }

    const TypeInfo& type(const std::string& name) const {
        auto it = types_.find(name);
        if (it == types_.end()) throw std::invalid_argument("unknown edge type: " + name);
        return it->second;
    }

    bool is_noise(const std::string& name) const { return type(name).kind == TypeKind::Noise; }

    // |k|_s for node/edge decorations under this scaling.
    Rat mi_weight(const MultiIndex& k) const {
        if (k.dim() != dim()) throw std::invalid_argument("multiindex dim mismatch with scaling");
        return Rat(k.weight(s_));
    }

    const std::map<std::string, TypeInfo>& types() const { return types_; }

    // Default table used by tests and the CLI when no config is given:
    // one-dimensional scaling, kernel types t (degree 2) and u (degree 3/2),
    // noise type l (degree -3/2 - 1/100). The noise degree is perturbed so
    // that no tree containing a noise edge has integer degree.
    static Scaling standard() {
        return Scaling({1}, {TypeInfo{"t", rat(2), TypeKind::Kernel},
                             TypeInfo{"u", rat(3, 2), TypeKind::Kernel},
                             TypeInfo{"l", rat(-151, 100), TypeKind::Noise}});
    }

private:
    std::vector<int> s_;
    std::map<std::string, TypeInfo> types_;
    bool terminal_noise_;
};

}  // namespace birch
