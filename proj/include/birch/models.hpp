#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "birch/gausspoly.hpp"
#include "birch/hopf.hpp"
#include "birch/scaling.hpp"
#include "birch/tree.hpp"

namespace birch {

// Kernel assignment: an integrable Gaussian-polynomial kernel for every
// kernel type and a deterministic smooth realisation for every noise type.
// Everything downstream (canonical lifts, models, renormalised models)
// evaluates against one of these.
struct KernelAssignment {
    std::size_t dim = 1;
    std::map<std::string, GaussPolyFn> kernels;
    std::map<std::string, GaussPolyFn> noises;

    const GaussPolyFn& kernel(const std::string& type) const;
    const GaussPolyFn& noise(const std::string& type) const;

    // e^{-|x|^2} for every type in the table; enough structure for the
    // verification suites while keeping every convolution closed-form.
    static KernelAssignment standard(const Scaling& sc);
};

// Character on trees with values in Gaussian-polynomial functions of the
// running point.
using TreeFn = std::function<GaussPolyFn(const Tree&)>;

// Recentring family: xbar -> Pi^{(xbar)}.
using RecentredFamily = std::function<GaussPolyFn(const Tree&, const std::vector<double>&)>;

// Canonical lift recentred at xbar: X^k goes to (y - xbar)^k, a kernel
// branch I[t,p](tau) convolves D^p K_t with the lift of tau, a noise branch
// evaluates the assigned realisation (noise edges are terminal). Branches
// multiply pointwise; planted markers are ignored, so the lift is the
// multiplicative extension to the hatted space as well. Results are
// memoised per (xbar, tree).
TreeFn canonical_pi(const KernelAssignment& ka, const Scaling& sc, const std::vector<double>& xbar);

// The same lift packaged as a recentring family with a shared memo table.
RecentredFamily canonical_family(const KernelAssignment& ka, const Scaling& sc);

// (y - xbar)^k expanded as a width-zero Gaussian polynomial.
GaussPolyFn shifted_monomial(const MultiIndex& k, const std::vector<double>& xbar);

// Tree combination with real coefficients; what the re-expansion maps
// Gamma_xy produce once the scalar characters are evaluated.
using RealTreeSum = LinComb<Tree, double>;

// (X + h 1)^k expanded in the tree algebra.
RealTreeSum shifted_tree_monomial(const MultiIndex& k, const std::vector<double>& h);

// Recentred model built on a canonical lift Pi^{(xbar)}:
//   f_x    = Pi o twisted antipode, evaluated at x (strict derivative sums)
//   pi     = Pi_x = (Pi (x) f_x) applied to the coaction
//   gamma  = gamma_xy = (f_x o antipode (x) f_y) applied to the coproduct
//   Gamma  = Gamma_xy = (id (x) gamma_xy) applied to the coaction
// Copies share one memo table; evaluation is pure.
struct Model {
    RecentredFamily pi;
    std::function<double(const Tree&, const std::vector<double>&)> f;
    std::function<double(const Tree&, const std::vector<double>&, const std::vector<double>&)>
        gamma;
    std::function<RealTreeSum(const Tree&, const std::vector<double>&, const std::vector<double>&)>
        Gamma;
    KernelAssignment assignment;
    Scaling scaling;
    std::vector<double> xbar;
};

Model build_model(const KernelAssignment& ka, const Scaling& sc, const std::vector<double>& xbar);

// Self-contained recursion for Pi_x: a kernel branch convolves and then
// subtracts the Taylor jet at x up to the branch degree (inclusive bound);
// monomials recentre to (y - x)^k and branches multiply.
GaussPolyFn pi_x_recursive(const KernelAssignment& ka, const Scaling& sc, const Tree& t,
                           const std::vector<double>& x);

// Counterterm character on a positive planted tree I[t,k](s) through the
// jet formula: -sum_{|l|_s <= deg} (xbar-x)^l/l! (D^{k+l}K_t * Pi_x s)(x).
// Throws on anything that is not planted with positive degree.
double f_x_recursive(const KernelAssignment& ka, const Scaling& sc, const Tree& planted,
                     const std::vector<double>& x, const std::vector<double>& xbar);

// Re-expansion by structural recursion: monomials shift by (y - x), and a
// kernel branch I_{(t,k)}(s) maps to I_{(t,k)}(Gamma s) plus the polynomial
// defect sum over |l| <= deg I_{(t,k)}(s) of X^l / l! times
//   (Pi_x I_{(t,k+l)}(s))(y) - (Pi_y I_{(t,k+l)}(Gamma s))(y),
// where the second evaluation only sees the keys of Gamma s whose planted
// degree went negative. The point order is transposed against build_model's
// map: this recursion equals Gamma_yx of the model.
RealTreeSum gamma_recursive(const Model& m, const Tree& t, const std::vector<double>& x,
                            const std::vector<double>& y);

// Verification report, one row per (check, tree) aggregated over the point
// sample; `points` names the sample so rows stay readable.
struct ModelCheck {
    std::string check;
    std::string tree;
    std::string points;
    double max_gap = 0.0;
    bool pass = true;
};

struct ModelReport {
    std::vector<ModelCheck> checks;
    bool pass = true;
    double max_gap = 0.0;
};

enum class ModelSuite { Algebraic, Invariance, Recursive };

// Algebraic: Gamma_xx = id, Gamma_xy Gamma_yz = Gamma_xz, Pi_y = Pi_x Gamma_xy.
// Invariance: the model does not depend on the recentring point of the lift.
// Recursive: the structural recursions match the coaction definitions.
ModelReport verify_model(const Model& m, ModelSuite suite, const std::vector<Tree>& trees,
                         const std::vector<std::vector<double>>& points, double tol = 1e-8);

// |Pi_x tau(x + h dir)| / |h|^{deg tau} on halving step sizes; the analytic
// model bound is asymptotic, so this is a diagnostic table, not a check.
std::vector<std::pair<double, double>> pi_bound_samples(const Model& m, const Tree& t,
                                                        const std::vector<double>& x,
                                                        const std::vector<double>& dir,
                                                        int levels);

}  // namespace birch
