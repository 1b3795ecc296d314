#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nlrothe/core.hpp"

namespace nlrothe {

/// Symmetric bounded modulation of the singular kernel:
/// K(x,y) = kappa(x,y) / |x-y|^{1+alpha} with kappa in [1/lambda, lambda].
using KappaFn = std::function<double(double, double)>;

/// Discrete realization of the interaction measure dx dy / |x-y|^{1+alpha}.
///
/// w holds the m x m cell-pair weights (symmetric, zero diagonal); tau the
/// per-cell interaction with the exterior, where fields vanish. Both are
/// exact integrals of the kernel, not point samples, so the singular pair
/// integral needs no principal value: the diagonal contribution is zero by
/// construction.
struct KernelWeights {
    GridPtr grid;
    double alpha = 0.5;     ///< singularity exponent p*s
    double lambda = 1.0;    ///< ellipticity constant of kappa (1 = pure kernel)
    std::vector<double> w;  ///< dense m*m, row-major
    std::vector<double> tau;
    std::optional<std::size_t> band;  ///< far-field truncation width, bench only

    [[nodiscard]] std::size_t size() const noexcept { return tau.size(); }
    [[nodiscard]] double w_at(std::size_t i, std::size_t j) const {
        return w[i * size() + j];
    }
};

/// Exact interaction weight of two cells of width h whose centers are d*h
/// apart: the double integral of |x-y|^{-(1+alpha)} over the cell pair,
/// via the second antiderivative Phi(t) = t^{1-alpha} / (alpha*(alpha-1)).
/// Requires 0 < alpha < 1; beyond that the adjacent-cell integral diverges.
double cell_pair_weight(double h, std::size_t d, double alpha);

/// Exact pointwise exterior interaction for x strictly inside (a, b):
/// integral of |x-y|^{-(1+alpha)} over R \ (a,b), equal to
/// ((x-a)^{-alpha} + (b-x)^{-alpha}) / alpha. Blows up at the boundary.
double tail_weight(const Domain& domain, double x, double alpha);

/// Exterior weight integrated exactly over one cell [xl, xr] of the domain.
double cell_tail_weight(const Domain& domain, double xl, double xr, double alpha);

/// Exact interaction of one cell of width h with the rest of the line:
/// 2 h^{1-alpha} / (alpha (1-alpha)). Row sums of w plus tau reproduce it.
double cell_total_weight(double h, double alpha);

struct AssembleOptions {
    KappaFn kappa;                    ///< empty = pure kernel
    double lambda = 1.0;              ///< admissible range of kappa values
    std::optional<std::size_t> band;  ///< keep |i-j| <= band, fold the rest into tau
};

/// Build the weights for a grid under the given configuration. The pure
/// kernel is translation invariant, so w_ij depends only on |i-j| and the
/// assembly costs O(m) distinct integrals. A kappa modulation scales each
/// pair weight by kappa at the cell-center pair (and tau by kappa on the
/// diagonal); kappa must be symmetric with values in [1/lambda, lambda].
KernelWeights assemble(GridPtr grid, const SolverConfig& cfg, const AssembleOptions& opts = {});

/// Discrete Poincare quotient ||u||_p^p / gagliardo_energy(u).
/// Scale invariant; errors on u identically zero.
double poincare_ratio(const GridFunction& u, const KernelWeights& kw, double p);

}  // namespace nlrothe
