#pragma once

#include <cmath>
#include <memory>

#include "nlrothe/core.hpp"
#include "nlrothe/kernel.hpp"

namespace nlrothe {

/// Odd power nonlinearity |t|^{p-2} t. phi_p(0) = 0 for every p > 1.
inline double phi_p(double p, double t) {
    if (t == 0.0) return 0.0;
    if (p == 2.0) return t;
    return std::pow(std::abs(t), p - 2.0) * t;
}

/// Derivative of phi_p for the optimizer's Hessian. For p < 2 the exact
/// derivative blows up at t = 0, so it is evaluated on the smoothed
/// nonlinearity (t^2 + eps^2)^{(p-2)/2} t instead; residuals and energies
/// always use the exact phi_p.
inline double phi_p_slope(double p, double t, double eps) {
    if (p == 2.0) return 1.0;
    if (p > 2.0) {
        if (t == 0.0) return 0.0;
        return (p - 1.0) * std::pow(std::abs(t), p - 2.0);
    }
    const double q = t * t + eps * eps;
    if (q == 0.0) return 0.0;
    return std::pow(q, 0.5 * p - 2.0) * ((p - 1.0) * t * t + eps * eps);
}

/// Discrete fractional p-Laplacian acting on cell-averaged fields.
struct NonlocalOperator {
    std::shared_ptr<const KernelWeights> weights;
    double p = 2.0;
    double eps = 1e-12;

    NonlocalOperator(std::shared_ptr<const KernelWeights> kw, const SolverConfig& cfg)
        : weights(std::move(kw)), p(cfg.p), eps(cfg.regularization_eps) {
        if (!weights) throw std::invalid_argument("NonlocalOperator requires weights");
        if (weights->alpha != cfg.p * cfg.s) {
            throw std::invalid_argument(
                "NonlocalOperator: config exponent p*s does not match the assembled weights");
        }
    }

    [[nodiscard]] const Grid& grid() const { return *weights->grid; }
};

/// Apply the operator: out_i = (1/h) [ sum_j w_ij phi_p(u_i - u_j)
/// + tau_i phi_p(u_i) ]. Returned as a density so that
/// sum_i h * apply(u)_i * v_i reproduces the duality pairing.
GridFunction apply(const NonlocalOperator& op, const GridFunction& u);

/// Discrete Gagliardo p-energy over the interaction set:
/// sum_{i != j} w_ij |u_i - u_j|^p + 2 sum_i tau_i |u_i|^p.
/// Zero iff u vanishes; homogeneous of degree p.
double gagliardo_energy(const KernelWeights& kw, const GridFunction& u, double p);

/// Duality pairing <A(w), v> = (1/2) sum_{i != j} w_ij phi_p(w_i - w_j)(v_i - v_j)
/// + sum_i tau_i phi_p(w_i) v_i. Agrees with sum_i h apply(w)_i v_i.
double pairing(const NonlocalOperator& op, const GridFunction& w, const GridFunction& v);

}  // namespace nlrothe
