#include "nlrothe/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlrothe/operator.hpp"
#include "nlrothe/parallel.hpp"

namespace nlrothe {

namespace {

// Second antiderivative of t^{-(1+alpha)}: Phi(t) = t^{1-alpha}/(alpha(alpha-1)),
// continued by Phi(0) = 0. Evaluated in extended precision because the pair
// weight is a second difference of nearly equal values at large separations.
long double phi2(long double t, long double alpha) {
    if (t == 0.0L) return 0.0L;
    return std::pow(t, 1.0L - alpha) / (alpha * (alpha - 1.0L));
}

// Antiderivative of the pointwise tail ((x-a)^{-alpha} + (b-x)^{-alpha})/alpha.
long double tail_primitive(long double xa, long double bx, long double alpha) {
    return (std::pow(xa, 1.0L - alpha) - std::pow(bx, 1.0L - alpha)) /
           (alpha * (1.0L - alpha));
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument(
            "kernel weights diverge for p*s >= 1: requires p*s < 1 in one dimension "
            "(got alpha = " + std::to_string(alpha) + ")");
    }
}

}  // namespace

double cell_pair_weight(double h, std::size_t d, double alpha) {
    require_alpha(alpha);
    if (!(h > 0.0)) throw std::invalid_argument("cell_pair_weight requires h > 0");
    if (d == 0) throw std::invalid_argument("cell_pair_weight requires d >= 1");
    const long double lh = h;
    const long double la = alpha;
    const long double dd = static_cast<long double>(d);
    const long double val = phi2((dd + 1.0L) * lh, la) - 2.0L * phi2(dd * lh, la) +
                            phi2((dd - 1.0L) * lh, la);
    return static_cast<double>(val);
}

double tail_weight(const Domain& domain, double x, double alpha) {
    require_alpha(alpha);
    if (!domain.contains(x)) {
        throw std::invalid_argument("tail_weight requires x strictly inside (a, b)");
    }
    return (std::pow(x - domain.a, -alpha) + std::pow(domain.b - x, -alpha)) / alpha;
}

double cell_tail_weight(const Domain& domain, double xl, double xr, double alpha) {
    require_alpha(alpha);
    if (!(domain.a <= xl && xl < xr && xr <= domain.b)) {
        throw std::invalid_argument("cell_tail_weight: cell must lie inside the domain");
    }
    const long double la = alpha;
    const long double hi = tail_primitive(xr - domain.a, domain.b - xr, la);
    const long double lo = tail_primitive(xl - domain.a, domain.b - xl, la);
    return static_cast<double>(hi - lo);
}

double cell_total_weight(double h, double alpha) {
    require_alpha(alpha);
    const long double lh = h;
    const long double la = alpha;
    return static_cast<double>(2.0L * std::pow(lh, 1.0L - la) / (la * (1.0L - la)));
}

KernelWeights assemble(GridPtr grid, const SolverConfig& cfg, const AssembleOptions& opts) {
    if (!grid) throw std::invalid_argument("assemble requires a grid");
    cfg.validate();
    const double alpha = cfg.alpha();
    require_alpha(alpha);
    if (opts.lambda < 1.0) throw std::invalid_argument("assemble: lambda must be >= 1");
    if (opts.band && opts.kappa) {
        throw std::invalid_argument("assemble: banded mode supports the pure kernel only");
    }

    const std::size_t m = grid->size();
    const double h = grid->spacing();

    KernelWeights kw;
    kw.grid = grid;
    kw.alpha = alpha;
    kw.lambda = opts.lambda;
    kw.band = opts.band;
    kw.w.assign(m * m, 0.0);
    kw.tau.resize(m);

    // Translation-invariant profile: one integral per separation.
    std::vector<double> profile(m, 0.0);
    for (std::size_t d = 1; d < m; ++d) {
        profile[d] = cell_pair_weight(h, d, alpha);
    }

    const std::size_t band = opts.band ? std::min(*opts.band, m) : m;

    if (!opts.kappa) {
        parallel_for(m, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    const std::size_t d = i > j ? i - j : j - i;
                    if (d <= band) kw.w[i * m + j] = profile[d];
                }
            }
        });
    } else {
        const double kmin = 1.0 / opts.lambda;
        const double kmax = opts.lambda;
        parallel_for(m, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double xi = grid->center(i);
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    const double xj = grid->center(j);
                    const double kij = opts.kappa(xi, xj);
                    const double kji = opts.kappa(xj, xi);
                    if (std::abs(kij - kji) > 1e-12 * std::max(1.0, std::abs(kij))) {
                        throw std::invalid_argument("assemble: non-symmetric kappa sample detected");
                    }
                    if (!(kij >= kmin - 1e-15 && kij <= kmax + 1e-15)) {
                        throw std::invalid_argument(
                            "assemble: kappa value outside [1/lambda, lambda]");
                    }
                    const std::size_t d = i > j ? i - j : j - i;
                    kw.w[i * m + j] = kij * profile[d];
                }
            }
        });
    }

    const double row_total = cell_total_weight(h, alpha);
    for (std::size_t i = 0; i < m; ++i) {
        double tau = cell_tail_weight(grid->domain(), grid->cell_left(i),
                                      grid->cell_right(i), alpha);
        if (opts.kappa) {
            const double xi = grid->center(i);
            const double kii = opts.kappa(xi, xi);
            if (!(kii >= 1.0 / opts.lambda - 1e-15 && kii <= opts.lambda + 1e-15)) {
                throw std::invalid_argument("assemble: kappa value outside [1/lambda, lambda]");
            }
            tau *= kii;
        }
        if (opts.band && band < m) {
            // Fold the discarded far field into the exterior term: the row
            // integral over the whole line is known in closed form.
            double kept = 0.0;
            const std::size_t jlo = i > band ? i - band : 0;
            const std::size_t jhi = std::min(m, i + band + 1);
            for (std::size_t j = jlo; j < jhi; ++j) {
                if (j != i) kept += kw.w[i * m + j];
            }
            tau = row_total - kept;
        }
        kw.tau[i] = tau;
    }

    return kw;
}

double poincare_ratio(const GridFunction& u, const KernelWeights& kw, double p) {
    if (!u.grid().same_layout(*kw.grid)) {
        throw std::invalid_argument("poincare_ratio: grid mismatch");
    }
    bool all_zero = true;
    for (double v : u.values()) {
        if (v != 0.0) { all_zero = false; break; }
    }
    if (all_zero) {
        throw std::invalid_argument("poincare_ratio undefined for u identically zero");
    }
    return lp_mass(u, p) / gagliardo_energy(kw, u, p);
}

}  // namespace nlrothe
