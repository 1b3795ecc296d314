#pragma once

#include <memory>

#include "nlrothe/kernel.hpp"
#include "nlrothe/operator.hpp"
#include "nlrothe/stepper.hpp"
#include "test_rng.hpp"

namespace fix {

inline nlrothe::GridPtr unit_grid(std::size_t m) {
    return nlrothe::make_grid(nlrothe::Domain(0.0, 1.0), m);
}

inline nlrothe::SolverConfig config(double s, double p) {
    nlrothe::SolverConfig cfg;
    cfg.s = s;
    cfg.p = p;
    return cfg;
}

inline std::shared_ptr<const nlrothe::KernelWeights> weights(const nlrothe::GridPtr& grid,
                                                             const nlrothe::SolverConfig& cfg) {
    return std::make_shared<const nlrothe::KernelWeights>(nlrothe::assemble(grid, cfg));
}

inline nlrothe::NonlocalOperator make_op(const nlrothe::GridPtr& grid,
                                         const nlrothe::SolverConfig& cfg) {
    return nlrothe::NonlocalOperator(weights(grid, cfg), cfg);
}

inline nlrothe::GridFunction random_field(const nlrothe::GridPtr& grid, TestRng& rng,
                                          double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(grid->size());
    for (double& x : v) x = rng.uniform(lo, hi);
    return nlrothe::GridFunction(grid, std::move(v));
}

}  // namespace fix
