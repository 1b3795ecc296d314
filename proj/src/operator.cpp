#include "nlrothe/operator.hpp"

#include <stdexcept>

#include "nlrothe/parallel.hpp"

namespace nlrothe {

GridFunction apply(const NonlocalOperator& op, const GridFunction& u) {
    const KernelWeights& kw = *op.weights;
    if (!u.grid().same_layout(*kw.grid)) {
        throw std::invalid_argument("apply: grid mismatch");
    }
    const std::size_t m = u.size();
    const double h = u.grid().spacing();
    const double p = op.p;
    const auto& uv = u.values();
    std::vector<double> out(m, 0.0);
    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double ui = uv[i];
            const double* row = kw.w.data() + i * m;
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                if (row[j] != 0.0) acc += row[j] * phi_p(p, ui - uv[j]);
            }
            acc += kw.tau[i] * phi_p(p, ui);
            out[i] = acc / h;
        }
    });
    return GridFunction(u.grid_ptr(), std::move(out));
}

double gagliardo_energy(const KernelWeights& kw, const GridFunction& u, double p) {
    if (!u.grid().same_layout(*kw.grid)) {
        throw std::invalid_argument("gagliardo_energy: grid mismatch");
    }
    const std::size_t m = u.size();
    const auto& uv = u.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = kw.w.data() + i * m;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (row[j] != 0.0) {
                const double d = uv[i] - uv[j];
                acc += 2.0 * row[j] * std::pow(std::abs(d), p);
            }
        }
        acc += 2.0 * kw.tau[i] * std::pow(std::abs(uv[i]), p);
    }
    return acc;
}

double pairing(const NonlocalOperator& op, const GridFunction& w, const GridFunction& v) {
    const KernelWeights& kw = *op.weights;
    if (!w.grid().same_layout(*kw.grid) || !v.grid().same_layout(*kw.grid)) {
        throw std::invalid_argument("pairing: grid mismatch");
    }
    const std::size_t m = w.size();
    const double p = op.p;
    const auto& wv = w.values();
    const auto& vv = v.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = kw.w.data() + i * m;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (row[j] != 0.0) {
                acc += row[j] * phi_p(p, wv[i] - wv[j]) * (vv[i] - vv[j]);
            }
        }
        acc += kw.tau[i] * phi_p(p, wv[i]) * vv[i];
    }
    return acc;
}

}  // namespace nlrothe
