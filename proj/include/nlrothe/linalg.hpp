#pragma once

#include <cstddef>
#include <vector>

namespace nlrothe {

/// LDL^T factorization of a dense symmetric positive definite matrix
/// (row-major). ok turns false on a nonpositive pivot; callers fall back
/// to a gradient step in that case.
struct LdltFactor {
    std::vector<double> lower;  // unit lower triangle, packed in the full matrix
    std::vector<double> diag;
    std::size_t n = 0;
    bool ok = false;
};

LdltFactor ldlt_factor(std::vector<double> a, std::size_t n);
void ldlt_solve_factored(const LdltFactor& f, std::vector<double>& b);

/// One-shot convenience: factor and solve A x = b in place of b.
bool ldlt_solve(std::vector<double> a, std::size_t n, std::vector<double>& b);

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

inline double linf(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc = std::max(acc, v < 0 ? -v : v);
    return acc;
}

}  // namespace nlrothe
