#include "nlrothe/linalg.hpp"

#include <cmath>

namespace nlrothe {

LdltFactor ldlt_factor(std::vector<double> a, std::size_t n) {
    LdltFactor f;
    f.n = n;
    f.diag.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double dj = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            const double l = a[j * n + k];
            dj -= l * l * f.diag[k];
        }
        if (!(dj > 0.0) || !std::isfinite(dj)) {
            f.ok = false;
            return f;
        }
        f.diag[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= a[i * n + k] * a[j * n + k] * f.diag[k];
            }
            a[i * n + j] = v / dj;
        }
    }
    f.lower = std::move(a);
    f.ok = true;
    return f;
}

void ldlt_solve_factored(const LdltFactor& f, std::vector<double>& b) {
    const std::size_t n = f.n;
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= f.lower[i * n + k] * b[k];
        b[i] = v;
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= f.diag[i];
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= f.lower[k * n + ii] * b[k];
        b[ii] = v;
    }
}

bool ldlt_solve(std::vector<double> a, std::size_t n, std::vector<double>& b) {
    const LdltFactor f = ldlt_factor(std::move(a), n);
    if (!f.ok) return false;
    ldlt_solve_factored(f, b);
    return true;
}

}  // namespace nlrothe
