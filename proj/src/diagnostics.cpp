#include "nlrothe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlrothe {

namespace {

std::string fmt_height(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

// Membership in the band R_h: one value past h+1 while the other is at or
// below h (or the signs differ).
bool in_band(double h, double a, double b) {
    const double hi = std::max(std::abs(a), std::abs(b));
    const double lo = std::min(std::abs(a), std::abs(b));
    return hi >= h + 1.0 && (lo <= h || a * b < 0.0);
}

}  // namespace

std::vector<TestFunction> test_function_family(const Domain& domain, double t_end) {
    if (!(t_end > 0.0)) throw std::invalid_argument("test_function_family requires t_end > 0");
    const double a = domain.a;
    const double b = domain.b;

    std::vector<TestFunction> family;
    for (int q = 0; q <= 2; ++q) {
        auto raw = [a, b, q](double x) {
            const double bump = (x - a) * (x - a) * (b - x) * (b - x);
            double poly = 1.0;
            for (int k = 0; k < q; ++k) poly *= x;
            return bump * poly;
        };
        double sup = 0.0;
        for (int i = 0; i <= 4096; ++i) {
            const double x = a + (b - a) * static_cast<double>(i) / 4096.0;
            sup = std::max(sup, std::abs(raw(x)));
        }
        if (!(sup > 0.0)) throw std::logic_error("degenerate space test function");
        auto space = [raw, sup](double x) { return raw(x) / sup; };

        const double T = t_end;
        const struct {
            std::function<double(double)> theta;
            std::function<double(double)> theta_dt;
            bool vanishes;
            const char* tag;
        } time_parts[] = {
            {[T](double t) { return 1.0 - t / T; },
             [T](double) { return -1.0 / T; }, true, "linear"},
            {[T](double t) { const double r = 1.0 - t / T; return r * r; },
             [T](double t) { return -2.0 * (1.0 - t / T) / T; }, true, "quadratic"},
            {[T](double t) { return std::cos(std::numbers::pi * t / (2.0 * T)); },
             [T](double t) {
                 return -std::numbers::pi / (2.0 * T) *
                        std::sin(std::numbers::pi * t / (2.0 * T));
             },
             false, "cosine"},
        };
        for (const auto& tp : time_parts) {
            TestFunction f;
            f.space = space;
            f.time = tp.theta;
            f.time_deriv = tp.theta_dt;
            f.vanishes_at_end = tp.vanishes;
            f.label = "psi_x^" + std::to_string(q) + "*theta_" + tp.tag;
            family.push_back(std::move(f));
        }
    }
    return family;
}

double trajectory_sup(const Trajectory& traj, std::size_t from_state) {
    double sup = 0.0;
    for (std::size_t k = from_state; k < traj.states.size(); ++k) {
        for (double v : traj.states[k].values()) sup = std::max(sup, std::abs(v));
    }
    return sup;
}

double trajectory_median(const Trajectory& traj, std::size_t from_state) {
    std::vector<double> all;
    for (std::size_t k = from_state; k < traj.states.size(); ++k) {
        for (double v : traj.states[k].values()) all.push_back(std::abs(v));
    }
    if (all.empty()) return 0.0;
    std::sort(all.begin(), all.end());
    const std::size_t n = all.size();
    return n % 2 == 1 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
}

ReportEntry truncation_energy_check(const Trajectory& traj, const NonlocalOperator& op,
                                    double height, double f_l1, double u0_l1) {
    if (!(height > 0.0)) throw std::invalid_argument("truncation_energy_check requires k > 0");
    traj.validate();
    long double acc = 0.0L;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        acc += traj.time_grid.dt *
               gagliardo_energy(*op.weights, truncate_field(traj.states[k], height), op.p);
    }
    const double value = 0.5 * static_cast<double>(acc);
    const double bound = height * (f_l1 + u0_l1) * 1.05;
    return make_entry("truncation_energy[k=" + fmt_height(height) + "]", value, bound,
                      "0.5 * sum dt*energy(T_k u) vs k*(|f|_1 + |u0|_1)*1.05");
}

std::vector<std::pair<double, double>> renormalized_tail(const Trajectory& traj,
                                                         const KernelWeights& kw, double p,
                                                         const std::vector<double>& heights) {
    traj.validate();
    if (!traj.states.front().grid().same_layout(*kw.grid)) {
        throw std::invalid_argument("renormalized_tail: grid mismatch");
    }
    for (std::size_t l = 0; l < heights.size(); ++l) {
        if (!(heights[l] > 0.0) || (l > 0 && !(heights[l] > heights[l - 1]))) {
            throw std::invalid_argument("renormalized_tail heights must be positive increasing");
        }
    }
    const std::size_t m = kw.size();
    std::vector<std::pair<double, double>> out;
    out.reserve(heights.size());
    for (double hgt : heights) {
        long double acc = 0.0L;
        for (std::size_t k = 1; k < traj.states.size(); ++k) {
            const auto& uv = traj.states[k].values();
            long double mass = 0.0L;
            for (std::size_t i = 0; i < m; ++i) {
                const double* row = kw.w.data() + i * m;
                for (std::size_t j = i + 1; j < m; ++j) {
                    if (row[j] != 0.0 && in_band(hgt, uv[i], uv[j])) {
                        mass += 2.0L * row[j] * std::pow(std::abs(uv[i] - uv[j]), p - 1.0);
                    }
                }
                if (in_band(hgt, uv[i], 0.0)) {
                    mass += 2.0L * kw.tau[i] * std::pow(std::abs(uv[i]), p - 1.0);
                }
            }
            acc += traj.time_grid.dt * mass;
        }
        out.emplace_back(hgt, static_cast<double>(acc));
    }
    return out;
}

double renormalized_residual(const Trajectory& traj, const NonlocalOperator& op,
                             double sigma, const TestFunction& phi,
                             const SourceSpec& f, const SolverConfig& cfg) {
    if (!(sigma > 0.0)) throw std::invalid_argument("renormalized_residual requires sigma > 0");
    if (!phi.vanishes_at_end) {
        throw std::invalid_argument(
            "renormalized_residual needs a test function vanishing at t = T");
    }
    traj.validate();
    const GridPtr grid = traj.states.front().grid_ptr();
    const std::size_t m = grid->size();
    const double h = grid->spacing();
    const double dt = traj.time_grid.dt;
    const auto slabs = steklov_slabs(f, traj.time_grid, grid, cfg);

    std::vector<double> psi(m);
    for (std::size_t i = 0; i < m; ++i) psi[i] = phi.space(grid->center(i));

    long double acc = 0.0L;

    // -sum h S(u0) phi(x, 0)
    const double theta0 = phi.time(0.0);
    for (std::size_t i = 0; i < m; ++i) {
        acc -= h * smooth_cutoff(sigma, traj.states[0][i]) * psi[i] * theta0;
    }

    for (std::size_t k = 1; k <= traj.step_count(); ++k) {
        const double tk = traj.time_grid.time(k);
        const double tkm1 = traj.time_grid.time(k - 1);
        const double dtheta = phi.time(tk) - phi.time(tkm1);
        const double thetak = phi.time(tk);
        const auto& ukm1 = traj.states[k - 1].values();
        const auto& uk = traj.states[k];

        // -sum h S(u) d_t phi, with the state taken on the left of each slab
        // and d_t phi integrated exactly over it.
        for (std::size_t i = 0; i < m; ++i) {
            acc -= h * smooth_cutoff(sigma, ukm1[i]) * psi[i] * dtheta;
        }

        // + dt <A(u_k), S'(u_k) phi(t_k)> and - dt sum h f S'(u_k) phi(t_k).
        std::vector<double> test(m);
        for (std::size_t i = 0; i < m; ++i) {
            test[i] = smooth_cutoff_slope(sigma, uk[i]) * psi[i] * thetak;
        }
        const GridFunction au = apply(op, uk);
        long double inner = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            inner += h * (au[i] - slabs[k - 1][i]) * test[i];
        }
        acc += dt * inner;
    }
    return std::abs(static_cast<double>(acc));
}

double entropy_residual(const Trajectory& traj, const NonlocalOperator& op, double height,
                        const TestFunction& phi, const SourceSpec& f,
                        const SolverConfig& cfg) {
    if (!(height > 0.0)) throw std::invalid_argument("entropy_residual requires k > 0");
    traj.validate();
    const GridPtr grid = traj.states.front().grid_ptr();
    const std::size_t m = grid->size();
    const double h = grid->spacing();
    const double dt = traj.time_grid.dt;
    const auto slabs = steklov_slabs(f, traj.time_grid, grid, cfg);

    std::vector<double> psi(m);
    for (std::size_t i = 0; i < m; ++i) psi[i] = phi.space(grid->center(i));

    long double acc = 0.0L;

    // Theta_k(u - phi) at T minus at 0.
    const double theta_end = phi.time(traj.time_grid.t_end);
    const double theta0 = phi.time(0.0);
    const auto& u_end = traj.states.back();
    const auto& u_init = traj.states.front();
    for (std::size_t i = 0; i < m; ++i) {
        acc += h * truncate_primitive(height, u_end[i] - psi[i] * theta_end);
        acc -= h * truncate_primitive(height, u_init[i] - psi[i] * theta0);
    }

    for (std::size_t k = 1; k <= traj.step_count(); ++k) {
        const double tk = traj.time_grid.time(k);
        const double dtheta = phi.time(tk) - phi.time(traj.time_grid.time(k - 1));
        const auto& uk = traj.states[k];

        std::vector<double> test(m);
        for (std::size_t i = 0; i < m; ++i) {
            test[i] = truncate(height, uk[i] - psi[i] * phi.time(tk));
        }

        // + int <phi_t, T_k(u - phi)> with the slab integral of theta' exact.
        long double inner = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            inner += h * psi[i] * dtheta * test[i];
        }
        acc += inner;

        // + dt <A(u_k), T_k(u-phi)> - dt sum h f T_k(u-phi).
        const GridFunction au = apply(op, uk);
        inner = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            inner += h * (au[i] - slabs[k - 1][i]) * test[i];
        }
        acc += dt * inner;
    }
    return static_cast<double>(acc);
}

double weak_residual(const Trajectory& traj, const NonlocalOperator& op,
                     const TestFunction& phi, const SourceSpec& f,
                     const SolverConfig& cfg) {
    traj.validate();
    const GridPtr grid = traj.states.front().grid_ptr();
    const std::size_t m = grid->size();
    const double h = grid->spacing();
    const double dt = traj.time_grid.dt;
    const auto slabs = steklov_slabs(f, traj.time_grid, grid, cfg);

    std::vector<double> psi(m);
    for (std::size_t i = 0; i < m; ++i) psi[i] = phi.space(grid->center(i));

    long double acc = 0.0L;
    for (std::size_t k = 1; k <= traj.step_count(); ++k) {
        const double thetak = phi.time(traj.time_grid.time(k));
        const auto& uk = traj.states[k];
        const auto& ukm1 = traj.states[k - 1];
        const GridFunction au = apply(op, uk);
        long double inner = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            const double test = psi[i] * thetak;
            inner += h * ((uk[i] - ukm1[i]) / dt + au[i] - slabs[k - 1][i]) * test;
        }
        acc += dt * inner;
    }
    return std::abs(static_cast<double>(acc));
}

ReportEntry comparison_check(const Trajectory& run_u, const Trajectory& run_v) {
    run_u.validate();
    run_v.validate();
    if (!run_u.states.front().grid().same_layout(run_v.states.front().grid()) ||
        run_u.states.size() != run_v.states.size()) {
        throw std::invalid_argument("comparison_check: grid or time grid mismatch");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < run_u.states.size(); ++k) {
        for (std::size_t i = 0; i < run_u.states[k].size(); ++i) {
            worst = std::max(worst, run_u.states[k][i] - run_v.states[k][i]);
        }
    }
    return make_entry("comparison", std::max(worst, 0.0), 1e-10,
                      "max over steps and cells of (u - v)_+");
}

ReportEntry poincare_report(const KernelWeights& kw, double p,
                            const std::vector<GridFunction>& samples) {
    if (samples.empty()) throw std::invalid_argument("poincare_report needs samples");
    double worst = 0.0;
    for (const auto& u : samples) {
        worst = std::max(worst, poincare_ratio(u, kw, p));
    }
    return make_entry("poincare_ratio_max", worst, std::nullopt,
                      "m=" + std::to_string(kw.size()));
}

}  // namespace nlrothe
