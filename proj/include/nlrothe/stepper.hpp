#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nlrothe/core.hpp"
#include "nlrothe/operator.hpp"

namespace nlrothe {

/// Space-time source given as a closure f(x, t).
struct AnalyticSource {
    std::function<double(double, double)> f;
    std::string label;
};

/// Space-time source given as samples on time levels times[k] aligned with
/// the cells of one grid: values[k][i]. Evaluation is constant in time from
/// each level until the next (and nearest-cell in space by construction).
struct TabulatedSource {
    std::vector<double> times;                // strictly increasing
    std::vector<std::vector<double>> values;  // values[time][cell]
    std::size_t cells = 0;
};

struct SourceSpec {
    std::variant<AnalyticSource, TabulatedSource> data;
    bool nonneg_required = false;

    /// Point evaluation at a cell center. Enforces the nonnegativity flag.
    [[nodiscard]] double evaluate(const Grid& grid, std::size_t cell, double t) const;

    [[nodiscard]] bool is_tabulated() const noexcept {
        return std::holds_alternative<TabulatedSource>(data);
    }
};

SourceSpec make_analytic_source(std::function<double(double, double)> f,
                                std::string label = {}, bool nonneg_required = false);

/// Sliding time average (1/dt) * integral of f(x_i, .) over [t, t + dt],
/// realized by a composite midpoint rule with q subsamples per cell.
/// Exact for sources constant in time.
GridFunction steklov_average(const SourceSpec& f, double t, double dt,
                             const GridPtr& grid, int q);

/// Steklov slabs for every step of a time grid, with the last averaging
/// window clamped to [T - dt, T]. solve() consumes exactly these fields,
/// so diagnostics recomputing them reproduce the source terms bitwise.
std::vector<GridFunction> steklov_slabs(const SourceSpec& f, const TimeGrid& tg,
                                        const GridPtr& grid, const SolverConfig& cfg);

/// One implicit Euler step posed as a strictly convex minimization.
struct StepProblem {
    GridFunction u_prev;
    GridFunction f_slab;
    double dt;
    NonlocalOperator op;

    StepProblem(GridFunction prev, GridFunction slab, double step, NonlocalOperator oper)
        : u_prev(std::move(prev)), f_slab(std::move(slab)), dt(step), op(std::move(oper)) {
        if (!(dt > 0.0)) throw std::invalid_argument("StepProblem requires dt > 0");
        if (!u_prev.grid().same_layout(f_slab.grid()) ||
            !u_prev.grid().same_layout(op.grid())) {
            throw std::invalid_argument("StepProblem: grid mismatch");
        }
    }
};

/// J(u) = (1/(2 dt)) sum h (u - u_prev)^2 + (1/(2p)) energy(u) - sum h f u.
double objective(const StepProblem& sp, const GridFunction& u);

/// grad_i = (h/dt)(u_i - u_prev_i) + h apply(u)_i - h f_i; vanishes exactly
/// at the minimizer, which solves the time-discrete equation.
GridFunction gradient(const StepProblem& sp, const GridFunction& u);

/// Raised when the optimizer exhausts its budget; carries the last iterate.
class StepSolveError : public std::runtime_error {
public:
    StepSolveError(std::string msg, GridFunction last, double grad_norm, int step_index)
        : std::runtime_error(std::move(msg)),
          last_iterate(std::move(last)),
          gradient_norm(grad_norm),
          time_step(step_index) {}

    GridFunction last_iterate;
    double gradient_norm;
    int time_step;
};

/// Armijo-damped Newton on J (dense factorization, smoothed Hessian for
/// p < 2, gradient-descent fallback). Stops when
/// ||grad||_inf <= newton_tol * (1 + ||f_slab||_inf).
GridFunction step_minimize(const StepProblem& sp, const SolverConfig& cfg);

/// Chain the steps: states[0] = u0, states[k] minimizes the step functional
/// with the Steklov slab taken at the step's left endpoint.
Trajectory solve(const GridFunction& u0, const SourceSpec& f, const TimeGrid& tg,
                 const NonlocalOperator& op, const SolverConfig& cfg);

struct AprioriReport {
    double sup_l2 = 0.0;                  ///< max over states of sum h u^2
    double time_integrated_energy = 0.0;  ///< sum over steps of dt * energy
};

AprioriReport apriori_energy_report(const Trajectory& traj, const NonlocalOperator& op);

}  // namespace nlrothe
