#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlrothe/core.hpp"
#include "nlrothe/kernel.hpp"
#include "nlrothe/ladder.hpp"
#include "nlrothe/operator.hpp"
#include "nlrothe/stepper.hpp"

namespace nlrothe {

/// Separable C^1 test function phi(x, t) = space(x) * time(t) with the
/// space part vanishing (with its derivative) at the boundary, so its
/// extension by zero to the exterior stays C^1.
struct TestFunction {
    std::function<double(double)> space;
    std::function<double(double)> time;
    std::function<double(double)> time_deriv;
    bool vanishes_at_end = false;
    std::string label;

    [[nodiscard]] double operator()(double x, double t) const { return space(x) * time(t); }
};

/// The built-in family: psi(x) = (x-a)^2 (b-x)^2 * {1, x, x^2}, normalized
/// to sup 1, crossed with theta(t) in {1 - t/T, (1 - t/T)^2, cos(pi t / 2T)}.
/// The first two theta choices vanish at T. Nine members, fixed order.
std::vector<TestFunction> test_function_family(const Domain& domain, double t_end);

enum class Verdict { pass, fail, info };

struct ReportEntry {
    std::string name;
    double value = 0.0;
    std::optional<double> bound;
    Verdict verdict = Verdict::info;
    std::string context;
};

inline ReportEntry make_entry(std::string name, double value,
                              std::optional<double> bound, std::string context = {}) {
    ReportEntry e;
    e.name = std::move(name);
    e.value = value;
    e.bound = bound;
    e.context = std::move(context);
    e.verdict = bound ? (value <= *bound ? Verdict::pass : Verdict::fail) : Verdict::info;
    return e;
}

struct DiagnosticsReport {
    std::vector<ReportEntry> entries;

    [[nodiscard]] bool all_pass() const {
        for (const auto& e : entries) {
            if (e.verdict == Verdict::fail) return false;
        }
        return true;
    }
};

/// Largest |value| over the trajectory states (initial state excluded when
/// from_state = 1, matching the dt-weighted time integrals).
double trajectory_sup(const Trajectory& traj, std::size_t from_state = 0);

/// Median of |value| over the trajectory states from from_state on.
double trajectory_median(const Trajectory& traj, std::size_t from_state = 1);

/// Truncated-energy bound: (1/2) sum_k dt * energy(T_height(u_k)) against
/// height * (f_l1 + u0_l1) * 1.05.
ReportEntry truncation_energy_check(const Trajectory& traj, const NonlocalOperator& op,
                                    double height, double f_l1, double u0_l1);

/// Kernel-weighted |u_i - u_j|^{p-1} mass of the pairs lying in the band
/// R_h = { max(|u|,|v|) >= h+1 and (min(|u|,|v|) <= h or uv < 0) },
/// including cell-exterior pairs (u_i, 0) through tau. One value per height;
/// exactly zero once h reaches the sup of |u|.
std::vector<std::pair<double, double>> renormalized_tail(const Trajectory& traj,
                                                         const KernelWeights& kw, double p,
                                                         const std::vector<double>& heights);

/// |LHS - RHS| of the renormalized identity tested with S = smooth_cutoff
/// at the given sigma and a test function vanishing at T. Time terms are
/// summed by parts against the backward differences of the scheme, so for
/// sigma above the range of u the value reduces to the weak-form defect.
double renormalized_residual(const Trajectory& traj, const NonlocalOperator& op,
                             double sigma, const TestFunction& phi,
                             const SourceSpec& f, const SolverConfig& cfg);

/// Signed LHS - RHS of the entropy inequality at truncation height k;
/// nonpositive up to solver slack for trajectories produced by the stepper.
double entropy_residual(const Trajectory& traj, const NonlocalOperator& op, double height,
                        const TestFunction& phi, const SourceSpec& f,
                        const SolverConfig& cfg);

/// |weak-form defect| with u_t realized as backward differences and the
/// test function evaluated at step right endpoints.
double weak_residual(const Trajectory& traj, const NonlocalOperator& op,
                     const TestFunction& phi, const SourceSpec& f,
                     const SolverConfig& cfg);

/// Ordered-data comparison: value = max over steps and cells of (u - v)_+,
/// bound 1e-10. The caller asserts the data ordering.
ReportEntry comparison_check(const Trajectory& run_u, const Trajectory& run_v);

/// Max Poincare quotient over the samples, recorded with the grid size.
ReportEntry poincare_report(const KernelWeights& kw, double p,
                            const std::vector<GridFunction>& samples);

}  // namespace nlrothe
