#include "nlrothe/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>


namespace nlrothe {

std::pair<SourceSpec, GridFunction> truncate_data(const SourceSpec& f,
                                                  const GridFunction& u0,
                                                  double height) {
    if (!(height > 0.0)) throw std::invalid_argument("truncate_data requires height > 0");
    SourceSpec fh;
    fh.nonneg_required = f.nonneg_required;
    if (const auto* a = std::get_if<AnalyticSource>(&f.data)) {
        auto inner = a->f;
        fh.data = AnalyticSource{
            [inner, height](double x, double t) { return truncate(height, inner(x, t)); },
            a->label.empty() ? a->label : a->label + "|T" + std::to_string(height)};
    } else {
        TabulatedSource tab = std::get<TabulatedSource>(f.data);
        for (auto& level : tab.values) {
            for (double& v : level) v = truncate(height, v);
        }
        fh.data = std::move(tab);
    }
    return {std::move(fh), truncate_field(u0, height)};
}

LadderRun run_ladder(const SourceSpec& f, const GridFunction& u0,
                     std::vector<double> levels, const TimeGrid& tg,
                     const NonlocalOperator& op, const SolverConfig& cfg) {
    if (levels.empty()) throw std::invalid_argument("run_ladder needs at least one level");
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (!(levels[l] > 0.0) || (l > 0 && !(levels[l] > levels[l - 1]))) {
            throw std::invalid_argument("run_ladder levels must be positive and strictly increasing");
        }
    }
    for (double v : u0.values()) {
        if (v < 0.0) throw std::invalid_argument("run_ladder requires nonnegative initial data");
    }

    SourceSpec base = f;
    base.nonneg_required = true;
    LadderRun run{std::move(levels), {}, std::move(base), u0, cfg, tg};
    run.trajectories.reserve(run.levels.size());
    for (std::size_t l = 0; l < run.levels.size(); ++l) {
        auto [fl, u0l] = truncate_data(run.base_source, u0, run.levels[l]);
        try {
            run.trajectories.push_back(solve(u0l, fl, tg, op, cfg));
        } catch (const StepSolveError& err) {
            throw StepSolveError("ladder level " + std::to_string(run.levels[l]) + ": " +
                                     err.what(),
                                 err.last_iterate, err.gradient_norm, err.time_step);
        }
    }
    return run;
}

CauchyGap cauchy_gap(const LadderRun& run, std::size_t i, std::size_t j) {
    if (i >= run.levels.size() || j >= run.levels.size() || i == j) {
        throw std::invalid_argument("cauchy_gap: invalid level indices");
    }
    const GridPtr grid = run.base_u0.grid_ptr();

    auto [fi, u0i] = truncate_data(run.base_source, run.base_u0, run.levels[i]);
    auto [fj, u0j] = truncate_data(run.base_source, run.base_u0, run.levels[j]);

    CauchyGap gap;
    gap.a_nm = l1_distance(u0i, u0j);
    const auto slabs_i = steklov_slabs(fi, run.time_grid, grid, run.config);
    const auto slabs_j = steklov_slabs(fj, run.time_grid, grid, run.config);
    for (std::size_t k = 0; k < slabs_i.size(); ++k) {
        gap.a_nm += run.time_grid.dt * l1_distance(slabs_i[k], slabs_j[k]);
    }

    const double measure = grid->domain().length();
    gap.bound = std::sqrt(2.0 * measure * gap.a_nm) + 2.0 * gap.a_nm;

    const Trajectory& ti = run.trajectories[i];
    const Trajectory& tj = run.trajectories[j];
    for (std::size_t k = 0; k < ti.states.size(); ++k) {
        gap.observed = std::max(gap.observed, l1_distance(ti.states[k], tj.states[k]));
    }
    return gap;
}

double monotone_defect(const LadderRun& run) {
    if (run.levels.size() < 2) {
        throw std::invalid_argument("monotone_defect needs at least two levels");
    }
    double defect = 0.0;
    for (std::size_t l = 0; l + 1 < run.levels.size(); ++l) {
        const Trajectory& lower = run.trajectories[l];
        const Trajectory& upper = run.trajectories[l + 1];
        for (std::size_t k = 0; k < lower.states.size(); ++k) {
            for (std::size_t c = 0; c < lower.states[k].size(); ++c) {
                defect = std::max(defect, lower.states[k][c] - upper.states[k][c]);
            }
        }
    }
    return std::max(defect, 0.0);
}

}  // namespace nlrothe
