#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nlrothe/core.hpp"
#include "nlrothe/stepper.hpp"

namespace nlrothe {

/// One solve per truncation height of the data, on a shared grid and time
/// grid so that the levels can be compared cell by cell.
struct LadderRun {
    std::vector<double> levels;          ///< strictly increasing heights
    std::vector<Trajectory> trajectories;
    SourceSpec base_source;
    GridFunction base_u0;
    SolverConfig config;
    TimeGrid time_grid;
};

/// Clamp the data at the given height: the source pointwise, the initial
/// datum cell by cell. L1 norms can only shrink.
std::pair<SourceSpec, GridFunction> truncate_data(const SourceSpec& f,
                                                  const GridFunction& u0,
                                                  double height);

/// Run one solve per level on truncated data. Requires nonnegative data so
/// the truncations are ordered in the height.
LadderRun run_ladder(const SourceSpec& f, const GridFunction& u0,
                     std::vector<double> levels, const TimeGrid& tg,
                     const NonlocalOperator& op, const SolverConfig& cfg);

struct CauchyGap {
    double a_nm = 0.0;      ///< L1 distance of the truncated data pair
    double bound = 0.0;     ///< sqrt(2 |Omega| a_nm) + 2 a_nm
    double observed = 0.0;  ///< sup over time of the l1 gap of the solutions
};

/// Data-driven contraction bound between two ladder levels.
CauchyGap cauchy_gap(const LadderRun& run, std::size_t i, std::size_t j);

/// Largest pointwise violation of level monotonicity:
/// max over consecutive levels, steps and cells of (u_lower - u_upper)_+.
double monotone_defect(const LadderRun& run);

}  // namespace nlrothe
