#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlrothe/core.hpp"
#include "nlrothe/diagnostics.hpp"
#include "nlrothe/kernel.hpp"
#include "nlrothe/ladder.hpp"
#include "nlrothe/stepper.hpp"

namespace nlrothe {

/// 17-significant-digit decimal rendering ('.' separator); round-trips
/// doubles exactly, which is what makes the CSV outputs byte-stable.
std::string fmt17(double v);

// --- writers (header row + '\n' line endings everywhere) --------------------

/// Long format: t,x,u -- one row per (state, cell).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// level,sup_l1_gap_to_next,a_nm_to_next,bound,monotone_defect -- one row
/// per consecutive level pair.
void write_ladder_csv(std::ostream& os, const LadderRun& run);

/// name,value,bound,verdict (bound empty for info entries).
void write_report_csv(std::ostream& os, const DiagnosticsReport& report);
void write_report_text(std::ostream& os, const DiagnosticsReport& report);

/// d,weight -- translation-invariant pure-kernel profile for the grid.
void write_weight_profile_csv(std::ostream& os, const Grid& grid, double alpha);

void write_field_csv(std::ostream& os, const GridFunction& u);

// --- readers ----------------------------------------------------------------

/// Field file with columns (x, value): samples are matched to cells by
/// nearest midpoint; a cell with no sample within half a cell is an error,
/// as is any negative value when nonneg is set.
GridFunction ingest_field(const std::string& path, const GridPtr& grid, bool nonneg);

/// Source file with columns (x, t, value): every time level must cover all
/// cells. Validation against a time grid (coverage, spacing) happens in
/// validate_source_coverage.
SourceSpec ingest_source(const std::string& path, const GridPtr& grid, bool nonneg);

/// A tabulated source must span [0, T] with level spacing at most dt.
void validate_source_coverage(const SourceSpec& f, const TimeGrid& tg);

/// Inverse of write_trajectory_csv against a known grid/time grid.
Trajectory ingest_trajectory(const std::string& path, const GridPtr& grid, const TimeGrid& tg);

}  // namespace nlrothe
