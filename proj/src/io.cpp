#include "nlrothe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace nlrothe {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    traj.validate();
    os << "t,x,u\n";
    const Grid& grid = traj.states.front().grid();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.time_grid.time(k);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            os << fmt17(t) << ',' << fmt17(grid.center(i)) << ','
               << fmt17(traj.states[k][i]) << '\n';
        }
    }
}

void write_ladder_csv(std::ostream& os, const LadderRun& run) {
    os << "level,sup_l1_gap_to_next,a_nm_to_next,bound,monotone_defect\n";
    for (std::size_t l = 0; l + 1 < run.levels.size(); ++l) {
        const CauchyGap gap = cauchy_gap(run, l, l + 1);
        double defect = 0.0;
        const Trajectory& lower = run.trajectories[l];
        const Trajectory& upper = run.trajectories[l + 1];
        for (std::size_t k = 0; k < lower.states.size(); ++k) {
            for (std::size_t c = 0; c < lower.states[k].size(); ++c) {
                defect = std::max(defect, lower.states[k][c] - upper.states[k][c]);
            }
        }
        os << fmt17(run.levels[l]) << ',' << fmt17(gap.observed) << ','
           << fmt17(gap.a_nm) << ',' << fmt17(gap.bound) << ','
           << fmt17(std::max(defect, 0.0)) << '\n';
    }
}

namespace {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::info: return "info";
    }
    return "info";
}

}  // namespace

void write_report_csv(std::ostream& os, const DiagnosticsReport& report) {
    os << "name,value,bound,verdict\n";
    for (const auto& e : report.entries) {
        os << e.name << ',' << fmt17(e.value) << ','
           << (e.bound ? fmt17(*e.bound) : std::string{}) << ','
           << verdict_name(e.verdict) << '\n';
    }
}

void write_report_text(std::ostream& os, const DiagnosticsReport& report) {
    for (const auto& e : report.entries) {
        os << '[' << verdict_name(e.verdict) << "] " << e.name << ": value = "
           << fmt17(e.value);
        if (e.bound) os << ", bound = " << fmt17(*e.bound);
        if (!e.context.empty()) os << "  (" << e.context << ')';
        os << '\n';
    }
    os << (report.all_pass() ? "ALL CHECKS PASSED\n" : "SOME CHECKS FAILED\n");
}

void write_weight_profile_csv(std::ostream& os, const Grid& grid, double alpha) {
    os << "d,weight\n";
    for (std::size_t d = 1; d < grid.size(); ++d) {
        os << d << ',' << fmt17(cell_pair_weight(grid.spacing(), d, alpha)) << '\n';
    }
}

void write_field_csv(std::ostream& os, const GridFunction& u) {
    os << "x,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << fmt17(u.grid().center(i)) << ',' << fmt17(u[i]) << '\n';
    }
}

namespace {

struct CsvReader {
    explicit CsvReader(const std::string& path) : in(path), name(path) {
        if (!in) throw std::runtime_error("cannot open " + path);
    }

    bool next_row(std::vector<std::string>& cells) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            cells.clear();
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (!line.empty() && line.back() == ',') cells.push_back("");
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
    }

    double parse_double(const std::string& cell) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) fail("malformed number '" + cell + "'");
            return v;
        } catch (const std::runtime_error&) {
            throw;
        } catch (...) {
            fail("malformed number '" + cell + "'");
        }
    }

    std::ifstream in;
    std::string name;
    std::size_t line_no = 0;
};

std::size_t nearest_cell(const Grid& grid, double x) {
    const double rel = (x - grid.domain().a) / grid.spacing() - 0.5;
    const long idx = std::lround(rel);
    const long clamped = std::max(0L, std::min(static_cast<long>(grid.size()) - 1, idx));
    return static_cast<std::size_t>(clamped);
}

}  // namespace

GridFunction ingest_field(const std::string& path, const GridPtr& grid, bool nonneg) {
    CsvReader reader(path);
    std::vector<std::string> cells;
    if (!reader.next_row(cells) || cells.size() < 2 || cells[0] != "x") {
        reader.fail("expected header 'x,value'");
    }
    const std::size_t m = grid->size();
    std::vector<double> best_dist(m, std::numeric_limits<double>::infinity());
    std::vector<double> vals(m, 0.0);
    while (reader.next_row(cells)) {
        if (cells.size() != 2) reader.fail("expected two columns (x, value)");
        const double x = reader.parse_double(cells[0]);
        const double v = reader.parse_double(cells[1]);
        if (nonneg && v < 0.0) reader.fail("negative value under nonneg mode");
        const std::size_t i = nearest_cell(*grid, x);
        const double dist = std::abs(x - grid->center(i));
        if (dist < best_dist[i]) {
            best_dist[i] = dist;
            vals[i] = v;
        }
    }
    const double half = 0.5 * grid->spacing() * (1.0 + 1e-9);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(best_dist[i] <= half)) {
            throw std::runtime_error(path + ": no sample within half a cell of x = " +
                                     fmt17(grid->center(i)));
        }
    }
    return GridFunction(grid, std::move(vals));
}

SourceSpec ingest_source(const std::string& path, const GridPtr& grid, bool nonneg) {
    CsvReader reader(path);
    std::vector<std::string> cells;
    if (!reader.next_row(cells) || cells.size() < 3 || cells[0] != "x" || cells[1] != "t") {
        reader.fail("expected header 'x,t,value'");
    }
    const std::size_t m = grid->size();
    // time level -> (distance, value) per cell
    std::map<double, std::vector<std::pair<double, double>>> levels;
    while (reader.next_row(cells)) {
        if (cells.size() != 3) reader.fail("expected three columns (x, t, value)");
        const double x = reader.parse_double(cells[0]);
        const double t = reader.parse_double(cells[1]);
        const double v = reader.parse_double(cells[2]);
        if (nonneg && v < 0.0) reader.fail("negative value under nonneg mode");
        auto& level = levels[t];
        if (level.empty()) {
            level.assign(m, {std::numeric_limits<double>::infinity(), 0.0});
        }
        const std::size_t i = nearest_cell(*grid, x);
        const double dist = std::abs(x - grid->center(i));
        if (dist < level[i].first) level[i] = {dist, v};
    }
    if (levels.empty()) throw std::runtime_error(path + ": no data rows");

    TabulatedSource tab;
    tab.cells = m;
    const double half = 0.5 * grid->spacing() * (1.0 + 1e-9);
    for (const auto& [t, level] : levels) {
        std::vector<double> vals(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (!(level[i].first <= half)) {
                throw std::runtime_error(path + ": coverage gap at t = " + fmt17(t) +
                                         ", x = " + fmt17(grid->center(i)));
            }
            vals[i] = level[i].second;
        }
        tab.times.push_back(t);
        tab.values.push_back(std::move(vals));
    }
    SourceSpec spec;
    spec.data = std::move(tab);
    spec.nonneg_required = nonneg;
    return spec;
}

void validate_source_coverage(const SourceSpec& f, const TimeGrid& tg) {
    const auto* tab = std::get_if<TabulatedSource>(&f.data);
    if (!tab) return;
    const double slack = 1e-9 * tg.t_end;
    bool ok = !tab->times.empty() && tab->times.front() <= slack &&
              tab->times.back() >= tg.t_end - slack;
    for (std::size_t k = 0; ok && k + 1 < tab->times.size(); ++k) {
        if (tab->times[k + 1] - tab->times[k] > tg.dt * (1.0 + 1e-9)) ok = false;
    }
    if (!ok) {
        throw std::runtime_error(
            "insufficient temporal coverage: tabulated source must span [0, T] "
            "with level spacing at most dt");
    }
}

Trajectory ingest_trajectory(const std::string& path, const GridPtr& grid,
                             const TimeGrid& tg) {
    CsvReader reader(path);
    std::vector<std::string> cells;
    if (!reader.next_row(cells) || cells.size() < 3 || cells[0] != "t") {
        reader.fail("expected header 't,x,u'");
    }
    const std::size_t m = grid->size();
    Trajectory traj;
    traj.time_grid = tg;
    std::vector<std::vector<double>> raw(tg.n_steps + 1, std::vector<double>(m, 0.0));
    std::vector<std::vector<bool>> seen(tg.n_steps + 1, std::vector<bool>(m, false));
    while (reader.next_row(cells)) {
        if (cells.size() != 3) reader.fail("expected three columns (t, x, u)");
        const double t = reader.parse_double(cells[0]);
        const double x = reader.parse_double(cells[1]);
        const double v = reader.parse_double(cells[2]);
        const long k = std::lround(t / tg.dt);
        if (k < 0 || k > static_cast<long>(tg.n_steps) ||
            std::abs(t - tg.time(static_cast<std::size_t>(k))) > 1e-9 * tg.t_end) {
            reader.fail("time level does not match the configured time grid");
        }
        const std::size_t i = nearest_cell(*grid, x);
        if (std::abs(x - grid->center(i)) > 0.5 * grid->spacing() * (1.0 + 1e-9)) {
            reader.fail("x does not match a cell center");
        }
        raw[static_cast<std::size_t>(k)][i] = v;
        seen[static_cast<std::size_t>(k)][i] = true;
    }
    for (std::size_t k = 0; k <= tg.n_steps; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!seen[k][i]) {
                throw std::runtime_error(path + ": missing state value at step " +
                                         std::to_string(k));
            }
        }
        traj.states.emplace_back(grid, std::move(raw[k]));
    }
    return traj;
}

}  // namespace nlrothe
