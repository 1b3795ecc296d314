#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlrothe {

/// Open interval (a, b) on the real line. Everything outside it is the
/// exterior, where fields are identically zero.
struct Domain {
    double a = 0.0;
    double b = 1.0;

    Domain() = default;
    Domain(double left, double right) : a(left), b(right) {
        if (!(a < b)) {
            throw std::invalid_argument("Domain requires a < b");
        }
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw std::invalid_argument("Domain endpoints must be finite");
        }
    }

    [[nodiscard]] double length() const noexcept { return b - a; }
    [[nodiscard]] bool contains(double x) const noexcept { return x > a && x < b; }
};

/// Uniform partition of a Domain into m cells of width h. Fields live on
/// cell averages; cell i spans [a + i*h, a + (i+1)*h].
class Grid {
public:
    Grid(Domain domain, std::size_t cell_count)
        : domain_(domain), m_(cell_count) {
        if (m_ == 0) {
            throw std::invalid_argument("Grid needs at least one cell");
        }
        h_ = domain_.length() / static_cast<double>(m_);
        centers_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            centers_[i] = domain_.a + (static_cast<double>(i) + 0.5) * h_;
        }
    }

    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double center(std::size_t i) const { return centers_.at(i); }
    [[nodiscard]] const std::vector<double>& centers() const noexcept { return centers_; }

    /// Cell edge k in [0, m]; exact at both domain endpoints, so boundary
    /// cells never leak outside (a, b) by a rounding ulp.
    [[nodiscard]] double edge(std::size_t k) const {
        if (k == 0) return domain_.a;
        if (k >= m_) return domain_.b;
        return domain_.a + static_cast<double>(k) * h_;
    }
    [[nodiscard]] double cell_left(std::size_t i) const { return edge(i); }
    [[nodiscard]] double cell_right(std::size_t i) const { return edge(i + 1); }

    [[nodiscard]] bool same_layout(const Grid& other) const noexcept {
        return domain_.a == other.domain_.a && domain_.b == other.domain_.b &&
               m_ == other.m_;
    }

private:
    Domain domain_;
    std::size_t m_;
    double h_;
    std::vector<double> centers_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(Domain domain, std::size_t cell_count) {
    return std::make_shared<const Grid>(domain, cell_count);
}

/// Uniform partition of [0, T] into n_steps implicit-Euler steps.
struct TimeGrid {
    double t_end = 1.0;
    std::size_t n_steps = 1;
    double dt = 1.0;

    TimeGrid() = default;
    TimeGrid(double horizon, std::size_t steps) : t_end(horizon), n_steps(steps) {
        if (!(t_end > 0.0) || !std::isfinite(t_end)) {
            throw std::invalid_argument("TimeGrid requires t_end > 0");
        }
        if (n_steps == 0) {
            throw std::invalid_argument("TimeGrid requires n_steps >= 1");
        }
        dt = t_end / static_cast<double>(n_steps);
    }

    [[nodiscard]] double time(std::size_t k) const {
        return k == n_steps ? t_end : dt * static_cast<double>(k);
    }
};

/// Cell-averaged field on a Grid, implicitly zero outside the domain.
/// Values are fixed at construction; operations return new fields.
class GridFunction {
public:
    explicit GridFunction(GridPtr grid, double fill = 0.0)
        : grid_(require_grid(std::move(grid))),
          values_(grid_->size(), fill) {
        if (!std::isfinite(fill)) {
            throw std::invalid_argument("GridFunction values must be finite");
        }
    }

    GridFunction(GridPtr grid, std::vector<double> values)
        : grid_(require_grid(std::move(grid))), values_(std::move(values)) {
        if (values_.size() != grid_->size()) {
            throw std::invalid_argument("GridFunction value count must equal cell count");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("GridFunction values must be finite");
            }
        }
    }

    /// Midpoint sampling of a pointwise closure (the ingestion quadrature).
    static GridFunction sample(GridPtr grid, const std::function<double(double)>& f) {
        if (!grid) throw std::invalid_argument("GridFunction requires a grid");
        std::vector<double> vals(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            vals[i] = f(grid->center(i));
        }
        return GridFunction(std::move(grid), std::move(vals));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    [[nodiscard]] GridFunction map(const std::function<double(double)>& f) const {
        std::vector<double> vals(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) vals[i] = f(values_[i]);
        return GridFunction(grid_, std::move(vals));
    }

private:
    static GridPtr require_grid(GridPtr grid) {
        if (!grid) throw std::invalid_argument("GridFunction requires a grid");
        return grid;
    }

    GridPtr grid_;
    std::vector<double> values_;
};

/// Time-indexed sequence of states; states[0] is the initial datum.
struct Trajectory {
    TimeGrid time_grid;
    std::vector<GridFunction> states;

    [[nodiscard]] const GridFunction& at(std::size_t k) const { return states.at(k); }
    [[nodiscard]] std::size_t step_count() const noexcept { return time_grid.n_steps; }

    void validate() const {
        if (states.size() != time_grid.n_steps + 1) {
            throw std::invalid_argument("Trajectory needs n_steps + 1 states");
        }
        for (const auto& s : states) {
            if (!s.grid().same_layout(states.front().grid())) {
                throw std::invalid_argument("Trajectory states must share one grid");
            }
        }
    }
};

/// Solver parameters shared by kernel assembly, stepping and diagnostics.
/// alpha() = p*s is the kernel singularity exponent; the discrete weights
/// stay finite only for p*s < 1 in one dimension.
struct SolverConfig {
    double s = 0.4;
    double p = 2.0;
    bool strict_exponent_check = true;
    double newton_tol = 1e-10;
    int newton_max_iters = 200;
    double regularization_eps = 1e-12;
    int steklov_subsamples = 8;

    [[nodiscard]] double alpha() const noexcept { return p * s; }

    void validate() const {
        if (!(s > 0.0 && s < 1.0)) {
            throw std::invalid_argument("s must lie in (0,1)");
        }
        if (!(p > 1.0)) {
            throw std::invalid_argument("p must be > 1");
        }
        if (!(newton_tol > 0.0)) {
            throw std::invalid_argument("newton_tol must be > 0");
        }
        if (newton_max_iters < 1) {
            throw std::invalid_argument("newton_max_iters must be >= 1");
        }
        if (regularization_eps < 0.0) {
            throw std::invalid_argument("regularization_eps must be >= 0");
        }
        if (steklov_subsamples < 1) {
            throw std::invalid_argument("steklov_subsamples must be >= 1");
        }
        if (strict_exponent_check && !(alpha() < 1.0)) {
            throw std::invalid_argument(
                "p*s must be < 1 in one dimension: kernel weights diverge "
                "(set strict_exponent_check=false to defer the failure to assembly)");
        }
    }

    [[nodiscard]] std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        if (!strict_exponent_check && !(alpha() < 1.0)) {
            out.push_back("p*s = " + std::to_string(alpha()) +
                          " >= 1: kernel weights diverge and assembly will fail");
        }
        return out;
    }
};

// --- truncation calculus ---------------------------------------------------

/// Clamp r to [-height, height].
inline double truncate(double height, double r) {
    return std::min(height, std::max(r, -height));
}

/// Primitive of the clamp: r^2/2 inside the band, height*|r| - height^2/2 outside.
inline double truncate_primitive(double height, double r) {
    const double ar = std::abs(r);
    if (ar <= height) return 0.5 * r * r;
    return height * ar - 0.5 * height * height;
}

/// Part of r cut away by the clamp: r - truncate(height, r).
inline double truncate_excess(double height, double r) {
    return r - truncate(height, r);
}

/// Lipschitz cutoff: identity below sigma, quadratic blend on
/// [sigma, sigma + 1], saturated at sigma + 1/2 beyond. Odd in r.
inline double smooth_cutoff(double sigma, double r) {
    const double ar = std::abs(r);
    const double sign = r < 0.0 ? -1.0 : 1.0;
    if (ar < sigma) return r;
    if (ar <= sigma + 1.0) {
        const double d = ar - (sigma + 1.0);
        return sign * ((sigma + 0.5) - 0.5 * d * d);
    }
    return sign * (sigma + 0.5);
}

/// Derivative of smooth_cutoff: 1, then sigma + 1 - |r|, then 0.
inline double smooth_cutoff_slope(double sigma, double r) {
    const double ar = std::abs(r);
    if (ar < sigma) return 1.0;
    if (ar <= sigma + 1.0) return sigma + 1.0 - ar;
    return 0.0;
}

// --- norms ------------------------------------------------------------------

enum class NormMode { l1, l2, linf };

/// Sum of h * |u_i|^q over cells (the q-th power of the discrete L^q norm).
inline double lp_mass(const GridFunction& u, double q) {
    const double h = u.grid().spacing();
    double acc = 0.0;
    for (double v : u.values()) acc += h * std::pow(std::abs(v), q);
    return acc;
}

inline double norm_lp(const GridFunction& u, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("norm_lp requires q >= 1");
    return std::pow(lp_mass(u, q), 1.0 / q);
}

inline double norm(const GridFunction& u, NormMode mode) {
    const double h = u.grid().spacing();
    double acc = 0.0;
    switch (mode) {
        case NormMode::l1:
            for (double v : u.values()) acc += h * std::abs(v);
            return acc;
        case NormMode::l2:
            for (double v : u.values()) acc += h * v * v;
            return std::sqrt(acc);
        case NormMode::linf:
            for (double v : u.values()) acc = std::max(acc, std::abs(v));
            return acc;
    }
    return acc;
}

inline double l1_distance(const GridFunction& u, const GridFunction& v) {
    if (!u.grid().same_layout(v.grid())) {
        throw std::invalid_argument("l1_distance: grid mismatch");
    }
    const double h = u.grid().spacing();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += h * std::abs(u[i] - v[i]);
    return acc;
}

/// Per-cell clamp of a field at the given height.
inline GridFunction truncate_field(const GridFunction& u, double height) {
    return u.map([height](double v) { return truncate(height, v); });
}

}  // namespace nlrothe
