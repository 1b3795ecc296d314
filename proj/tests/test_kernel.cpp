#include <cmath>

#include "doctest.h"
#include "nlrothe/kernel.hpp"
#include "nlrothe/operator.hpp"
#include "support/fixtures.hpp"
#include "support/quad_oracle.hpp"

using namespace nlrothe;

TEST_CASE("cell_pair_weight closed form vs adjacent-cell value") {
    // unit cells sharing an endpoint, alpha = 1/2: 8 - 4 sqrt(2)
    const double expected = 8.0 - 4.0 * std::sqrt(2.0);
    CHECK(cell_pair_weight(1.0, 1, 0.5) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(cell_pair_weight(1.0, 1, 0.5) == doctest::Approx(2.3431).epsilon(1e-4));
}

TEST_CASE("cell_pair_weight matches the quadrature oracle") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (double h : {1.0, 0.125}) {
            for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
                const double lib = cell_pair_weight(h, d, alpha);
                const double oracle = quad::pair_weight_oracle(0.0, h, d * h, (d + 1) * h, alpha);
                CHECK(lib == doctest::Approx(oracle).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("cell_pair_weight far-field asymptotics and positivity") {
    const double alpha = 0.5;
    const double h = 1.0;
    // midpoint limit: w ~ h^2 (d h)^{-(1+alpha)}, approached from above
    double prev_ratio = 2.0;
    for (std::size_t d : {std::size_t{8}, std::size_t{64}, std::size_t{512}}) {
        const double w = cell_pair_weight(h, d, alpha);
        CHECK(w > 0.0);
        const double ratio = w / (h * h * std::pow(d * h, -(1.0 + alpha)));
        CHECK(ratio >= 1.0);
        CHECK(ratio <= prev_ratio + 1e-12);
        CHECK(ratio == doctest::Approx(1.0).epsilon(d >= 512 ? 1e-5 : 1e-2));
        prev_ratio = ratio;
    }
    CHECK_THROWS_AS(cell_pair_weight(1.0, 1, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(cell_pair_weight(1.0, 0, 0.5), std::invalid_argument);
}

TEST_CASE("tail_weight closed form, symmetry, boundary blow-up") {
    const Domain dom(0.0, 1.0);
    CHECK(tail_weight(dom, 0.5, 0.8) ==
          doctest::Approx(2.0 * std::pow(2.0, 0.8) / 0.8).epsilon(1e-14));
    CHECK(tail_weight(dom, 0.5, 0.8) == doctest::Approx(4.3527).epsilon(1e-4));

    for (double x : {0.1, 0.25, 0.42}) {
        CHECK(tail_weight(dom, x, 0.6) == doctest::Approx(tail_weight(dom, 1.0 - x, 0.6)));
    }
    CHECK(tail_weight(dom, 1e-4, 0.6) > tail_weight(dom, 1e-3, 0.6));
    CHECK(tail_weight(dom, 1e-3, 0.6) > tail_weight(dom, 1e-2, 0.6));
    CHECK_THROWS_AS(tail_weight(dom, 0.0, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(tail_weight(dom, 1.5, 0.6), std::invalid_argument);
}

TEST_CASE("assembled weights: symmetry, zero diagonal, distance monotonicity") {
    auto grid = fix::unit_grid(16);
    const auto cfg = fix::config(0.4, 2.0);
    const KernelWeights kw = assemble(grid, cfg);
    const std::size_t m = kw.size();
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(kw.w_at(i, i) == 0.0);
        CHECK(kw.tau[i] > 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            CHECK(kw.w_at(i, j) == kw.w_at(j, i));
            if (j != i) CHECK(kw.w_at(i, j) > 0.0);
        }
        // decreasing in |i - j|
        for (std::size_t j = i + 1; j + 1 < m; ++j) {
            CHECK(kw.w_at(i, j) > kw.w_at(i, j + 1));
        }
    }
}

TEST_CASE("partition-of-space identity: row sum + tau equals the full line integral") {
    for (double alpha_pair : {0.3, 0.8}) {
        auto grid = fix::unit_grid(32);
        SolverConfig cfg = fix::config(alpha_pair / 2.0, 2.0);
        const KernelWeights kw = assemble(grid, cfg);
        const double expected = cell_total_weight(grid->spacing(), cfg.alpha());
        for (std::size_t i = 0; i < kw.size(); ++i) {
            double row = kw.tau[i];
            for (std::size_t j = 0; j < kw.size(); ++j) row += kw.w_at(i, j);
            CHECK(row == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("tau matches truncated quadrature plus analytic far field") {
    auto grid = fix::unit_grid(8);
    SolverConfig cfg = fix::config(0.4, 2.0);  // alpha = 0.8
    const KernelWeights kw = assemble(grid, cfg);
    const double radius = 1e6;
    for (std::size_t i : {std::size_t{0}, std::size_t{3}, std::size_t{7}}) {
        const double near = quad::tail_oracle_truncated(0.0, 1.0, grid->cell_left(i),
                                                        grid->cell_right(i), 0.8, radius);
        const double far = quad::tail_oracle_remainder(0.0, 1.0, grid->cell_left(i),
                                                       grid->cell_right(i), 0.8, radius);
        CHECK(kw.tau[i] == doctest::Approx(near + far).epsilon(1e-9));
    }
}

TEST_CASE("kappa modulation: identity, homogeneity, ellipticity envelope") {
    auto grid = fix::unit_grid(12);
    const auto cfg = fix::config(0.3, 2.0);
    const KernelWeights pure = assemble(grid, cfg);

    AssembleOptions ident;
    ident.kappa = [](double, double) { return 1.0; };
    ident.lambda = 2.0;
    const KernelWeights same = assemble(grid, cfg, ident);
    for (std::size_t i = 0; i < pure.size(); ++i) {
        CHECK(same.tau[i] == doctest::Approx(pure.tau[i]).epsilon(1e-15));
        for (std::size_t j = 0; j < pure.size(); ++j) {
            CHECK(same.w_at(i, j) == doctest::Approx(pure.w_at(i, j)).epsilon(1e-15));
        }
    }

    AssembleOptions scaled;
    scaled.kappa = [](double, double) { return 1.5; };
    scaled.lambda = 2.0;
    const KernelWeights c = assemble(grid, cfg, scaled);
    for (std::size_t i = 0; i < pure.size(); ++i) {
        for (std::size_t j = 0; j < pure.size(); ++j) {
            CHECK(c.w_at(i, j) == doctest::Approx(1.5 * pure.w_at(i, j)));
        }
    }

    AssembleOptions cosine;
    cosine.kappa = [](double x, double y) { return 1.0 + 0.4 * std::cos(3.0 * (x + y)); };
    cosine.lambda = 2.0;
    const KernelWeights kmod = assemble(grid, cfg, cosine);
    for (std::size_t i = 0; i < pure.size(); ++i) {
        for (std::size_t j = 0; j < pure.size(); ++j) {
            if (i == j) continue;
            CHECK(kmod.w_at(i, j) >= pure.w_at(i, j) / 2.0 - 1e-15);
            CHECK(kmod.w_at(i, j) <= pure.w_at(i, j) * 2.0 + 1e-15);
        }
    }

    AssembleOptions lopsided;
    lopsided.kappa = [](double x, double y) { return 1.0 + 0.1 * (x - y); };
    lopsided.lambda = 2.0;
    CHECK_THROWS_AS(assemble(grid, cfg, lopsided), std::invalid_argument);

    AssembleOptions out_of_range;
    out_of_range.kappa = [](double, double) { return 5.0; };
    out_of_range.lambda = 2.0;
    CHECK_THROWS_AS(assemble(grid, cfg, out_of_range), std::invalid_argument);
}

TEST_CASE("assembly rejects divergent exponents") {
    auto grid = fix::unit_grid(8);
    SolverConfig cfg = fix::config(0.6, 2.0);  // p*s = 1.2
    cfg.strict_exponent_check = false;
    CHECK_THROWS_AS(assemble(grid, cfg), std::invalid_argument);
}

TEST_CASE("banded mode keeps the row identity and degenerates to dense") {
    auto grid = fix::unit_grid(24);
    const auto cfg = fix::config(0.4, 2.0);
    const KernelWeights dense = assemble(grid, cfg);

    AssembleOptions full_band;
    full_band.band = 24;
    const KernelWeights same = assemble(grid, cfg, full_band);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        CHECK(same.tau[i] == doctest::Approx(dense.tau[i]).epsilon(1e-12));
    }

    AssembleOptions narrow;
    narrow.band = 4;
    const KernelWeights banded = assemble(grid, cfg, narrow);
    const double expected = cell_total_weight(grid->spacing(), cfg.alpha());
    for (std::size_t i = 0; i < banded.size(); ++i) {
        double row = banded.tau[i];
        for (std::size_t j = 0; j < banded.size(); ++j) {
            if (j > i + 4 || i > j + 4) CHECK(banded.w_at(i, j) == 0.0);
            row += banded.w_at(i, j);
        }
        CHECK(row == doctest::Approx(expected).epsilon(1e-12));
        CHECK(banded.tau[i] > dense.tau[i]);
    }
}

TEST_CASE("assembly on skewed domains: exact boundary edges, row identity") {
    // non-dyadic spacing used to push the boundary cell edges one ulp
    // outside the domain and abort the tail integral
    auto grid = make_grid(Domain(-3.5, 2.0), 40);
    SolverConfig cfg = fix::config(0.35, 2.5);
    const KernelWeights kw = assemble(grid, cfg);
    CHECK(grid->cell_left(0) == -3.5);
    CHECK(grid->cell_right(39) == 2.0);
    const double total = cell_total_weight(grid->spacing(), cfg.alpha());
    for (std::size_t i = 0; i < kw.size(); ++i) {
        double row = kw.tau[i];
        for (std::size_t j = 0; j < kw.size(); ++j) row += kw.w_at(i, j);
        CHECK(row == doctest::Approx(total).epsilon(1e-10));
    }

    // a single cell interacts with the exterior only
    auto tiny = make_grid(Domain(0.0, 1.0), 1);
    const KernelWeights kw1 = assemble(tiny, fix::config(0.4, 2.0));
    CHECK(kw1.tau[0] == doctest::Approx(cell_total_weight(1.0, 0.8)));
}

TEST_CASE("energy of a smooth field is consistent under grid refinement") {
    const auto cfg = fix::config(0.4, 2.0);
    auto smooth = [](double x) { return std::sin(3.0 * x) * x * (1.0 - x); };
    std::vector<double> energies;
    for (std::size_t m : {32, 64, 128, 256}) {
        auto grid = fix::unit_grid(m);
        const KernelWeights kw = assemble(grid, cfg);
        energies.push_back(gagliardo_energy(kw, GridFunction::sample(grid, smooth), 2.0));
    }
    // successive differences shrink (Cauchy behavior across three level pairs)
    const double d0 = std::abs(energies[1] - energies[0]);
    const double d1 = std::abs(energies[2] - energies[1]);
    const double d2 = std::abs(energies[3] - energies[2]);
    CHECK(d1 < d0);
    CHECK(d2 < d1);
}

TEST_CASE("poincare ratio: errors, scaling invariance, refinement boundedness") {
    auto grid = fix::unit_grid(64);
    const auto cfg = fix::config(0.4, 2.0);
    const KernelWeights kw = assemble(grid, cfg);

    CHECK_THROWS_AS(poincare_ratio(GridFunction(grid), kw, 2.0), std::invalid_argument);

    TestRng rng(7);
    const GridFunction u = fix::random_field(grid, rng);
    const GridFunction cu = u.map([](double v) { return -4.2 * v; });
    CHECK(poincare_ratio(cu, kw, 2.0) == doctest::Approx(poincare_ratio(u, kw, 2.0)));

    // constant field: closed-form quotient alpha (1 - alpha) / 4, grid free
    const GridFunction one(grid, 1.0);
    CHECK(poincare_ratio(one, kw, 2.0) == doctest::Approx(0.8 * 0.2 / 4.0).epsilon(1e-12));

    // hat function across refinements: the quotient stays bounded
    double lo = 1e300;
    double hi = 0.0;
    for (std::size_t m : {16, 32, 64, 128}) {
        auto g = fix::unit_grid(m);
        const KernelWeights k = assemble(g, cfg);
        const GridFunction hat = GridFunction::sample(
            g, [](double x) { return std::max(0.0, 1.0 - 4.0 * std::abs(x - 0.5)); });
        const double r = poincare_ratio(hat, k, 2.0);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo < 2.0);
    CHECK(hi < 1.0);  // no blow-up at desk scale
}
