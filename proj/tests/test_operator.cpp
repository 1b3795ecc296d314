#include <cmath>

#include "doctest.h"
#include "nlrothe/operator.hpp"
#include "support/fixtures.hpp"

using namespace nlrothe;

TEST_CASE("apply on trivial fields") {
    auto grid = fix::unit_grid(8);
    const auto cfg = fix::config(0.4, 2.0);
    const NonlocalOperator op = fix::make_op(grid, cfg);

    const GridFunction zero(grid);
    const GridFunction image_zero = apply(op, zero);
    for (double v : image_zero.values()) CHECK(v == 0.0);

    // constant field, p = 2: interior differences vanish, only the tail acts
    const double c = 1.7;
    const GridFunction constant(grid, c);
    const GridFunction image = apply(op, constant);
    const double h = grid->spacing();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        CHECK(image[i] == doctest::Approx(op.weights->tau[i] / h * c).epsilon(1e-13));
    }
}

TEST_CASE("apply matches a brute-force triple loop on m = 3, p = 3") {
    auto grid = fix::unit_grid(3);
    const auto cfg = fix::config(0.3, 3.0);
    const NonlocalOperator op = fix::make_op(grid, cfg);
    TestRng rng(41);
    const GridFunction u = fix::random_field(grid, rng, -2.0, 2.0);
    const GridFunction image = apply(op, u);

    const auto& kw = *op.weights;
    const double h = grid->spacing();
    auto sgn_pow = [](double t, double p) {
        return t == 0.0 ? 0.0 : std::pow(std::abs(t), p - 2.0) * t;
    };
    for (std::size_t i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            if (j != i) acc += kw.w_at(i, j) * sgn_pow(u[i] - u[j], 3.0);
        }
        acc += kw.tau[i] * sgn_pow(u[i], 3.0);
        CHECK(image[i] == doctest::Approx(acc / h).epsilon(1e-14));
    }
}

TEST_CASE("apply rejects grid mismatch") {
    const NonlocalOperator op = fix::make_op(fix::unit_grid(8), fix::config(0.4, 2.0));
    CHECK_THROWS_AS(apply(op, GridFunction(fix::unit_grid(9))), std::invalid_argument);
}

TEST_CASE("gagliardo energy: zero, homogeneity, hand expansion") {
    auto grid = fix::unit_grid(3);
    const auto cfg = fix::config(0.3, 2.0);
    const auto kw = fix::weights(grid, cfg);

    CHECK(gagliardo_energy(*kw, GridFunction(grid), 2.0) == 0.0);

    TestRng rng(43);
    const GridFunction u = fix::random_field(grid, rng);
    for (double p : {1.5, 2.0, 3.0}) {
        const GridFunction u2 = u.map([](double v) { return 2.0 * v; });
        CHECK(gagliardo_energy(*kw, u2, p) ==
              doctest::Approx(std::pow(2.0, p) * gagliardo_energy(*kw, u, p)));
    }

    // u = (1, 0, 0), p = 2 by hand: the interaction set counts interior
    // pairs in both orders, so (0,1),(1,0),(0,2),(2,0) plus the two
    // exterior sides of cell 0.
    const GridFunction e0(grid, {1.0, 0.0, 0.0});
    const double direct = 2.0 * kw->w_at(0, 1) + 2.0 * kw->w_at(0, 2) + 2.0 * kw->tau[0];
    CHECK(gagliardo_energy(*kw, e0, 2.0) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("pairing: bilinearity in v, positivity, two-route consistency") {
    auto grid = fix::unit_grid(4);
    for (double p : {1.5, 2.0, 3.0}) {
        SolverConfig cfg = fix::config(0.3, p);
        const NonlocalOperator op = fix::make_op(grid, cfg);
        TestRng rng(47);
        const GridFunction u = fix::random_field(grid, rng);
        const GridFunction v = fix::random_field(grid, rng);

        CHECK(pairing(op, u, GridFunction(grid)) == 0.0);
        CHECK(pairing(op, u, u) >= 0.0);
        CHECK(pairing(op, u, u) ==
              doctest::Approx(0.5 * gagliardo_energy(*op.weights, u, p)).epsilon(1e-13));

        // route agreement: pairing equals sum h apply(u) v
        const GridFunction au = apply(op, u);
        double via_apply = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            via_apply += grid->spacing() * au[i] * v[i];
        }
        CHECK(pairing(op, u, v) == doctest::Approx(via_apply).epsilon(1e-12));
    }
}

TEST_CASE("operator monotonicity over random pairs") {
    auto grid = fix::unit_grid(16);
    for (double p : {1.5, 2.0, 3.0}) {
        SolverConfig cfg = fix::config(0.3, p);
        const NonlocalOperator op = fix::make_op(grid, cfg);
        TestRng rng(53);
        const double h = grid->spacing();
        for (int trial = 0; trial < 200; ++trial) {
            const GridFunction u = fix::random_field(grid, rng, -1.5, 1.5);
            const GridFunction v = fix::random_field(grid, rng, -1.5, 1.5);
            const GridFunction au = apply(op, u);
            const GridFunction av = apply(op, v);
            double inner = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                inner += h * (au[i] - av[i]) * (u[i] - v[i]);
            }
            CHECK(inner >= -1e-12);
        }
    }
}

TEST_CASE("p = 2 linearity of apply") {
    auto grid = fix::unit_grid(12);
    const NonlocalOperator op = fix::make_op(grid, fix::config(0.4, 2.0));
    TestRng rng(59);
    const GridFunction u = fix::random_field(grid, rng);
    const GridFunction v = fix::random_field(grid, rng);
    std::vector<double> sum(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) sum[i] = u[i] + v[i];
    const GridFunction uv(grid, sum);
    const GridFunction a = apply(op, uv);
    const GridFunction au = apply(op, u);
    const GridFunction av = apply(op, v);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(a[i] == doctest::Approx(au[i] + av[i]).epsilon(1e-12));
    }
}

TEST_CASE("truncation contracts the energy") {
    auto grid = fix::unit_grid(16);
    const auto kw = fix::weights(grid, fix::config(0.3, 2.0));
    TestRng rng(61);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            const GridFunction u = fix::random_field(grid, rng, -3.0, 3.0);
            for (double k : {0.5, 1.0, 2.0, 10.0}) {
                CHECK(gagliardo_energy(*kw, truncate_field(u, k), p) <=
                      gagliardo_energy(*kw, u, p) + 1e-12);
            }
        }
    }
}

TEST_CASE("operator construction rejects mismatched exponents") {
    auto grid = fix::unit_grid(8);
    const auto cfg = fix::config(0.4, 2.0);
    const auto kw = fix::weights(grid, cfg);
    SolverConfig other = fix::config(0.3, 2.0);
    CHECK_THROWS_AS(NonlocalOperator(kw, other), std::invalid_argument);
}
