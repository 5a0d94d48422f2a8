#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qn/core/rng.hpp"
#include "qn/fluid/limit_field.hpp"

using namespace qn;

TEST_CASE("rigid rotation: exact friction-Euler solution") {
    const double R = 1.0;
    auto f = LimitField::rigid_rotation_ball(1.0, 0.0, R);

    // V.x = 0 everywhere (rotation orthogonality)
    RngStream rng(5, 0, 0);
    for (int i = 0; i < 100; ++i) {
        const Vec x(2.0 * (rng.uniform() - 0.5), 2.0 * (rng.uniform() - 0.5));
        CHECK(std::abs(dot(f.velocity(0.3, x), x)) < 1e-14);
    }

    // steady for gamma = 0: residual 0 analytically
    std::vector<std::pair<double, Vec>> probes;
    for (int i = 0; i < 50; ++i) {
        const double ang = 2.0 * M_PI * i / 50.0;
        probes.push_back({0.1 * i, Vec(0.7 * std::cos(ang), 0.7 * std::sin(ang))});
    }
    CHECK(limit_residual(f, 0.0, probes).max_residual < 1e-14);

    // friction: |V| scaled by e^{-1} at t = 1
    auto g = LimitField::rigid_rotation_ball(1.0, 1.0, R);
    const Vec x(0.5, 0.2);
    CHECK(norm(g.velocity(1.0, x)) ==
          Catch::Approx(std::exp(-1.0) * norm(g.velocity(0.0, x))).epsilon(1e-13));
    CHECK(limit_residual(g, 1.0, probes).max_residual < 1e-13);

    // wrong friction coefficient: residual = |gamma' - gamma| |V|
    const double wrong = limit_residual(g, 1.5, probes).max_residual;
    double expect = 0.0;
    for (auto& [t, x2] : probes) expect = std::max(expect, 0.5 * norm(g.velocity(t, x2)));
    CHECK(wrong == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero field and zero pressure give zero residual") {
    auto z = LimitField::zero_field(1);
    std::vector<std::pair<double, Vec>> probes{{0.0, Vec(0.3)}, {1.0, Vec(-2.0)}};
    CHECK(limit_residual(z, 0.7, probes).max_residual == 0.0);
    CHECK(norm(z.velocity(0.5, Vec(1.0))) == 0.0);
}

TEST_CASE("elliptic rotation: no-flux and exact solution") {
    Ellipsoid e(2.0, 1.0);
    auto f = LimitField::elliptic_rotation(e, 0.8, 0.5);

    // a1 = a2 reduces to the rigid rotation
    auto fr = LimitField::elliptic_rotation(Ellipsoid(1.3, 1.3), 0.8, 0.5);
    auto fb = LimitField::rigid_rotation_ball(0.8, 0.5, 1.3);
    const Vec y(0.4, -0.2);
    CHECK(norm(fr.velocity(0.7, y) - fb.velocity(0.7, y)) < 1e-15);

    // flux through the boundary normal vanishes to round-off
    for (int i = 0; i < 1000; ++i) {
        const double ang = 2.0 * M_PI * (i + 0.21) / 1000.0;
        const Vec xb(e.a[0] * std::cos(ang), e.a[1] * std::sin(ang));
        Vec nu = e.normal_direction(xb);
        nu *= 1.0 / norm(nu);
        CHECK(std::abs(dot(f.velocity(0.4, xb), nu)) < 1e-14);
    }

    // residual of the friction-Euler system: analytic < 1e-6 (exactly ~0)
    std::vector<std::pair<double, Vec>> probes;
    RngStream rng(17, 0, 0);
    for (int i = 0; i < 200; ++i) {
        const double ang = 2.0 * M_PI * rng.uniform();
        const double rad = rng.uniform();
        probes.push_back({2.0 * rng.uniform(),
                          Vec(rad * e.a[0] * std::cos(ang), rad * e.a[1] * std::sin(ang))});
    }
    CHECK(limit_residual(f, 0.5, probes).max_residual < 1e-6);

    // FD probing converges at O(h^2)
    const double r1 = limit_residual(f, 0.5, probes, false, 1e-2).max_residual;
    const double r2 = limit_residual(f, 0.5, probes, false, 5e-3).max_residual;
    CHECK(r2 < 0.35 * r1 + 1e-12);
    CHECK(r1 < 1e-2);

    // probes outside the domain are skipped and counted
    std::vector<std::pair<double, Vec>> out{{0.0, Vec(5.0, 5.0)}};
    CHECK(limit_residual(f, 0.5, out).skipped == 1);
}

TEST_CASE("divergence-free extension: support and equality conditions") {
    const double R = 1.0;
    auto base = LimitField::rigid_rotation_ball(1.0, 0.0, R);
    auto ext = extend_divfree(base);

    // inside the domain (and up to 3R/2): exactly V
    for (double r : {0.2, 0.8, 1.0, 1.4}) {
        const Vec x(r * 0.6, -r * 0.8);
        CHECK(norm(ext.velocity(0.0, x) - base.velocity(0.0, x)) == 0.0);
    }
    // outside B(0, 2R): exactly zero
    for (double r : {2.0, 2.5, 10.0}) {
        const Vec x(r, 0.1);
        CHECK(norm(ext.velocity(0.0, x)) == 0.0);
    }

    // discrete divergence < 1e-8 max|V| on a fine-stencil sample grid
    double maxv = 0.0, maxdiv = 0.0;
    const double h = 1e-6;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            const Vec x(-2.4 + 4.8 * i / 40.0, -2.4 + 4.8 * j / 40.0);
            maxv = std::max(maxv, norm(ext.velocity(0.0, x)));
            Vec xp = x, xm = x, yp = x, ym = x;
            xp[0] += h; xm[0] -= h; yp[1] += h; ym[1] -= h;
            const double div =
                (ext.velocity(0.0, xp)[0] - ext.velocity(0.0, xm)[0]) / (2.0 * h) +
                (ext.velocity(0.0, yp)[1] - ext.velocity(0.0, ym)[1]) / (2.0 * h);
            maxdiv = std::max(maxdiv, std::abs(div));
        }
    }
    CHECK(maxdiv < 1e-8 * maxv);
}
