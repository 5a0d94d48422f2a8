#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qn/core/ellipsoid.hpp"
#include "qn/core/gamma.hpp"
#include "qn/core/quadrature.hpp"
#include "qn/core/rng.hpp"
#include "qn/core/rootfind.hpp"

using namespace qn;

TEST_CASE("fundamental solution branches") {
    // N=2, |x|=1: -ln(1)/(2pi) = 0
    CHECK(gamma_fs(Vec(1.0, 0.0), 2) == 0.0);
    // N=1, |x|=2: -|x|/2
    CHECK(gamma_fs(Vec(2.0), 1) == -1.0);
    // N=3: 1/(4 pi r) since |B_1| = 4 pi / 3
    const double r = 1.7;
    CHECK(gamma_fs(Vec(r, 0.0, 0.0), 3) == Catch::Approx(1.0 / (4.0 * M_PI * r)).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_fs(Vec(0.0, 0.0), 2), domain_error);
}

TEST_CASE("gamma gradient matches finite differences") {
    // N=1 derivative of -x/2
    CHECK(gamma_gradient(Vec(2.0), 1)[0] == Catch::Approx(-0.5).epsilon(1e-14));
    // frozen values from differentiating the closed forms
    CHECK(gamma_gradient(Vec(1.0, 0.0), 2)[0] ==
          Catch::Approx(-1.0 / (2.0 * M_PI)).epsilon(1e-14));
    CHECK(gamma_gradient(Vec(1.0, 0.0), 2)[1] == 0.0);
    CHECK(gamma_gradient(Vec(1.0, 0.0, 0.0), 3)[0] ==
          Catch::Approx(-1.0 / (4.0 * M_PI)).epsilon(1e-14));

    // FD oracle at generic points, O(h^2) central differences
    for (int dim = 1; dim <= 3; ++dim) {
        Vec x = Vec::zero(dim);
        for (int j = 0; j < dim; ++j) x[j] = 0.4 + 0.3 * j;
        const Vec g = gamma_gradient(x, dim);
        const double h = 1e-6;
        for (int j = 0; j < dim; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const double fd = (gamma_fs(xp, dim) - gamma_fs(xm, dim)) / (2.0 * h);
            CHECK(g[j] == Catch::Approx(fd).margin(1e-8));
        }
    }
}

TEST_CASE("gamma is discretely harmonic away from the origin") {
    // mean value property: 5/7-point Laplacian -> 0 at O(h^2)
    for (int dim = 1; dim <= 3; ++dim) {
        Vec x = Vec::zero(dim);
        x[0] = 1.3;
        if (dim > 1) x[1] = -0.4;
        auto lap = [&](double h) {
            double acc = -2.0 * dim * gamma_fs(x, dim);
            for (int j = 0; j < dim; ++j) {
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                acc += gamma_fs(xp, dim) + gamma_fs(xm, dim);
            }
            return acc / (h * h);
        };
        const double l1 = std::abs(lap(1e-2));
        const double l2 = std::abs(lap(5e-3));
        if (dim == 1) {
            CHECK(l1 < 1e-9); // exactly linear away from 0
        } else {
            CHECK(l2 < 1e-4);
            CHECK(l2 < 0.3 * l1); // ~ factor 4 reduction expected
        }
    }
}

TEST_CASE("sigma_a basics") {
    Ellipsoid e(1.0, 1.0);
    // convention: sigma_a(0) = -infinity sentinel
    const SigmaA s0 = sigma_a(Vec(0.0, 0.0), e);
    CHECK(s0.minus_infinity);
    CHECK(s0.inside());

    // a=(1,1), x=(2,0): 4/(1+s) = 1  =>  s = 3
    const SigmaA s1 = sigma_a(Vec(2.0, 0.0), e);
    CHECK_FALSE(s1.minus_infinity);
    CHECK(s1.value == Catch::Approx(3.0).epsilon(1e-13));

    // boundary point: sigma = 0 within root tolerance
    Ellipsoid e2(2.0, 1.0);
    const SigmaA sb = sigma_a(Vec(2.0, 0.0), e2);
    CHECK(std::abs(sb.value) < 1e-12);
}

TEST_CASE("sigma_a root residual and monotonicity") {
    Ellipsoid e(2.0, 1.0, 0.5);
    RngStream rng(1234, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec x = Vec::zero(3);
        for (int j = 0; j < 3; ++j) x[j] = 4.0 * (rng.uniform() - 0.5);
        if (norm(x) < 1e-12) continue;
        const SigmaA s = sigma_a(x, e);
        REQUIRE_FALSE(s.minus_infinity);
        double res = -1.0;
        for (int j = 0; j < 3; ++j) res += x[j] * x[j] / (e.a[j] * e.a[j] + s.value);
        CHECK(std::abs(res) < 1e-12);
    }

    // t -> sigma_a(t u) strictly increasing in t > 0
    Vec u(0.6, 0.7, 0.38);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.1 * i;
        const SigmaA s = sigma_a(t * u, e);
        REQUIRE_FALSE(s.minus_infinity);
        CHECK(s.value > prev);
        prev = s.value;
    }

    // membership is equivalent to sigma <= 0
    for (int trial = 0; trial < 200; ++trial) {
        Vec x = Vec::zero(3);
        for (int j = 0; j < 3; ++j) x[j] = 3.0 * (rng.uniform() - 0.5);
        if (norm(x) < 1e-12) continue;
        const SigmaA s = sigma_a(x, e);
        CHECK(e.contains(x) == s.inside());
    }
}

TEST_CASE("quadrature engine") {
    // smooth integral with known value
    CHECK(integrate([](double t) { return std::sin(t); }, 0.0, M_PI) ==
          Catch::Approx(2.0).epsilon(1e-13));
    // half line with power tail: int_1^inf s^{-3/2} ds = 2
    CHECK(integrate_half_line([](double s) { return std::pow(s, -1.5); }, 1.0) ==
          Catch::Approx(2.0).epsilon(1e-11));
    // int_0^inf (1+s)^{-5/2} ds = 2/3 split across head+tail
    const double head = integrate([](double s) { return std::pow(1.0 + s, -2.5); }, 0.0, 1.0);
    const double tail = integrate_half_line([](double s) { return std::pow(1.0 + s, -2.5); }, 1.0);
    CHECK(head + tail == Catch::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("rootfind") {
    auto f = [](double x) { return x * x - 2.0; };
    auto df = [](double x) { return 2.0 * x; };
    CHECK(bisect_newton(f, df, 0.0, 2.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    double lo = 0.5, hi = 1.0;
    CHECK(expand_bracket_up(f, lo, hi));
    CHECK(f(lo) * f(hi) <= 0.0);
}

TEST_CASE("philox streams are deterministic and worker-independent") {
    RngStream a(42, 7, 3), b(42, 7, 3);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    // different particles / steps decorrelate
    RngStream c(42, 8, 3), d(42, 7, 4);
    CHECK(RngStream(42, 7, 3).next_u64() != c.next_u64());
    CHECK(RngStream(42, 7, 3).next_u64() != d.next_u64());

    // gaussian moments sanity
    RngStream g(99, 0, 0);
    double s1 = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = g.gaussian();
        s1 += v;
        s2 += v * v;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(s2 / n == Catch::Approx(1.0).epsilon(0.01));
}
