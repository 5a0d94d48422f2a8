#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>

#include "qn/core/errors.hpp"

namespace qn {

// Spatial dimension, restricted to 1, 2 or 3. All dimension-dependent
// formulas dispatch on this at runtime so one binary covers every case.
class SpaceDim {
public:
    explicit constexpr SpaceDim(int n) : n_(n) {
        if (n < 1 || n > 3) throw domain_error("SpaceDim must be 1, 2 or 3");
    }
    constexpr int value() const { return n_; }
    constexpr operator int() const { return n_; }

private:
    int n_;
};

// Small fixed-capacity vector in R^N, N <= 3. Unused components stay zero,
// which keeps dot/norm dimension-agnostic.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 0;

    Vec() = default;
    Vec(double x) : c{x, 0.0, 0.0}, dim(1) {}
    Vec(double x, double y) : c{x, y, 0.0}, dim(2) {}
    Vec(double x, double y, double z) : c{x, y, z}, dim(3) {}
    static Vec zero(int n) {
        Vec v;
        v.dim = n;
        return v;
    }

    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < 3; ++i) c[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
};

inline double dot(const Vec& a, const Vec& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

// Volume of the unit ball in R^N.
inline double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: throw domain_error("unit_ball_volume: dim must be 1, 2 or 3");
    }
}

} // namespace qn
