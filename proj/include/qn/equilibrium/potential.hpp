#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "qn/core/errors.hpp"
#include "qn/core/vec.hpp"

namespace qn {

enum class PotentialClass { isotropic, quadratic, radial, convex1d };

inline const char* to_string(PotentialClass c) {
    switch (c) {
        case PotentialClass::isotropic: return "isotropic";
        case PotentialClass::quadratic: return "quadratic";
        case PotentialClass::radial: return "radial";
        case PotentialClass::convex1d: return "convex1d";
    }
    return "?";
}

// Scalar profile with first and (piecewise) second derivatives. Used both
// as phi(r) for radial potentials and as Phi(x) for 1D convex ones.
struct Profile {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> ddf;
};

// External confining potential Phi_ext. Four constructive classes:
//   isotropic   |x|^2 / (2N)
//   quadratic   (1/2) sum_j x_j^2 / lambda_j^2
//   radial      phi(|x|) with phi' nondecreasing, phi'(0) >= 0
//   convex1d    Phi(x) on R with Phi' nondecreasing
struct Potential {
    PotentialClass cls;
    int dim;
    std::array<double, 3> lambda{1.0, 1.0, 1.0};
    Profile profile; // radial / convex1d only

    static Potential isotropic(int dim) {
        Potential p;
        p.cls = PotentialClass::isotropic;
        p.dim = SpaceDim(dim);
        const double n = dim;
        p.profile = Profile{"harmonic_iso",
                            [n](double r) { return r * r / (2.0 * n); },
                            [n](double r) { return r / n; },
                            [n](double) { return 1.0 / n; }};
        return p;
    }

    static Potential quadratic(std::array<double, 3> lam, int dim) {
        Potential p;
        p.cls = PotentialClass::quadratic;
        p.dim = SpaceDim(dim);
        for (int j = 0; j < dim; ++j)
            if (!(lam[j] > 0.0)) throw domain_error("quadratic potential: lambda_j must be > 0");
        p.lambda = lam;
        return p;
    }

    static Potential radial(Profile prof, int dim) {
        Potential p;
        p.cls = PotentialClass::radial;
        p.dim = SpaceDim(dim);
        if (dim < 2) throw domain_error("radial potential class requires N >= 2");
        p.profile = std::move(prof);
        p.check_radial_profile();
        return p;
    }

    static Potential convex1d(Profile prof) {
        Potential p;
        p.cls = PotentialClass::convex1d;
        p.dim = 1;
        p.profile = std::move(prof);
        p.check_convex_profile();
        return p;
    }

    double inv_lambda2_sum() const {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += 1.0 / (lambda[j] * lambda[j]);
        return s;
    }

    double value(const Vec& x) const {
        switch (cls) {
            case PotentialClass::isotropic: return norm2(x) / (2.0 * dim);
            case PotentialClass::quadratic: {
                double v = 0.0;
                for (int j = 0; j < dim; ++j) v += x[j] * x[j] / (lambda[j] * lambda[j]);
                return 0.5 * v;
            }
            case PotentialClass::radial: return profile.f(norm(x));
            case PotentialClass::convex1d: return profile.f(x[0]);
        }
        return 0.0;
    }

    Vec gradient(const Vec& x) const {
        Vec g = Vec::zero(dim);
        switch (cls) {
            case PotentialClass::isotropic:
                for (int j = 0; j < dim; ++j) g[j] = x[j] / dim;
                break;
            case PotentialClass::quadratic:
                for (int j = 0; j < dim; ++j) g[j] = x[j] / (lambda[j] * lambda[j]);
                break;
            case PotentialClass::radial: {
                const double r = norm(x);
                if (r == 0.0) break;
                const double d = profile.df(r);
                for (int j = 0; j < dim; ++j) g[j] = d * x[j] / r;
                break;
            }
            case PotentialClass::convex1d:
                g[0] = profile.df(x[0]);
                break;
        }
        return g;
    }

    double laplacian(const Vec& x) const {
        switch (cls) {
            case PotentialClass::isotropic: return 1.0;
            case PotentialClass::quadratic: return inv_lambda2_sum();
            case PotentialClass::radial: {
                const double r = norm(x);
                if (r == 0.0) return profile.ddf(0.0) * dim; // smooth-origin limit
                return profile.ddf(r) + (dim - 1) * profile.df(r) / r;
            }
            case PotentialClass::convex1d: return profile.ddf(x[0]);
        }
        return 0.0;
    }

private:
    void check_radial_profile() const {
        if (profile.df(1e-12) < -1e-12)
            throw domain_error("radial potential: phi'(0) must be >= 0");
        double prev = profile.df(0.0);
        for (int i = 1; i <= 64; ++i) {
            const double r = 0.25 * i;
            const double d = profile.df(r);
            if (d < prev - 1e-12 * (1.0 + std::abs(prev)))
                throw domain_error("radial potential: phi' must be nondecreasing");
            prev = d;
        }
    }
    void check_convex_profile() const {
        double prev = profile.df(-16.0);
        for (int i = 1; i <= 128; ++i) {
            const double x = -16.0 + 0.25 * i;
            const double d = profile.df(x);
            if (d < prev - 1e-12 * (1.0 + std::abs(prev)))
                throw domain_error("convex1d potential: Phi' must be nondecreasing");
            prev = d;
        }
    }
};

// Named profiles usable from config files and tests.
inline Profile make_profile(const std::string& name, double coeff, int dim) {
    if (name == "harmonic") {
        // r^2/(2N) for radial classes, x^2/2 in 1D, times coeff
        const double n = (dim >= 2) ? double(dim) : 1.0;
        return Profile{name, [coeff, n](double r) { return coeff * r * r / (2.0 * n); },
                       [coeff, n](double r) { return coeff * r / n; },
                       [coeff, n](double) { return coeff / n; }};
    }
    if (name == "linear") {
        return Profile{name, [coeff](double r) { return coeff * r; },
                       [coeff](double) { return coeff; }, [](double) { return 0.0; }};
    }
    if (name == "quartic") {
        return Profile{name, [coeff](double r) { return coeff * r * r * r * r / 4.0; },
                       [coeff](double r) { return coeff * r * r * r; },
                       [coeff](double r) { return 3.0 * coeff * r * r; }};
    }
    if (name == "hquartic") {
        // uniformly convex anharmonic well x^2/2 + x^4/4
        return Profile{name,
                       [coeff](double x) { return coeff * (0.5 * x * x + 0.25 * x * x * x * x); },
                       [coeff](double x) { return coeff * (x + x * x * x); },
                       [coeff](double x) { return coeff * (1.0 + 3.0 * x * x); }};
    }
    if (name == "flat_bottom") {
        // zero force on (-1,1), harmonic outside; Phi'' vanishes on an
        // interior interval (the disconnected-support regime)
        auto excess = [](double x) { return x > 1.0 ? x - 1.0 : (x < -1.0 ? x + 1.0 : 0.0); };
        return Profile{name,
                       [coeff, excess](double x) { const double e = excess(x); return 0.5 * coeff * e * e; },
                       [coeff, excess](double x) { return coeff * excess(x); },
                       [coeff](double x) { return std::abs(x) > 1.0 ? coeff : 0.0; }};
    }
    throw config_error("unknown potential profile '" + name + "'");
}

} // namespace qn
