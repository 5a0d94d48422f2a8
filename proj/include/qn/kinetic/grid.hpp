#pragma once

#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "qn/core/errors.hpp"
#include "qn/core/vec.hpp"
#include "qn/equilibrium/equilibrium.hpp"

namespace qn {

struct ParticleEnsemble; // particles.hpp

namespace grid_detail {

inline void gauss_nodes(int q, std::vector<double>& gx, std::vector<double>& gw) {
    if (q == 4) {
        gx = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
              0.8611363115940526};
        gw = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
              0.3478548451374538};
        return;
    }
    gx = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
          -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
          0.7966664774136267, 0.9602898564975363};
    gw = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
          0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
          0.2223810344533745, 0.1012285362903763};
}

template <typename F>
double gauss8(const F& f, double a, double b) {
    std::vector<double> gx, gw;
    gauss_nodes(8, gx, gw);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += gw[i] * f(mid + half * gx[i]);
    return acc * half;
}

} // namespace grid_detail

// Uniform node-centered Cartesian grid holding the deposited density, the
// fluctuation potential Psi and its gradient. Nodes run from lo to hi with
// spacing h = (hi-lo)/(n-1) per axis.
class FieldGrid {
public:
    int dim = 1;
    std::array<double, 3> lo{}, hi{}, h{};
    std::array<int, 3> n{1, 1, 1};
    std::vector<double> rho;                 // deposited density
    std::vector<double> ne;                  // background n_e sampled per node
    std::vector<double> psi;                 // fluctuation potential
    std::array<std::vector<double>, 3> gpsi; // centered-difference gradient

    FieldGrid() = default;
    FieldGrid(int dim_, std::array<double, 3> lo_, std::array<double, 3> hi_,
              std::array<int, 3> n_)
        : dim(dim_), lo(lo_), hi(hi_), n(n_) {
        std::size_t total = 1;
        for (int d = 0; d < dim; ++d) {
            if (n[d] < 2) throw config_error("FieldGrid: need at least 2 nodes per axis");
            if (!(hi[d] > lo[d])) throw config_error("FieldGrid: empty box");
            h[d] = (hi[d] - lo[d]) / (n[d] - 1);
            total *= std::size_t(n[d]);
        }
        for (int d = dim; d < 3; ++d) n[d] = 1;
        rho.assign(total, 0.0);
        ne.assign(total, 0.0);
        psi.assign(total, 0.0);
        for (int d = 0; d < dim; ++d) gpsi[d].assign(total, 0.0);
    }

    std::size_t size() const { return rho.size(); }

    std::size_t index(int i, int j = 0, int k = 0) const {
        return (std::size_t(k) * n[1] + j) * n[0] + i;
    }

    Vec node(int i, int j = 0, int k = 0) const {
        Vec x = Vec::zero(dim);
        x[0] = lo[0] + i * h[0];
        if (dim > 1) x[1] = lo[1] + j * h[1];
        if (dim > 2) x[2] = lo[2] + k * h[2];
        return x;
    }

    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= h[d];
        return v;
    }

    // Sample the background density per node as the cloud-in-cell window
    // average (1/h^N) int n_e(y) prod(1 - |y_d - x_d|/h_d) dy, which is the
    // expected value of the CIC deposit of particles drawn from n_e. In 1D
    // the window is clipped to the support interval, so the mollified edge
    // matches the deposit's to quadrature accuracy.
    void sample_background(const Equilibrium& eq) {
        if (dim == 1) {
            double lo_s, hi_s;
            if (eq.domain.kind == DomainKind::interval) {
                lo_s = eq.domain.a_minus;
                hi_s = eq.domain.a_plus;
            } else {
                lo_s = -eq.domain.R;
                hi_s = eq.domain.R;
            }
            for (int i = 0; i < n[0]; ++i) {
                const double xc = lo[0] + i * h[0];
                double acc = 0.0;
                for (int side = -1; side <= 1; side += 2) {
                    const double wa = std::max(side < 0 ? xc - h[0] : xc, lo_s);
                    const double wb = std::min(side < 0 ? xc : xc + h[0], hi_s);
                    if (wb <= wa) continue;
                    acc += grid_detail::gauss8(
                        [&](double y) {
                            return eq.n_e(Vec(y)) * (1.0 - std::abs(y - xc) / h[0]);
                        },
                        wa, wb);
                }
                ne[i] = acc / h[0];
            }
            return;
        }

        // tensor Gauss per axis half-window; boundary cells keep a small
        // quadrature error where the support edge crosses the window
        const int q = (dim == 2) ? 8 : 4;
        std::vector<double> gx, gw;
        grid_detail::gauss_nodes(q, gx, gw);
        std::vector<double> pts, wts; // abscissae u in (-1,1), weights (gw/2)(1-|u|)
        for (int side = -1; side <= 1; side += 2)
            for (int a = 0; a < q; ++a) {
                const double u = side * 0.5 * (gx[a] + 1.0);
                pts.push_back(u);
                wts.push_back(0.5 * gw[a] * (1.0 - std::abs(u)));
            }
        for (int k = 0; k < n[2]; ++k)
            for (int j = 0; j < n[1]; ++j)
                for (int i = 0; i < n[0]; ++i) {
                    const Vec c = node(i, j, k);
                    double acc = 0.0;
                    const std::size_t npts = pts.size();
                    if (dim == 2) {
                        for (std::size_t a = 0; a < npts; ++a)
                            for (std::size_t b = 0; b < npts; ++b) {
                                Vec x = c;
                                x[0] += h[0] * pts[a];
                                x[1] += h[1] * pts[b];
                                acc += wts[a] * wts[b] * eq.n_e(x);
                            }
                    } else {
                        for (std::size_t a = 0; a < npts; ++a)
                            for (std::size_t b = 0; b < npts; ++b)
                                for (std::size_t c2 = 0; c2 < npts; ++c2) {
                                    Vec x = c;
                                    x[0] += h[0] * pts[a];
                                    x[1] += h[1] * pts[b];
                                    x[2] += h[2] * pts[c2];
                                    acc += wts[a] * wts[b] * wts[c2] * eq.n_e(x);
                                }
                    }
                    ne[index(i, j, k)] = acc;
                }
    }

    // total of an array times the cell volume (trapezoid-free node sum; the
    // deposit is constructed to conserve charge under exactly this sum)
    double integral(const std::vector<double>& field) const {
        double acc = 0.0;
        for (double v : field) acc += v;
        return acc * cell_volume();
    }
};

// Cloud-in-cell weights for one coordinate: node il gets (1-f), il+1 gets f.
struct CicStencil {
    int i0[3];
    double f[3];
};

inline CicStencil cic_stencil(const FieldGrid& g, const double* pos) {
    CicStencil s{};
    for (int d = 0; d < g.dim; ++d) {
        const double u = (pos[d] - g.lo[d]) / g.h[d];
        int i0 = int(std::floor(u));
        if (i0 < 0 || i0 >= g.n[d] - 1) {
            if (u == double(g.n[d] - 1)) { // particle exactly on the last node
                i0 = g.n[d] - 2;
            } else {
                throw precondition_error("particle outside the field box");
            }
        }
        s.i0[d] = i0;
        s.f[d] = u - i0;
    }
    return s;
}

// Multilinear gather of grad(psi) at position pos.
inline Vec gather_gradient(const FieldGrid& g, const double* pos) {
    const CicStencil s = cic_stencil(g, pos);
    Vec out = Vec::zero(g.dim);
    const int jmax = g.dim > 1 ? 1 : 0, kmax = g.dim > 2 ? 1 : 0;
    for (int k = 0; k <= kmax; ++k)
        for (int j = 0; j <= jmax; ++j)
            for (int i = 0; i <= 1; ++i) {
                double w = (i ? s.f[0] : 1.0 - s.f[0]);
                if (g.dim > 1) w *= (j ? s.f[1] : 1.0 - s.f[1]);
                if (g.dim > 2) w *= (k ? s.f[2] : 1.0 - s.f[2]);
                const std::size_t idx = g.index(s.i0[0] + i, s.i0[1] + j, s.i0[2] + k);
                for (int d = 0; d < g.dim; ++d) out[d] += w * g.gpsi[d][idx];
            }
    return out;
}

} // namespace qn
