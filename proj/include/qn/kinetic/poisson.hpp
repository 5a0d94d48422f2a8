#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "qn/core/gamma.hpp"
#include "qn/core/quadrature.hpp"
#include "qn/kinetic/grid.hpp"

namespace qn {

namespace fft_detail {
// FFTW planning is not thread-safe; executions on distinct plans are.
inline std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace fft_detail

// Free-space Poisson solver on the grid by Hockney's doubled-domain kernel
// convolution: Psi = -Gamma * g with g = (n_e - rho)/sqrt(eps), evaluated as
// a discrete convolution with the kernel K = -Gamma sampled at node
// displacements; the singular cell takes the cell-averaged value of -Gamma.
// grad(Psi) is formed by centered differences so that the gather/deposit
// pair is adjoint and an isolated particle exerts no self-force.
class FreeSpacePoisson {
public:
    explicit FreeSpacePoisson(const FieldGrid& grid) : dim_(grid.dim) {
        std::size_t total = 1;
        for (int d = 0; d < dim_; ++d) {
            m_[d] = 2 * grid.n[d];
            h_[d] = grid.h[d];
            total *= std::size_t(m_[d]);
        }
        for (int d = dim_; d < 3; ++d) m_[d] = 1;
        real_.assign(total, 0.0);
        nc_ = total / m_[dim_ - 1] * (m_[dim_ - 1] / 2 + 1);
        spec_.assign(nc_, std::complex<double>(0.0, 0.0));
        khat_.assign(nc_, std::complex<double>(0.0, 0.0));

        {
            std::lock_guard<std::mutex> lock(fft_detail::plan_mutex());
            int dims[3] = {m_[0], m_[1], m_[2]};
            fwd_ = fftw_plan_dft_r2c(dim_, dims, real_.data(),
                                     reinterpret_cast<fftw_complex*>(spec_.data()),
                                     FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_c2r(dim_, dims, reinterpret_cast<fftw_complex*>(spec_.data()),
                                     real_.data(), FFTW_ESTIMATE);
        }

        build_kernel(grid);
    }

    ~FreeSpacePoisson() {
        std::lock_guard<std::mutex> lock(fft_detail::plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    FreeSpacePoisson(const FreeSpacePoisson&) = delete;
    FreeSpacePoisson& operator=(const FreeSpacePoisson&) = delete;

    // rho and ne must be current; fills psi and gpsi.
    void solve(FieldGrid& grid, double eps) {
        const double sqeps = std::sqrt(eps);
        std::fill(real_.begin(), real_.end(), 0.0);
        for (int k = 0; k < grid.n[2]; ++k)
            for (int j = 0; j < grid.n[1]; ++j)
                for (int i = 0; i < grid.n[0]; ++i) {
                    const std::size_t src = grid.index(i, j, k);
                    real_[dindex(i, j, k)] = (grid.ne[src] - grid.rho[src]) / sqeps;
                }
        fftw_execute(fwd_);
        const double scale = grid.cell_volume() / total_real();
        for (std::size_t i = 0; i < nc_; ++i) spec_[i] *= khat_[i] * scale;
        fftw_execute(bwd_);
        for (int k = 0; k < grid.n[2]; ++k)
            for (int j = 0; j < grid.n[1]; ++j)
                for (int i = 0; i < grid.n[0]; ++i)
                    grid.psi[grid.index(i, j, k)] = real_[dindex(i, j, k)];

        gradient(grid);
    }

private:
    int dim_;
    int m_[3] = {1, 1, 1};
    double h_[3] = {0.0, 0.0, 0.0};
    std::size_t nc_ = 0;
    std::vector<double> real_;
    std::vector<std::complex<double>> spec_, khat_;
    fftw_plan fwd_{}, bwd_{};

    double total_real() const {
        double t = 1.0;
        for (int d = 0; d < dim_; ++d) t *= m_[d];
        return t;
    }

    std::size_t dindex(int i, int j, int k) const {
        return (std::size_t(k) * m_[1] + j) * m_[0] + i;
    }

    // cell-averaged -Gamma over one grid cell (kernel is even: integrate the
    // positive-octant corner box and average)
    double singular_cell_value() const {
        if (dim_ == 1) return h_[0] / 8.0; // avg of |x|/2 over [-h/2, h/2]
        if (dim_ == 2) {
            // closed form: int_0^a int_0^b ln(x^2+y^2) dx dy
            //   = ab ln(a^2+b^2) - 3ab + a^2 atan(b/a) + b^2 atan(a/b)
            const double a = 0.5 * h_[0], b = 0.5 * h_[1];
            const double I = a * b * std::log(a * a + b * b) - 3.0 * a * b +
                             a * a * std::atan(b / a) + b * b * std::atan(a / b);
            return 0.5 * I / (a * b) / (2.0 * M_PI); // (1/2) ln(r^2) -> ln r
        }
        // 3D: composite midpoint on the corner box; r^{-1} is integrable and
        // the value is only needed to ~1e-4 relative
        const int nsub = 64;
        double acc = 0.0;
        for (int i = 0; i < nsub; ++i)
            for (int j = 0; j < nsub; ++j)
                for (int k = 0; k < nsub; ++k) {
                    const double x = (i + 0.5) * (0.5 * h_[0]) / nsub;
                    const double y = (j + 0.5) * (0.5 * h_[1]) / nsub;
                    const double z = (k + 0.5) * (0.5 * h_[2]) / nsub;
                    acc += -1.0 / (4.0 * M_PI * std::sqrt(x * x + y * y + z * z));
                }
        return acc / double(nsub) / double(nsub) / double(nsub);
    }

    void build_kernel(const FieldGrid&) {
        const double center = singular_cell_value();
        for (int k = 0; k < m_[2]; ++k)
            for (int j = 0; j < m_[1]; ++j)
                for (int i = 0; i < m_[0]; ++i) {
                    const int di = (i <= m_[0] / 2) ? i : i - m_[0];
                    const int dj = (dim_ > 1 && j > m_[1] / 2) ? j - m_[1] : j;
                    const int dk = (dim_ > 2 && k > m_[2] / 2) ? k - m_[2] : k;
                    const double rx = di * h_[0];
                    const double ry = dim_ > 1 ? dj * h_[1] : 0.0;
                    const double rz = dim_ > 2 ? dk * h_[2] : 0.0;
                    const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
                    real_[dindex(i, j, k)] = (r == 0.0) ? center : -gamma_radial(r, dim_);
                }
        fftw_execute(fwd_);
        khat_ = spec_;
    }

    void gradient(FieldGrid& grid) const {
        for (int d = 0; d < grid.dim; ++d) {
            const int stride = (d == 0) ? 1 : (d == 1 ? grid.n[0] : grid.n[0] * grid.n[1]);
            const double inv2h = 1.0 / (2.0 * grid.h[d]);
            for (int k = 0; k < grid.n[2]; ++k)
                for (int j = 0; j < grid.n[1]; ++j)
                    for (int i = 0; i < grid.n[0]; ++i) {
                        const std::size_t c = grid.index(i, j, k);
                        const int idx_d = (d == 0) ? i : (d == 1 ? j : k);
                        double val;
                        if (idx_d == 0) {
                            val = (grid.psi[c + stride] - grid.psi[c]) / grid.h[d];
                        } else if (idx_d == grid.n[d] - 1) {
                            val = (grid.psi[c] - grid.psi[c - stride]) / grid.h[d];
                        } else {
                            val = (grid.psi[c + stride] - grid.psi[c - stride]) * inv2h;
                        }
                        grid.gpsi[d][c] = val;
                    }
        }
    }
};

} // namespace qn
