#pragma once

#include <cmath>

#include "qn/core/vec.hpp"

namespace qn {

// Fundamental solution of -Laplace in R^N:
//   N=3:  1 / (N(N-2)|B_1| r^{N-2})  =  1/(4 pi r)
//   N=2:  -ln(r) / (2 pi)
//   N=1:  -r / 2
inline double gamma_radial(double r, int dim) {
    if (r <= 0.0) throw domain_error("gamma: singular evaluation at x = 0");
    switch (dim) {
        case 1: return -0.5 * r;
        case 2: return -std::log(r) / (2.0 * M_PI);
        case 3: return 1.0 / (4.0 * M_PI * r);
        default: throw domain_error("gamma: dim must be 1, 2 or 3");
    }
}

inline double gamma_fs(const Vec& x, int dim) { return gamma_radial(norm(x), dim); }

// d/dr of gamma_radial; equals -1/(N |B_1| r^{N-1}) in every dimension.
inline double gamma_radial_derivative(double r, int dim) {
    if (r <= 0.0) throw domain_error("gamma: singular evaluation at x = 0");
    return -1.0 / (dim * unit_ball_volume(dim) * std::pow(r, dim - 1));
}

inline Vec gamma_gradient(const Vec& x, int dim) {
    const double r = norm(x);
    const double g = gamma_radial_derivative(r, dim);
    Vec out = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) out[i] = g * x[i] / r;
    return out;
}

} // namespace qn
