#pragma once

namespace qn {

// Kahan compensated accumulator. Diagnostic reductions use this so that
// reported energies are insensitive to particle ordering at the 1e-13
// relative level.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

} // namespace qn
