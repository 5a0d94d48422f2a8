#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qn {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user input: bad config keys, bad parameters, bad file schema.
struct config_error : error {
    using error::error;
};

// Mathematical domain violation (e.g. Gamma at the origin, nonpositive
// Z-map argument).
struct domain_error : error {
    using error::error;
};

// An iterative solver failed to converge; carries the last iterate and
// residual for post-mortem inspection.
struct convergence_error : error {
    std::vector<double> last_iterate;
    double residual;
    convergence_error(const std::string& msg, std::vector<double> iterate, double res)
        : error(msg), last_iterate(std::move(iterate)), residual(res) {}
};

// A precondition on the state of the computation does not hold.
struct precondition_error : error {
    using error::error;
};

// The requested equilibrium exists in the theory but is outside the
// constructive classes supported here (measure-valued pieces, density
// not bounded below, ...).
struct unsupported_equilibrium_error : error {
    using error::error;
};

// An internal identity that should hold by construction failed its
// numerical verification.
struct internal_inconsistency_error : error {
    using error::error;
};

} // namespace qn
