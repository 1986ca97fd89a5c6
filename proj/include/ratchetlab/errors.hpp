#pragma once

#include <stdexcept>
#include <string>

namespace ratchetlab {

/// Thrown when a runtime self-check fails (mass conservation, stochasticity,
/// irreducibility, solver residuals). Distinct from std::invalid_argument so
/// callers can map broken invariants to a dedicated exit code.
class invariant_violation : public std::runtime_error {
public:
    explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ratchetlab
