#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace easta {

// A documented precondition was violated (non-Hermitian input, mismatched
// dimensions, probabilities that do not sum to one, ...).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Spectrum too close to degenerate for eigenstate tracking on the grid.
struct GapError : std::runtime_error {
    GapError(const std::string& what, std::size_t grid_index)
        : std::runtime_error(what), grid_index(grid_index) {}
    std::size_t grid_index;
};

// Two redundant computation routes disagree beyond tolerance, or a running
// defect (e.g. propagator unitarity) exceeded its bound.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration failed schema validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace easta
