#pragma once

#include <stdexcept>

namespace telsim {

// Bad input: unreadable files, schema violations, invalid networks.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure of the numerics: CFL violation, singular admittance system.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace telsim
