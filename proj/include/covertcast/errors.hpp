#pragma once

#include <stdexcept>

namespace covertcast {

// Invalid experiment configuration (CLI maps this to exit code 1).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Covert rate interval empty at a given block length.
struct ScheduleInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace covertcast
