#pragma once

#include <stdexcept>
#include <string>

namespace mf {

// bad dimensions, unparsable config, invalid parameter values
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// NaN states, negative sizes, rates outside the model's admissible range
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// state space too large for exact master-equation integration
struct SizeRefusal : std::runtime_error {
    explicit SizeRefusal(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mf
