#pragma once

#include <stdexcept>
#include <string>

namespace zenoqst {

// Integrator or eigen-solver failure: step-size underflow, positivity loss,
// norm drift beyond tolerance. Maps to exit code 2 in the CLI.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical-validity gate was violated (single-mode fiber condition, Zeno
// ratio under --strict).
class ValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zenoqst
