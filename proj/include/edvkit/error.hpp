#pragma once

#include <stdexcept>
#include <string>

namespace edvkit {

// Malformed or inconsistent input data (bad CoNLL-U, misaligned files, ...).
// The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric routine cannot produce a result (degenerate input, singular
// matrix, non-convergence, ...). The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace edvkit
