#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwm {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Operation is not defined for this kind of input (e.g. encoding against a
// sequence without unique signed-digit representations).
struct Unsupported : std::logic_error {
    using std::logic_error::logic_error;
};

// Truncation depth too small to decide a value exactly.
struct DepthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KaluzaViolation : InvalidArgument {
    KaluzaViolation(const std::string& what, std::size_t index)
        : InvalidArgument(what), index(index) {}
    std::size_t index;
};

} // namespace rwm
