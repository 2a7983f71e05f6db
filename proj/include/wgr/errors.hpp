#pragma once

#include <stdexcept>
#include <string>

namespace wgr {

// Malformed user input: exit code 2 at the CLI boundary.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in a .gma document, carrying a 1-based position.
struct ParseError : InputError {
    int line, column;
    ParseError(int l, int c, const std::string& msg)
        : InputError("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

// A mathematically invalid request (ring mismatch, zero weight, shape error).
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InhomogeneousError : MathError {
    using MathError::MathError;
};

struct ZeroWeightError : MathError {
    ZeroWeightError() : MathError("weight of the zero polynomial is undefined") {}
};

struct InfinitePieceError : MathError {
    using MathError::MathError;
};

}  // namespace wgr
