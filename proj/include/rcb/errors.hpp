#pragma once

#include <stdexcept>
#include <string>

namespace rcb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checked 64-bit arithmetic tripped. Every lattice computation is exact;
// wrapping would silently corrupt results, so this is always fatal.
struct OverflowError : Error {
  using Error::Error;
};

// Two divisor classes living on different surface models were combined.
struct ModelMismatchError : Error {
  using Error::Error;
};

// Bad user-facing input: violated preconditions, malformed documents.
struct ValidationError : Error {
  using Error::Error;
};

// The operation is outside the supported geometry (e.g. a transform
// centered on C0, or a basis change from a surface that is not F_1-based).
struct UnsupportedError : Error {
  using Error::Error;
};

// The closed-form route and the lattice route disagreed. This never
// happens unless the library itself is broken.
struct InternalCheckError : Error {
  using Error::Error;
};

}  // namespace rcb
