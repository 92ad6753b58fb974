#pragma once
#include <stdexcept>

namespace turnsig {

/// An input file violates its format or a declared invariant. The message
/// names the offending file and field path.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dataset-level problem: duplicate ids, empty directories, manifest
/// mismatches, unusable experiment inputs.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace turnsig
