#pragma once

#include <stdexcept>
#include <string>

namespace codedtof {

// Error taxonomy shared by the library and the CLI. The CLI maps these onto
// process exit codes: ConfigError (and subclasses) -> 2, AlgorithmError -> 3,
// IoError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// f_m / f_r does not resolve to an integer code length.
struct NonIntegerCodeLength : ConfigError {
  using ConfigError::ConfigError;
};

// Matrix/vector arguments whose shapes cannot be combined.
struct DimensionMismatch : ConfigError {
  using ConfigError::ConfigError;
};

// A column with zero norm where a normalized correlation is required.
struct ZeroColumn : ConfigError {
  using ConfigError::ConfigError;
};

// Kernel support would wrap around more than half the repetition period.
struct KernelTooWide : ConfigError {
  using ConfigError::ConfigError;
};

// Requested construction size exceeds the supported maximum.
struct SizeUnsupported : ConfigError {
  using ConfigError::ConfigError;
};

struct AlgorithmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The combinatorial generator ran out of admissible candidate columns.
struct PoolExhausted : AlgorithmError {
  explicit PoolExhausted(int placed)
      : AlgorithmError("candidate pool exhausted at column " +
                       std::to_string(placed)),
        columns_placed(placed) {}
  int columns_placed;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace codedtof
