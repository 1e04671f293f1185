#pragma once

#include <stdexcept>
#include <string>

namespace ctmlab {

// Invalid ExperimentConfig (probabilities outside [0,1], n_pre > n_total, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Calibrator/engine parameter out of range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A function was called outside its precondition.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed observations (non-binary entries).
struct DataError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad request at the harness level: unknown process, empty seed list, ...
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctmlab
