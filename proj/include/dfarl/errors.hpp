#pragma once

#include <stdexcept>
#include <string>

namespace dfarl {

// Bad user input: malformed DFA, out-of-range symbol, invalid config. CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An internal invariant did not hold. CLI exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SamplerExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two non-bisimilar tasks were mapped to the same quantized embedding key.
class EmbeddingCollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace dfarl
