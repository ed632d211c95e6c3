#pragma once

#include <stdexcept>
#include <string>

namespace sscomp {

/// A family parameter or argument is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive operation was asked for n beyond the configured cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed text input (composition, fraction, record file).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structural moments that cannot come from a self-similar Markov law.
class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampler fed with data that does not define a probability law.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sscomp
