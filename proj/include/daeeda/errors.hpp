#pragma once

#include <stdexcept>
#include <string>

namespace daeeda {

// Vector/matrix lengths disagree with the problem or model size.
class ShapeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

// Fitness read from an individual that has not been evaluated.
class UnevaluatedError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Training produced a non-finite loss or fitness.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Exhaustive search requested beyond its budget.
class TooLargeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Too few examples to split into training and validation sets.
class InsufficientDataError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Malformed instance file or CSV record.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace daeeda
