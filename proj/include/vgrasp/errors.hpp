#pragma once

#include <stdexcept>
#include <string>

namespace vgrasp {

// Raised when a caller passes data that violates an operation's preconditions
// (degenerate triangle, out-of-range angle, malformed config, ...).
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// I/O and parse failures for mesh, scenario and questionnaire files.
class LoadError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace vgrasp
