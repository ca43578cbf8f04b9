#ifndef ECS_ERRORS_HPP
#define ECS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecs {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A fixed-width result does not fit its backing type.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Subtracting a unit fraction would make a nonnegative fraction negative.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

// An lcm or search-space size exceeds a caller-supplied cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Moduli multiset is not "distinct except the largest, repeated r >= 2 times".
class NotSingleRepeated : public Error {
 public:
  using Error::Error;
};

// Malformed text under one of the documented grammars.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Checkpoint file unreadable, corrupt, or written under another config.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecs

#endif  // ECS_ERRORS_HPP
