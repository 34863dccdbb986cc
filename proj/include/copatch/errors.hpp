#ifndef COPATCH_ERRORS_HPP
#define COPATCH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace copatch {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two values that were required to share an endpoint do not.
class SourceMismatch : public Error {
public:
  explicit SourceMismatch(const std::string& what, std::size_t index = npos)
      : Error(what), index(index) {}
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index; // first differing line index, when applicable
};

class PositionOutOfRange : public Error {
public:
  using Error::Error;
};

class InvalidPatch : public Error {
public:
  using Error::Error;
};

/// The pair of morphisms handed to `mediating` does not commute with the span.
class NotACocone : public Error {
public:
  explicit NotACocone(const std::string& what, std::uint64_t witness = 0)
      : Error(what), witness(witness) {}
  std::uint64_t witness; // offending element, when applicable
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(what + (line ? " (line " + std::to_string(line) + ")" : "")), line(line) {}
  std::size_t line; // 1-based line number in the input text
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class DigestMismatch : public Error {
public:
  using Error::Error;
};

class EventClash : public Error {
public:
  using Error::Error;
};

class NotAConfiguration : public Error {
public:
  using Error::Error;
};

class BaseMismatch : public Error {
public:
  using Error::Error;
};

class ConflictedState : public Error {
public:
  using Error::Error;
};

class NoChange : public Error {
public:
  using Error::Error;
};

class TooLarge : public Error {
public:
  using Error::Error;
};

/// Filesystem store problems that are not parse errors: lock contention,
/// missing store, I/O failures.
class StoreError : public Error {
public:
  using Error::Error;
};

} // namespace copatch

#endif
