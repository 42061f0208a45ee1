#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bfs1d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

class InvalidVertexError : public Error {
 public:
  using Error::Error;
};

class InvalidRankError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Malformed edge-list file; message carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

/// The world is tearing down because some rank failed.
class ShutdownError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// A collective blocked past the world timeout or saw inconsistent arguments.
class CollectiveMisuseError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// One or more ranks failed inside spawn_world.
class WorldError : public Error {
 public:
  WorldError(const std::string& what, int failing_rank)
      : Error(what), failing_rank_(failing_rank) {}
  int failing_rank() const { return failing_rank_; }

 private:
  int failing_rank_;
};

/// A distributed run disagreed with the serial oracle or broke a write-once
/// level invariant. Never swallowed.
class CorrectnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace bfs1d
