#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hampath {

// Base for every failure the library reports. Absence of a Hamiltonian path
// is never an error; it is a result.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SelfLoopError : public ParseError {
 public:
  SelfLoopError(std::size_t line, int vertex)
      : ParseError(line, "self-loop on vertex " + std::to_string(vertex) +
                             " rejected: graphs must have no self-loops") {}
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(int n, int cap)
      : Error("graph has " + std::to_string(n) + " vertices, above the enumeration cap of " +
              std::to_string(cap)),
        cap_(cap) {}
  int cap() const noexcept { return cap_; }

 private:
  int cap_;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A state the algorithms guarantee cannot occur. Seeing one means a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hampath
