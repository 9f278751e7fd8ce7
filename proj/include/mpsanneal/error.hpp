#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpsanneal {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Coupling or field outside the hardware-inspired range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Structural violation of an instance graph (bad index, duplicate edge, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numerical failure; carries the step index or bond index where it happened
// (-1 when not applicable).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long step = -1, long bond = -1)
      : Error(what + (step >= 0 ? " (step " + std::to_string(step) + ")" : std::string()) +
              (bond >= 0 ? " (bond " + std::to_string(bond) + ")" : std::string())),
        step_(step),
        bond_(bond) {}
  long step() const noexcept { return step_; }
  long bond() const noexcept { return bond_; }

 private:
  long step_;
  long bond_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace mpsanneal
