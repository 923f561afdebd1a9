#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace germflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class GroupError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& message, double smallest_singular_value)
      : Error(message), smallest_singular_value_(smallest_singular_value) {}
  double smallest_singular_value() const { return smallest_singular_value_; }

 private:
  double smallest_singular_value_;
};

// Raised when the contact correction is not invertible on the chosen neighborhood.
class NeighborhoodTooLargeError : public Error {
 public:
  NeighborhoodTooLargeError(const std::string& message, double theta_norm)
      : Error(message), theta_norm_(theta_norm) {}
  double theta_norm() const { return theta_norm_; }

 private:
  double theta_norm_;
};

class InvalidProblemError : public Error {
 public:
  using Error::Error;
};

}  // namespace germflow
