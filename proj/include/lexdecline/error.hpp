#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexdecline {

// Base of every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input is well-formed but cannot support the requested computation
// (all-zero series, no contexts, all values missing, too few pairs...).
class DataError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : Error(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const { return gradient_norm_; }

 private:
  double gradient_norm_;
};

class SeparationError : public Error {
 public:
  using Error::Error;
};

class CollinearityError : public Error {
 public:
  CollinearityError(const std::string& what, std::vector<std::string> predictors)
      : Error(what), predictors_(std::move(predictors)) {}
  const std::vector<std::string>& predictors() const { return predictors_; }

 private:
  std::vector<std::string> predictors_;
};

// Matching could not satisfy the global length-sum budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, long deficit) : Error(what), deficit_(deficit) {}
  long deficit() const { return deficit_; }

 private:
  long deficit_;
};

}  // namespace lexdecline
