#pragma once

#include <stdexcept>
#include <string>

namespace latops {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad rational strings, schema violations, broken
/// preconditions on parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A pairing needs moments beyond the truncation order of a functional.
class OrderExceeded : public Error {
 public:
  OrderExceeded(long required, long available, const std::string& what = "")
      : Error("moment order exceeded" + (what.empty() ? std::string() : " (" + what + ")") +
              ": required " + std::to_string(required) + ", available " +
              std::to_string(available)),
        required_(required),
        available_(available) {}

  long required() const noexcept { return required_; }
  long available() const noexcept { return available_; }

 private:
  long required_;
  long available_;
};

/// A leading principal Hankel determinant vanished.
class RegularityError : public Error {
 public:
  explicit RegularityError(int hankel_order)
      : Error("functional is not regular: Hankel determinant of order " +
              std::to_string(hankel_order) + " vanishes"),
        hankel_order_(hankel_order) {}

  int hankel_order() const noexcept { return hankel_order_; }

 private:
  int hankel_order_;
};

/// A hypothesis of a construction fails (zero determinant, vanishing
/// leading coefficient, inconsistent normalization).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace latops
