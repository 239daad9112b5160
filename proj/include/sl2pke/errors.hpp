#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace sl2pke {

/// Caller violated a precondition (bad dimensions, wrong message length, bad flags).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix has even determinant, so it has no inverse modulo 2^K.
class NotInvertible : public std::domain_error {
 public:
  NotInvertible() : std::domain_error("matrix is not invertible modulo 2^K") {}
};

/// Malformed key or ciphertext file. Carries the 1-based line and the field name.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + " [" + field + "]: " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Value-or-error result for the expected failure paths (rejection, exhaustion).
template <class T, class E>
class Outcome {
 public:
  Outcome(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Outcome(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const noexcept { return v_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::logic_error("Outcome::value() on error");
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!ok()) throw std::logic_error("Outcome::value() on error");
    return std::get<0>(std::move(v_));
  }
  const E& error() const& {
    if (ok()) throw std::logic_error("Outcome::error() on value");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace sl2pke
