#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace secidx {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch, modulus mismatch, out-of-range index, bad precondition.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero in GF(q)") {}
};

/// The requested field is too small (or not a field) for the construction.
class InfeasibleField : public Error {
 public:
  using Error::Error;
};

/// t-level outside [0, m-1] or block size b that no access set can host.
class InvalidLevel : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would visit more states than allowed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, unsigned long long needed, unsigned long long budget)
      : Error(what + ": needs " + std::to_string(needed) + " states, budget is " +
              std::to_string(budget)),
        needed_(needed),
        budget_(budget) {}

  unsigned long long needed() const { return needed_; }
  unsigned long long budget() const { return budget_; }

 private:
  unsigned long long needed_;
  unsigned long long budget_;
};

/// A decoder witness does not satisfy its defining identity.
class InvalidWitness : public Error {
 public:
  using Error::Error;
};

/// Some receiver knows only messages inside an access set but wants one
/// outside it, so no secure code can exist.
class NoSecureCode : public Error {
 public:
  NoSecureCode(std::size_t receiver, std::string access_set)
      : Error("no secure index code: receiver " + std::to_string(receiver) +
              " has side information inside access set " + access_set +
              " but wants a message outside it"),
        receiver_(receiver) {}

  std::size_t receiver() const { return receiver_; }

 private:
  std::size_t receiver_;
};

/// Malformed input file; `what()` carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace secidx
