#pragma once

#include <stdexcept>
#include <string>

namespace xoscc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FamilyInfeasible : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class MessageTooLong : public Error {
 public:
  using Error::Error;
};

class SameRoundRead : public Error {
 public:
  using Error::Error;
};

class DivergenceInfinite : public Error {
 public:
  using Error::Error;
};

class RejectionCapExceeded : public Error {
 public:
  RejectionCapExceeded(const std::string& what, int player, long attempts)
      : Error(what), player_(player), attempts_(attempts) {}

  int player() const noexcept { return player_; }
  long attempts() const noexcept { return attempts_; }

 private:
  int player_;
  long attempts_;
};

}  // namespace xoscc
