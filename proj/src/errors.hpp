#pragma once

#include <stdexcept>
#include <string>

namespace symcirc {

enum class ErrorCode {
  Parse,
  Invalid,
  NotRigid,
  NotSymmetric,
  Mismatch,
  TooLarge,
  Argument,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string &msg, int line = 0)
      : Error(ErrorCode::Parse,
              line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// Raised by the succinct pipeline when the rigidified circuit fails the
// transposition test; (u,v) is the counterexample transposition.
class NotSymmetricError : public Error {
public:
  NotSymmetricError(int u, int v)
      : Error(ErrorCode::NotSymmetric,
              "circuit is not symmetric: no automorphism induced by "
              "transposition (" +
                  std::to_string(u) + " " + std::to_string(v) + ")"),
        u_(u), v_(v) {}
  int u() const { return u_; }
  int v() const { return v_; }

private:
  int u_, v_;
};

} // namespace symcirc
