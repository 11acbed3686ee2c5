#pragma once

#include <stdexcept>
#include <string>

namespace so3obs {

enum class ErrorKind {
  NotSkew,
  Degenerate,
  RankDeficient,
  DegenerateSpectrum,
  InvalidParams,
  NotInJumpSet,
  InvalidScenario,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace so3obs
