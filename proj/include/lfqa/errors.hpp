#pragma once

#include <stdexcept>
#include <string>

namespace lfqa {

enum class Err {
  MissingView,
  DimensionMismatch,
  DecodeError,
  DegenerateOrientation,
  TooSmall,
  SizeMismatch,
  DegenerateSamples,
  NeedsTwoViews,
  NoUsableEpis,
  EmptyInput,
  EmptyTrainingSet,
  NonFiniteInput,
  LayoutMismatch,
  LengthMismatch,
  ZeroVariance,
  DegenerateInput,
  InsufficientData,
  InsufficientSamples,
  InvalidSpec,
  ConfigError,
  IoError,
};

const char* err_name(Err e);

/// All library failures surface as Error; code() identifies the condition so
/// callers and tests can match on it without parsing messages.
class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lfqa
