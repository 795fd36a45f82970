#include "lfqa/errors.hpp"

namespace lfqa {

const char* err_name(Err e) {
  switch (e) {
    case Err::MissingView: return "MissingView";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::DecodeError: return "DecodeError";
    case Err::DegenerateOrientation: return "DegenerateOrientation";
    case Err::TooSmall: return "TooSmall";
    case Err::SizeMismatch: return "SizeMismatch";
    case Err::DegenerateSamples: return "DegenerateSamples";
    case Err::NeedsTwoViews: return "NeedsTwoViews";
    case Err::NoUsableEpis: return "NoUsableEpis";
    case Err::EmptyInput: return "EmptyInput";
    case Err::EmptyTrainingSet: return "EmptyTrainingSet";
    case Err::NonFiniteInput: return "NonFiniteInput";
    case Err::LayoutMismatch: return "LayoutMismatch";
    case Err::LengthMismatch: return "LengthMismatch";
    case Err::ZeroVariance: return "ZeroVariance";
    case Err::DegenerateInput: return "DegenerateInput";
    case Err::InsufficientData: return "InsufficientData";
    case Err::InsufficientSamples: return "InsufficientSamples";
    case Err::InvalidSpec: return "InvalidSpec";
    case Err::ConfigError: return "ConfigError";
    case Err::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace lfqa
