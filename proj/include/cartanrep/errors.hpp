#pragma once

#include <stdexcept>
#include <string>

namespace cartanrep {

enum class Errc {
  NotCartan,
  NotSymmetrizer,
  NonPositiveSymmetrizer,
  InvalidOrientation,
  NotSinkOrSource,
  NotSink,
  NotSource,
  NotDynkin,
  NotReduced,
  ShapeMismatch,
  SpecMismatch,
  NotLocallyFree,
  InternalMismatch,
  TooLarge,
  InterpolationInconsistent,
  SearchBudgetExceeded,
  Undefined,
  NonFiniteType,
  BadReduction,
  Parse,
};

const char* errc_name(Errc e);

// All mathematical failures carry a kind and the violated identity.
class MathError : public std::runtime_error {
 public:
  MathError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace cartanrep
