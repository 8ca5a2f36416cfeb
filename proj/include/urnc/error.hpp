#pragma once

#include <stdexcept>
#include <string>

namespace urnc {

enum class Errc {
  DivisionByZero,
  GcdOfZeros,
  InverseOfZero,
  NonSquare,
  SingularMatrix,
  SparseLimit,
  CycleDetected,
  UnreachableSink,
  MalformedNetwork,
  ParameterOutOfRange,
  UnknownNode,
  UnknownEdge,
  UnknownParent,
  BadEpsilon,
  UncoveredCodingNode,
  TooFewSinkInputs,
  SingularTransfer,
  DegreeOverflow,
  FramingError,
  InstanceTooLarge,
  InvalidInstance,
  DecodeMismatch,
  Internal,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace urnc
