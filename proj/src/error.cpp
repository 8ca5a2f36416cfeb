#include "urnc/error.hpp"

namespace urnc {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DivisionByZero: return "division-by-zero";
    case Errc::GcdOfZeros: return "gcd-of-zeros";
    case Errc::InverseOfZero: return "inversion-of-zero";
    case Errc::NonSquare: return "non-square";
    case Errc::SingularMatrix: return "singular-matrix";
    case Errc::SparseLimit: return "sparse-limit";
    case Errc::CycleDetected: return "cycle-detected";
    case Errc::UnreachableSink: return "unreachable-sink";
    case Errc::MalformedNetwork: return "malformed-ids";
    case Errc::ParameterOutOfRange: return "parameter-out-of-range";
    case Errc::UnknownNode: return "unknown-node";
    case Errc::UnknownEdge: return "unknown-edge";
    case Errc::UnknownParent: return "unknown-parent";
    case Errc::BadEpsilon: return "bad-epsilon";
    case Errc::UncoveredCodingNode: return "uncovered-coding-node";
    case Errc::TooFewSinkInputs: return "sink-has-fewer-than-R-inputs";
    case Errc::SingularTransfer: return "singular-transfer";
    case Errc::DegreeOverflow: return "degree-overflow";
    case Errc::FramingError: return "framing-error";
    case Errc::InstanceTooLarge: return "instance-too-large";
    case Errc::InvalidInstance: return "invalid-instance";
    case Errc::DecodeMismatch: return "decode-mismatch";
    case Errc::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace urnc
