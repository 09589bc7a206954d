#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridpart {

/// Error codes shared by every module. Each analysis throws `Error` (or one
/// of the thin subclasses below) carrying exactly one of these.
enum class Errc {
  // ingestion
  Parse,
  SelfLoop,
  ParallelLine,
  NonPositiveSusceptance,
  ZeroReactance,
  Disconnected,
  DuplicateBusId,
  DuplicateLineId,
  UnknownBus,
  UnknownLine,
  NoSlackBus,
  // flow
  ImbalancedInjection,
  ImbalancedComponent,
  SingularSystem,
  // lodf
  BridgeColumn,
  NearSingularDenominator,
  NotABridge,
  IslandedAtBridge,
  NoParticipatingBusInComponent,
  // balance
  NoGenerators,
  InvalidWeights,
  // oracle
  TooLarge,
  DisconnectsGraph,
  // switching
  WouldDisconnect,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& detail) : Error(Errc::Parse, detail) {}
};

/// Raised when a network violates a structural invariant; `code()` is the kind.
class ValidationError : public Error {
 public:
  ValidationError(Errc kind, const std::string& detail) : Error(kind, detail) {}
  Errc kind() const noexcept { return code(); }
};

}  // namespace gridpart
