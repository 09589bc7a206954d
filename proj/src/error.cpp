#include "gridpart/error.hpp"

namespace gridpart {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::Parse: return "ParseError";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::ParallelLine: return "ParallelLine";
    case Errc::NonPositiveSusceptance: return "NonPositiveSusceptance";
    case Errc::ZeroReactance: return "ZeroReactance";
    case Errc::Disconnected: return "Disconnected";
    case Errc::DuplicateBusId: return "DuplicateBusId";
    case Errc::DuplicateLineId: return "DuplicateLineId";
    case Errc::UnknownBus: return "UnknownBus";
    case Errc::UnknownLine: return "UnknownLine";
    case Errc::NoSlackBus: return "NoSlackBus";
    case Errc::ImbalancedInjection: return "ImbalancedInjection";
    case Errc::ImbalancedComponent: return "ImbalancedComponent";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::BridgeColumn: return "BridgeColumn";
    case Errc::NearSingularDenominator: return "NearSingularDenominator";
    case Errc::NotABridge: return "NotABridge";
    case Errc::IslandedAtBridge: return "IslandedAtBridge";
    case Errc::NoParticipatingBusInComponent: return "NoParticipatingBusInComponent";
    case Errc::NoGenerators: return "NoGenerators";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DisconnectsGraph: return "DisconnectsGraph";
    case Errc::WouldDisconnect: return "WouldDisconnect";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gridpart
