#include "offload/session.hpp"

#include <string>

#include "core/error.hpp"

namespace bcsim {

const char* to_string(OffloadState s) {
  switch (s) {
    case OffloadState::DiscoveryPhase1: return "discovery_phase1";
    case OffloadState::DiscoveryPhase2: return "discovery_phase2";
    case OffloadState::Offloading: return "offloading";
    case OffloadState::Computing: return "computing";
    case OffloadState::Returning: return "returning";
    case OffloadState::Done: return "done";
    case OffloadState::Failed: return "failed";
    case OffloadState::Reassigned: return "reassigned";
  }
  return "unknown";
}

void OffloadSession::advance(OffloadState next) {
  using S = OffloadState;
  bool legal = false;
  switch (state) {
    case S::DiscoveryPhase1: legal = next == S::DiscoveryPhase2; break;
    case S::DiscoveryPhase2: legal = next == S::Offloading || next == S::Failed; break;
    case S::Offloading: legal = next == S::Computing; break;
    case S::Computing: legal = next == S::Returning || next == S::Failed; break;
    // Returning -> Offloading is the multi-iteration loop; Returning ->
    // Failed covers a multi-node branch dying while another already returns.
    case S::Returning:
      legal = next == S::Done || next == S::Offloading || next == S::Failed;
      break;
    case S::Failed: legal = next == S::Reassigned; break;
    case S::Reassigned: legal = next == S::Offloading; break;
    case S::Done: legal = false; break;
  }
  if (!legal) {
    throw SimError(ErrorCode::InvalidArgument,
                   std::string("illegal offload session transition ") +
                       to_string(state) + " -> " + to_string(next));
  }
  state = next;
}

}  // namespace bcsim
