#pragma once

#include <vector>

#include "core/types.hpp"

namespace bcsim {

enum class OffloadState {
  DiscoveryPhase1,
  DiscoveryPhase2,
  Offloading,
  Computing,
  Returning,
  Done,
  Failed,
  Reassigned,
};

const char* to_string(OffloadState s);

/// The staged offload lifecycle: capability discovery, offload request,
/// then the transfer/compute/return exchange. The resiliency path loops
/// Computing -> Failed -> Reassigned -> Offloading; multi-iteration traffic
/// loops Returning -> Offloading once per remaining iteration.
struct OffloadSession {
  OffloadState state = OffloadState::DiscoveryPhase1;

  void advance(OffloadState next);
};

}  // namespace bcsim
