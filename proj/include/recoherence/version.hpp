#pragma once

#define RECOHERENCE_VERSION_MAJOR 0
#define RECOHERENCE_VERSION_MINOR 1
#define RECOHERENCE_VERSION_PATCH 0
#define RECOHERENCE_VERSION "0.1.0"

namespace recoherence {

inline const char* version() { return RECOHERENCE_VERSION; }

} // namespace recoherence
