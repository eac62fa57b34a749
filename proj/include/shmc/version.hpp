#pragma once

#define SHMC_VERSION_MAJOR 0
#define SHMC_VERSION_MINOR 1
#define SHMC_VERSION_PATCH 0
#define SHMC_VERSION "0.1.0"

namespace shmc {

inline const char* version() { return SHMC_VERSION; }

}  // namespace shmc
