#pragma once

#include <string_view>

namespace cpa::log {

enum class Level { Off = 0, Info = 1, Debug = 2 };

/// Level taken from the CPA_LOG environment variable (off|info|debug) on
/// first use; defaults to off.
Level level();
void set_level(Level level);

void info(std::string_view message);
void debug(std::string_view message);

}  // namespace cpa::log
