#pragma once

#include <string>

namespace evchain {

// Verbosity is controlled by the EVENTCHAIN_LOG environment variable:
// quiet, warn (default), info, debug.
enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
void log_warn(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace evchain
