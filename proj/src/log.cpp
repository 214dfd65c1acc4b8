#include "evchain/log.hpp"

#include <cstdlib>
#include <iostream>

namespace evchain {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("EVENTCHAIN_LOG");
    if (env == nullptr) return LogLevel::warn;
    std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

namespace {
void emit(LogLevel at, const char* tag, const std::string& message) {
  if (log_level() >= at) std::cerr << tag << message << "\n";
}
}  // namespace

void log_warn(const std::string& message) { emit(LogLevel::warn, "warning: ", message); }
void log_info(const std::string& message) { emit(LogLevel::info, "info: ", message); }
void log_debug(const std::string& message) { emit(LogLevel::debug, "debug: ", message); }

}  // namespace evchain
