#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace corforge {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Threshold from COR_FORGE_LOG ({error,warn,info,debug}); defaults to warn.
inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("COR_FORGE_LOG");
    if (!env) return LogLevel::warn;
    const std::string_view v(env);
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[corforge][" << names[static_cast<int>(level)] << "] " << message
            << "\n";
}

}  // namespace corforge
