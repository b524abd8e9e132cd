#pragma once

#include <string>
#include <string_view>

namespace echodetect {

enum class LogLevel {
  None = 0,
  Error = 1,
  Warn = 2,
  Info = 3,
  Debug = 4,
};

void set_log_level(LogLevel level);
LogLevel log_level();

// Parses "none"/"error"/"warn"/"info"/"debug" (case-insensitive).
// Unknown names leave the level unchanged and return false.
bool parse_log_level(std::string_view name, LogLevel& out);

void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::Warn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }

}  // namespace echodetect
