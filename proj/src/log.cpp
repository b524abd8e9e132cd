#include "echodetect/log.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <mutex>

namespace echodetect {

namespace {

std::atomic<LogLevel> g_level{LogLevel::Warn};
std::mutex g_write_mutex;

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
    default: return "none";
  }
}

}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }

LogLevel log_level() { return g_level.load(); }

bool parse_log_level(std::string_view name, LogLevel& out) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "none" || lower == "off") {
    out = LogLevel::None;
  } else if (lower == "error") {
    out = LogLevel::Error;
  } else if (lower == "warn" || lower == "warning") {
    out = LogLevel::Warn;
  } else if (lower == "info") {
    out = LogLevel::Info;
  } else if (lower == "debug") {
    out = LogLevel::Debug;
  } else {
    return false;
  }
  return true;
}

void log_message(LogLevel level, const std::string& message) {
  if (level == LogLevel::None || level > g_level.load()) return;
  std::lock_guard<std::mutex> lock(g_write_mutex);
  std::fprintf(stderr, "[echodetect] %s: %s\n", level_name(level),
               message.c_str());
}

}  // namespace echodetect
