#pragma once

#include <sstream>
#include <string>

namespace epi::log {

enum class Level { Debug = 0, Info, Warn, Error, Off };

// Threshold comes from EPIFORECAST_LOG (debug|info|warn|error|off),
// default warn. Messages go to stderr.
Level threshold();
void set_threshold(Level level);
void write(Level level, const std::string& msg);

template <class... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

template <class... Args>
void debug(Args&&... args) {
  if (threshold() <= Level::Debug) write(Level::Debug, cat(args...));
}
template <class... Args>
void info(Args&&... args) {
  if (threshold() <= Level::Info) write(Level::Info, cat(args...));
}
template <class... Args>
void warn(Args&&... args) {
  if (threshold() <= Level::Warn) write(Level::Warn, cat(args...));
}
template <class... Args>
void error(Args&&... args) {
  if (threshold() <= Level::Error) write(Level::Error, cat(args...));
}

}  // namespace epi::log
