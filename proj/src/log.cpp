#include "epiforecast/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace epi::log {

namespace {

Level g_threshold = Level::Warn;
std::once_flag g_init;
std::mutex g_mutex;

Level parse_level(const char* s) {
  std::string v(s ? s : "");
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  if (v == "warn" || v == "warning") return Level::Warn;
  if (v == "error") return Level::Error;
  if (v == "off" || v == "none") return Level::Off;
  return Level::Warn;
}

const char* level_name(Level l) {
  switch (l) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
    default: return "off";
  }
}

}  // namespace

Level threshold() {
  std::call_once(g_init, [] {
    if (const char* env = std::getenv("EPIFORECAST_LOG")) g_threshold = parse_level(env);
  });
  return g_threshold;
}

void set_threshold(Level level) {
  threshold();  // settle the env-derived default first
  g_threshold = level;
}

void write(Level level, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[epiforecast %s] %s\n", level_name(level), msg.c_str());
}

}  // namespace epi::log
