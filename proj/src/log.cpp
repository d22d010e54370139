#include "cpa/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace cpa::log {

namespace {

Level from_env() {
  const char* raw = std::getenv("CPA_LOG");
  if (raw == nullptr) return Level::Off;
  const std::string v(raw);
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  return Level::Off;
}

std::atomic<int>& current() {
  static std::atomic<int> value{static_cast<int>(from_env())};
  return value;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void emit(const char* tag, std::string_view message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << "[cpa " << tag << "] " << message << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }

void set_level(Level l) { current().store(static_cast<int>(l)); }

void info(std::string_view message) {
  if (level() >= Level::Info) emit("info", message);
}

void debug(std::string_view message) {
  if (level() >= Level::Debug) emit("debug", message);
}

}  // namespace cpa::log
