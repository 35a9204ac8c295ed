#include "npct/log.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>

namespace npct::log {
namespace {

std::atomic<Level> g_level{Level::Info};
std::mutex g_mutex;
std::ofstream g_file;

const char* tag(Level level) {
  switch (level) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
    case Level::Off: break;
  }
  return "";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void set_file_sink(const std::filesystem::path& path) {
  std::lock_guard lock(g_mutex);
  if (g_file.is_open()) g_file.close();
  if (!path.empty()) g_file.open(path, std::ios::out | std::ios::trunc);
}

void write(Level lvl, const std::string& message) {
  if (lvl == Level::Off) return;
  std::lock_guard lock(g_mutex);
  if (lvl >= g_level.load()) std::clog << "npct " << tag(lvl) << ": " << message << '\n';
  if (g_file.is_open()) g_file << tag(lvl) << ": " << message << '\n' << std::flush;
}

}  // namespace npct::log
