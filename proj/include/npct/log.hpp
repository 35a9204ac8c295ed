#pragma once

#include <filesystem>
#include <string>

namespace npct::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

void set_level(Level level);
Level level();

/// Mirror every line into `path`, at all levels regardless of the stderr level. An empty path
/// closes the file sink.
void set_file_sink(const std::filesystem::path& path);

void write(Level level, const std::string& message);

inline void debug(const std::string& m) { write(Level::Debug, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void error(const std::string& m) { write(Level::Error, m); }

}  // namespace npct::log
