#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "npct/grid.hpp"

namespace npct {

struct DisplayWindow {
  double lo = 0.0;
  double hi = 1.2e-5;
};

inline constexpr DisplayWindow kImageWindow{0.0, 1.2e-5};
inline constexpr DisplayWindow kResidualWindow{0.0, 4.5e-6};

/// Maps a value linearly from [lo, hi] onto [0, 65535], clamped and rounded.
std::uint16_t window_value(double v, const DisplayWindow& window);

/// Writes `<stem>.pgm` (16-bit binary PGM, windowed) plus the full-precision
/// dump `<stem>.raw` / `<stem>.hdr`. `stem` is the path without extension.
void write_image(const ImageGrid2D& img, const std::filesystem::path& stem,
                 const DisplayWindow& window = kImageWindow);

/// Full-precision dumps: little-endian doubles in `<stem>.raw` and a small
/// key/value text header in `<stem>.hdr`.
void write_image_dump(const ImageGrid2D& img, const std::filesystem::path& stem);
ImageGrid2D read_image_dump(const std::filesystem::path& stem);
void write_sinogram_dump(const Sinogram& sino, const std::filesystem::path& stem);
Sinogram read_sinogram_dump(const std::filesystem::path& stem);

/// Strips a trailing .hdr/.raw/.pgm so either the stem or any member file
/// can name a dump.
std::filesystem::path dump_stem(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  /// Cells already formatted; see format_double.
  std::vector<std::vector<std::string>> rows;
};

/// "%.17g"; NaN and infinities become "nan", "inf", "-inf".
std::string format_double(double v);

/// RFC 4180 style: header row, comma separated, LF endings, cells quoted
/// only when they contain a comma, quote or newline.
void write_csv(const CsvTable& table, const std::filesystem::path& path);
std::string to_csv(const CsvTable& table);

}  // namespace npct
