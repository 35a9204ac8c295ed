#include "npct/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "npct/error.hpp"

namespace npct {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

void ensure_parent(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void write_doubles(const fs::path& path, std::span<const double> values) {
  std::ofstream out = open_out(path);
  std::vector<unsigned char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_doubles(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes(count * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()) || in.peek() != EOF) {
    throw IoError("size of " + path.string() + " does not match its header");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[i * 8 + b]} << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

using Header = std::map<std::string, std::string>;

void write_header(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& fields) {
  std::ofstream out = open_out(path);
  out << "npct-dump 1\n";
  for (const auto& [k, v] : fields) out << k << ' ' << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Header read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "npct-dump 1") {
    throw IoError(path.string() + " is not a dump header");
  }
  Header h;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw IoError("malformed header line in " + path.string());
    h[line.substr(0, sp)] = line.substr(sp + 1);
  }
  return h;
}

const std::string& field(const Header& h, const std::string& key, const fs::path& path) {
  const auto it = h.find(key);
  if (it == h.end()) throw IoError(path.string() + " lacks '" + key + "'");
  return it->second;
}

std::size_t field_count(const Header& h, const std::string& key, const fs::path& path) {
  try {
    return std::stoull(field(h, key, path));
  } catch (const std::logic_error&) {
    throw IoError(path.string() + ": bad value for '" + key + "'");
  }
}

double field_double(const Header& h, const std::string& key, const fs::path& path) {
  try {
    return std::stod(field(h, key, path));
  } catch (const std::logic_error&) {
    throw IoError(path.string() + ": bad value for '" + key + "'");
  }
}

std::string count_text(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint16_t window_value(double v, const DisplayWindow& window) {
  if (!(window.lo < window.hi)) throw InvalidArgument("display window needs lo < hi");
  if (std::isnan(v)) return 0;
  const double t = (v - window.lo) / (window.hi - window.lo);
  if (t <= 0.0) return 0;
  if (t >= 1.0) return 65535;
  return static_cast<std::uint16_t>(std::lround(t * 65535.0));
}

void write_image(const ImageGrid2D& img, const fs::path& stem, const DisplayWindow& window) {
  if (!(window.lo < window.hi)) throw InvalidArgument("display window needs lo < hi");
  const fs::path pgm = with_suffix(stem, ".pgm");
  std::ofstream out = open_out(pgm);
  const std::size_t n = img.n();
  out << "P5\n" << n << ' ' << n << "\n65535\n";
  std::vector<unsigned char> bytes;
  bytes.reserve(2 * n * n);
  for (double v : img.data().values()) {
    const std::uint16_t q = window_value(v, window);
    bytes.push_back(static_cast<unsigned char>(q >> 8));
    bytes.push_back(static_cast<unsigned char>(q & 0xff));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + pgm.string());
  write_image_dump(img, stem);
}

void write_image_dump(const ImageGrid2D& img, const fs::path& stem) {
  write_doubles(with_suffix(stem, ".raw"), img.data().values());
  write_header(with_suffix(stem, ".hdr"), {{"type", "image"},
                                           {"rows", count_text(img.n())},
                                           {"cols", count_text(img.n())},
                                           {"pixel_nm", format_double(img.pixel_size_nm())},
                                           {"layout", "row-major float64 little-endian"}});
}

ImageGrid2D read_image_dump(const fs::path& stem_in) {
  const fs::path stem = dump_stem(stem_in);
  const fs::path hdr = with_suffix(stem, ".hdr");
  const Header h = read_header(hdr);
  if (field(h, "type", hdr) != "image") throw IoError(hdr.string() + " is not an image dump");
  const std::size_t rows = field_count(h, "rows", hdr);
  const std::size_t cols = field_count(h, "cols", hdr);
  auto values = read_doubles(with_suffix(stem, ".raw"), rows * cols);
  return ImageGrid2D(Array2D(rows, cols, std::move(values)), field_double(h, "pixel_nm", hdr));
}

void write_sinogram_dump(const Sinogram& sino, const fs::path& stem) {
  write_doubles(with_suffix(stem, ".raw"), sino.data().values());
  std::string angles;
  for (double a : sino.angles_deg()) {
    if (!angles.empty()) angles += ' ';
    angles += format_double(a);
  }
  write_header(with_suffix(stem, ".hdr"),
               {{"type", "sinogram"},
                {"rows", count_text(sino.views())},
                {"cols", count_text(sino.m())},
                {"pitch_nm", format_double(sino.element_pitch_nm())},
                {"kind", std::string(to_string(sino.kind()))},
                {"splitting_nm", format_double(sino.splitting_nm())},
                {"layout", "row-major float64 little-endian"},
                {"angles_deg", angles}});
}

Sinogram read_sinogram_dump(const fs::path& stem_in) {
  const fs::path stem = dump_stem(stem_in);
  const fs::path hdr = with_suffix(stem, ".hdr");
  const Header h = read_header(hdr);
  if (field(h, "type", hdr) != "sinogram") throw IoError(hdr.string() + " is not a sinogram dump");
  const std::size_t rows = field_count(h, "rows", hdr);
  const std::size_t cols = field_count(h, "cols", hdr);
  std::vector<double> angles;
  std::istringstream as(field(h, "angles_deg", hdr));
  for (std::string tok; as >> tok;) {
    try {
      angles.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw IoError(hdr.string() + ": bad angle '" + tok + "'");
    }
  }
  auto values = read_doubles(with_suffix(stem, ".raw"), rows * cols);
  try {
    return Sinogram(Array2D(rows, cols, std::move(values)), std::move(angles),
                    field_double(h, "pitch_nm", hdr), sinogram_kind_from_string(field(h, "kind", hdr)),
                    field_double(h, "splitting_nm", hdr));
  } catch (const InvalidArgument& e) {
    throw IoError(hdr.string() + ": " + e.what());
  }
}

fs::path dump_stem(const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".hdr" || ext == ".raw" || ext == ".pgm") {
    fs::path p = path;
    return p.replace_extension();
  }
  return path;
}

std::string to_csv(const CsvTable& table) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cell(cells[i]);
    }
    return out + '\n';
  };
  std::string out = line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw InvalidArgument("csv row width differs from header");
    out += line(r);
  }
  return out;
}

void write_csv(const CsvTable& table, const fs::path& path) {
  const std::string text = to_csv(table);
  std::ofstream out = open_out(path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace npct
