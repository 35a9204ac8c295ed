#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "npct/config.hpp"
#include "npct/error.hpp"
#include "npct/io.hpp"
#include "support.hpp"

using namespace npct;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path configs_dir() { return std::filesystem::path(NPCT_SOURCE_DIR) / "configs"; }

}  // namespace

TEST_SUITE("config-io") {
  TEST_CASE("json round trip of the default config") {
    const ExperimentConfig cfg;
    const json j = config_to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(config_hash(back) == config_hash(cfg));
  }

  TEST_CASE("shipped config files describe the built-in defaults") {
    const auto cfg = load_config(configs_dir() / "default.json");
    CHECK(config_hash(cfg) == config_hash(ExperimentConfig{}));
    const auto sweep = load_config(configs_dir() / "sweep.json");
    CHECK(sweep.splitting_nm.size() == 8);
  }

  TEST_CASE("overrides") {
    json j = config_to_json(ExperimentConfig{});
    apply_override(j, "splitting=[20,202,204,500]");
    apply_override(j, "noise.seed=7");
    apply_override(j, "recon.window=hann");
    apply_override(j, "pwls.alpha=2.5");
    const auto cfg = config_from_json(j);
    CHECK(cfg.splitting_nm == std::vector<double>{20, 202, 204, 500});
    CHECK(cfg.noise.seed == 7);
    CHECK(cfg.recon.window == FrequencyWindow::Hann);
    CHECK(cfg.pwls.alpha == 2.5);
    CHECK_THROWS_AS(apply_override(j, "noise.sead=7"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
  }

  TEST_CASE("scalar splitting and strict keys") {
    CHECK(config_from_json(json{{"splitting", 202}}).splitting_nm == std::vector<double>{202});
    CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"noise", {{"photons", 1}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"phantom_n", -4}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"gamma", "small"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"splitting", json::array()}}), ConfigError);
  }

  TEST_CASE("missing config file names the path") {
    try {
      load_config("/nonexistent/dir/exp.json");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/exp.json") != std::string::npos);
    }
  }

  TEST_CASE("phantom delta override and energy-dependent defaults") {
    const auto a = config_from_json(json{{"phantom", {{"delta", {{"PS", 4e-6}}}}}});
    CHECK(a.phantom.delta_table.at(Material::Polystyrene) == 4e-6);
    const auto b = config_from_json(json{{"geometry", {{"energy_keV", 16.0}}}});
    CHECK(b.phantom.delta_table.at(Material::Protein) ==
          doctest::Approx(default_delta_table(8.0).at(Material::Protein) / 4.0));
  }

  TEST_CASE("window mapping") {
    CHECK(window_value(0.0, kImageWindow) == 0);
    CHECK(window_value(1.2e-5, kImageWindow) == 65535);
    CHECK(window_value(5e-5, kImageWindow) == 65535);
    CHECK(window_value(-1.0, kImageWindow) == 0);
    std::uint16_t last = 0;
    for (double v = -1e-6; v < 1.4e-5; v += 1e-8) {
      const auto q = window_value(v, kImageWindow);
      CHECK(q >= last);
      last = q;
    }
    CHECK_THROWS_AS(window_value(0.0, DisplayWindow{1.0, 1.0}), InvalidArgument);
  }

  TEST_CASE("image files") {
    const auto dir = testing::scratch_dir("image");
    Array2D a(3, 3, 0.0);
    a(1, 1) = 1.2e-5;
    write_image(ImageGrid2D(a, 10.0), dir / "img");
    const std::string pgm = slurp(dir / "img.pgm");
    const std::string head = "P5\n3 3\n65535\n";
    REQUIRE(pgm.size() == head.size() + 18);
    CHECK(pgm.substr(0, head.size()) == head);
    CHECK(static_cast<unsigned char>(pgm[head.size() + 8]) == 0xff);
    CHECK(static_cast<unsigned char>(pgm[head.size() + 9]) == 0xff);
    CHECK(pgm[head.size()] == 0);

    write_image(ImageGrid2D(Array2D(4, 4, 0.0), 10.0), dir / "flat");
    const std::string flat = slurp(dir / "flat.pgm");
    for (std::size_t i = head.size(); i < flat.size(); ++i) CHECK(flat[i] == 0);
  }

  TEST_CASE("dumps reload bit for bit") {
    const auto dir = testing::scratch_dir("dump");
    std::mt19937_64 rng(1);
    Array2D a(17, 17);
    for (auto& v : a.values()) v = std::normal_distribution<double>(0, 1e-5)(rng);
    const ImageGrid2D img(a, 7.5);
    write_image_dump(img, dir / "x");
    CHECK(read_image_dump(dir / "x") == img);
    CHECK(read_image_dump(dir / "x.hdr") == img);

    Array2D s(6, 9);
    for (auto& v : s.values()) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    const Sinogram sino(s, uniform_angles_deg(6, 60.0), 10.0, SinogramKind::Split, 202.0);
    write_sinogram_dump(sino, dir / "s");
    CHECK(read_sinogram_dump(dir / "s.raw") == sino);
    CHECK_THROWS_AS(read_image_dump(dir / "s"), IoError);
    CHECK_THROWS_AS(read_image_dump(dir / "missing"), IoError);
  }

  TEST_CASE("unwritable paths") {
    CHECK_THROWS_AS(write_csv(CsvTable{{"a"}, {}}, "/proc/npct/forbidden.csv"), IoError);
  }

  TEST_CASE("csv") {
    const auto dir = testing::scratch_dir("csv");
    write_csv(CsvTable{{"delta_s_nm", "snr"}, {}}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "delta_s_nm,snr\n");

    CsvTable t{{"a", "b"}, {}};
    for (int i = 0; i < 4; ++i) t.rows.push_back({format_double(i), format_double(0.1 * i)});
    write_csv(t, dir / "four.csv");
    const std::string text = slurp(dir / "four.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(text.find('\r') == std::string::npos);

    CHECK(to_csv(CsvTable{{"x"}, {{"a,b"}, {"say \"hi\""}}}) == "x\n\"a,b\"\n\"say \"\"hi\"\"\"\n");
    CHECK(format_double(std::nan("")) == "nan");
  }

  TEST_CASE("17 significant digits reload exactly") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
      const double v = std::ldexp(std::uniform_real_distribution<double>(-1, 1)(rng),
                                  std::uniform_int_distribution<int>(-60, 60)(rng));
      CHECK(std::stod(format_double(v)) == v);
    }
  }
}
