#include <gtest/gtest.h>

#include <filesystem>

#include "wfset/config.hpp"
#include "wfset/error.hpp"
#include "wfset/io.hpp"

using namespace wfset;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return "";
}

}  // namespace

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, SpectrumRows) {
  const SampleGrid g{1, 8, 1.0};
  const std::string csv = spectrum_csv(dft(ComplexVec::Ones(8), g));
  EXPECT_EQ(csv.rfind("k,re,im\r\n0,", 0), 0u);
  EXPECT_NE(csv.find("\r\n-4,"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(Binary, RoundTripAndErrors) {
  BinaryArray a{{2, 3}, {}};
  for (int i = 0; i < 6; ++i) a.values.emplace_back(i * 0.1, -i);
  const std::string bytes = encode_binary(a);
  EXPECT_EQ(bytes.size(), 4u + 4 + 4 + 16 + 6 * 16);
  EXPECT_EQ(bytes.substr(0, 4), "WFSB");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1);  // little-endian version
  const BinaryArray b = decode_binary(bytes);
  EXPECT_EQ(b.sizes, a.sizes);
  EXPECT_EQ(b.values, a.values);
  EXPECT_THROW(decode_binary("XXXX" + bytes.substr(4)), Error);
  EXPECT_THROW(decode_binary(bytes.substr(0, bytes.size() - 3)), Error);
  std::string v2 = bytes;
  v2[4] = 2;
  EXPECT_THROW(decode_binary(v2), Error);
  a.values.pop_back();
  EXPECT_THROW(encode_binary(a), Error);
}

TEST(Files, AtomicWrite) {
  const fs::path dir = fs::temp_directory_path() / "wfset_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(fs::exists(path + ".tmp"));
  EXPECT_THROW(write_atomic((dir / "missing" / "x.txt").string(), "x"), Error);
  EXPECT_THROW(read_file((dir / "nope").string()), Error);
  fs::remove_all(dir);
}

TEST(Svg, OnePanelPerPointAndK) {
  WavefrontReport r;
  r.atom = "demo";
  r.params = default_params(1);
  r.points = {point1(0.0), point1(1.0)};
  Cell c;
  c.detector = Detector::WF_FL;
  c.k = 0.5;
  c.verdict = Verdict::Singular;
  r.cells.push_back(c);
  const std::string svg = svg_rose(r);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  std::size_t panels = 0;
  for (auto pos = svg.find("<g>"); pos != std::string::npos; pos = svg.find("<g>", pos + 1)) ++panels;
  EXPECT_EQ(panels, 2u * r.params.k_grid.size());
  EXPECT_NE(svg.find("#d62728"), std::string::npos);
  EXPECT_NE(svg.find("#999999"), std::string::npos);
}

TEST(Config, MinimalAndOverrides) {
  const AnalysisConfig c = parse_config(R"({"atom": "jump", "points": [0.25, -0.75]})");
  EXPECT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.params.dim, 1);
  EXPECT_EQ(c.outputs.json, "report.json");

  const AnalysisConfig o = parse_config(R"({
    "atom": {"kind": "half_plane"},
    "points": [[0, 0]],
    "s": 3, "p": "inf", "q": 1,
    "k_grid": [1, 2],
    "cones": {"kind": "equiangular", "count": 8},
    "lattice": {"a": 1, "b": 1.5},
    "eps": [1],
    "outputs": {"json": "a.json", "csv": "a.csv", "svg": null}
  })");
  EXPECT_EQ(o.params.dim, 2);
  EXPECT_EQ(o.params.s, 3.0);
  EXPECT_TRUE(std::isinf(o.params.p));
  EXPECT_EQ(o.params.cover.size(), 8u);
  EXPECT_EQ(o.params.frequency_step, 1.5);
  EXPECT_TRUE(o.outputs.svg.empty());
}

TEST(Config, ErrorsCarryLines) {
  EXPECT_NE(config_error("{\"atom\": \"jump\",\n \"points\": [0],\n \"colour\": 1}").find("cfg.json:3:"),
            std::string::npos);
  EXPECT_NE(config_error("{\"atom\": \"jump\",\n\n \"points\": [0],,}").find("cfg.json:3:"), std::string::npos);
  EXPECT_NE(config_error(R"({"atom": "jump", "points": [0], "lattice": {"a": 2, "b": 4}})").find("critical density"),
            std::string::npos);
  config_error(R"({"points": [0]})");
  config_error(R"({"atom": "jump", "points": []})");
  config_error(R"({"atom": "jump", "points": [0], "k_grid": [2, 1]})");
  config_error(R"({"atom": "jump", "points": [0], "s": 1})");
  config_error(R"({"atom": "jump", "points": [0], "eps": [1.5]})");
  config_error(R"({"atom": "jump", "points": [[0, 1]]})");
  config_error(R"({"atom": "jump", "points": [0], "windows": {"cutoff": {"kind": "gaussian", "width": 1}}})");
  config_error(R"({"atom": "jump", "points": [0], "lattice": {"a": 1, "b": 3.5}})");
  EXPECT_EQ(line_of_key("{\n\"a\": 1,\n\"b\": 2}", "b"), 3);
  EXPECT_THROW(load_config("/nonexistent/config.json"), Error);
}
