#include <gtest/gtest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "test_util.hpp"

using namespace ctinpaint;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ctinpaint_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  fs::path path_;
};

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(Png, RoundTripIsByteIdentical) {
  TempDir tmp;
  std::mt19937 rng(1);
  for (int nc : {1, 3}) {
    RasterImage img(13, 7, nc);
    for (double& v : img.values())
      v = static_cast<double>(rng() % 256);
    const auto a = tmp.file("a.png"), b = tmp.file("b.png");
    io::save_image(img, a);
    const auto loaded = io::load_image(a);
    EXPECT_EQ(loaded, img);
    io::save_image(loaded, b);
    EXPECT_EQ(read_bytes(a), read_bytes(b));
  }
}

TEST(Png, RoundsHalfAwayFromZeroAndClamps) {
  RasterImage img(4, 1, 1);
  img.at(0, 0) = 254.5;
  img.at(0, 1) = 0.49;
  img.at(0, 2) = 300.0;
  img.at(0, 3) = -4.0;
  const auto back = io::decode_png(io::encode_png(img));
  EXPECT_EQ(back.at(0, 0), 255.0);
  EXPECT_EQ(back.at(0, 1), 0.0);
  EXPECT_EQ(back.at(0, 2), 255.0);
  EXPECT_EQ(back.at(0, 3), 0.0);
}

TEST(Png, SixteenBitIsRejected) {
  TempDir tmp;
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = 4;
  img.height = 3;
  img.format = PNG_FORMAT_LINEAR_Y;
  std::vector<png_uint_16> buf(12, 30000);
  const auto path = tmp.file("deep.png");
  ASSERT_TRUE(png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr));
  png_image_free(&img);
  EXPECT_THROW(io::load_image(path), IoError);
}

TEST(Png, Errors) {
  EXPECT_THROW(io::load_image("/nonexistent/x.png"), IoError);
  EXPECT_THROW(io::decode_png({1, 2, 3}), IoError);
  EXPECT_THROW(io::decode_png({}), IoError);
  EXPECT_THROW(io::encode_png(RasterImage(2, 2, 2)), IoError);
}

TEST(Mask, LuminanceThreshold) {
  RasterImage g(3, 1, 1);
  g.at(0, 0) = 127.0;
  g.at(0, 1) = 128.0;
  g.at(0, 2) = 255.0;
  const auto m = io::mask_from_image(g);
  EXPECT_EQ(m(0, 0), 0);
  EXPECT_EQ(m(0, 1), 1);
  EXPECT_EQ(m(0, 2), 1);

  RasterImage rgb(2, 1, 3);
  rgb.at(0, 0, 0) = 255.0; // pure red: luminance 76
  rgb.at(0, 1, 1) = 255.0; // pure green: luminance 150
  const auto mc = io::mask_from_image(rgb);
  EXPECT_EQ(mc(0, 0), 0);
  EXPECT_EQ(mc(0, 1), 1);
}

TEST(Mask, WhiteSquareOnBlackAndAllBlack) {
  TempDir tmp;
  const auto sq = ctinpaint::testing::block_mask(10, 10, 3, 6, 2, 5);
  io::save_image(io::mask_to_image(sq), tmp.file("m.png"));
  EXPECT_EQ(io::load_mask(tmp.file("m.png")), sq);
  io::save_image(RasterImage(10, 10, 1, 0.0), tmp.file("black.png"));
  EXPECT_THROW(build_domain(io::load_mask(tmp.file("black.png"))), InvalidArgument);
}

TEST(Tfld, RoundTripKeepsNaN) {
  TempDir tmp;
  Grid<double> g(5, 3, std::nan(""));
  g(1, 2) = 0.0;
  g(2, 4) = 127.5;
  g(0, 0) = 1e6;
  io::save_tfld(g, tmp.file("f.tfld"));
  const auto back = io::load_tfld(tmp.file("f.tfld"));
  ASSERT_TRUE(back.same_shape(g));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = g.values()[k], b = back.values()[k];
    EXPECT_TRUE((std::isnan(a) && std::isnan(b)) || a == b);
  }
}

TEST(Tfld, HeaderLayout) {
  const auto bytes = io::encode_tfld(Grid<double>(258, 3, 1.0));
  ASSERT_EQ(bytes.size(), io::kTfldHeaderSize + 4u * 258 * 3);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TFLD");
  EXPECT_EQ(bytes[4], 2);   // 258 little endian
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(bytes[8], 3);
  for (int k = 12; k < 16; ++k)
    EXPECT_EQ(bytes[k], 0);
  // 1.0f = 0x3f800000
  EXPECT_EQ(bytes[16], 0x00);
  EXPECT_EQ(bytes[19], 0x3f);
}

TEST(Tfld, RejectsBadData) {
  EXPECT_THROW(io::decode_tfld({'T', 'F', 'L'}), IoError);
  auto bytes = io::encode_tfld(Grid<double>(2, 2, 0.0));
  bytes.pop_back();
  EXPECT_THROW(io::decode_tfld(bytes), IoError);
  bytes = io::encode_tfld(Grid<double>(2, 2, 0.0));
  bytes[0] = 'X';
  EXPECT_THROW(io::decode_tfld(bytes), IoError);
  EXPECT_THROW(io::load_tfld("/nonexistent.tfld"), IoError);
}

TEST(StopSetJson, TwoPointCurve) {
  const auto p = io::parse_stopset_text(
      R"({"role":"stop","curves":[{"points":[[10,4],[10,8]],"t":127}]})", 20, 20);
  ASSERT_EQ(p.spec.curves.size(), 1u);
  EXPECT_EQ(p.spec.curves[0].t, 127.0);
  EXPECT_EQ(rasterize(p.spec)[0].size(), 5u);
  EXPECT_TRUE(p.warnings.empty());
}

TEST(StopSetJson, SkeletonIgnoresT) {
  const auto p = io::parse_stopset_text(
      R"({"role":"skeleton","curves":[{"points":[[1,1]],"t":5}]})", 4, 4);
  EXPECT_EQ(p.spec.role, StopSetRole::Skeleton);
  EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(StopSetJson, Errors) {
  const char* bad[] = {
      R"([1,2])",
      R"({"curves":[{"points":[[1,1]],"t":1}]})",
      R"({"role":"ridge","curves":[{"points":[[1,1]],"t":1}]})",
      R"({"role":"stop","curves":[]})",
      R"({"role":"stop"})",
      R"({"role":"stop","curves":[{"points":[],"t":1}]})",
      R"({"role":"stop","curves":[{"points":[[1]],"t":1}]})",
      R"({"role":"stop","curves":[{"points":[[1.5,2]],"t":1}]})",
      R"({"role":"stop","curves":[{"points":[[1,20]],"t":1}]})",
      R"({"role":"stop","curves":[{"points":[[1,2]]}]})",
      R"({"role":"stop","curves":[{"points":[[1,2]],"t":0}]})",
      R"({"role":"stop","curves":[{"points":[[1,2]],"t":-3}]})",
      R"({"role":"stop","curves":[{"points":[[1,2]],"t":"x"}]})",
      R"({"role": "stop", )",
  };
  for (const char* doc : bad)
    EXPECT_THROW(io::parse_stopset_text(doc, 10, 10), InvalidArgument) << doc;
  EXPECT_THROW(io::parse_stopset("/nonexistent.json", 10, 10), IoError);
}

TEST(StopSetJson, RoundTrip) {
  const StopSetSpec s{StopSetRole::Stop,
                      {{{{1, 2}, {5, 6}, {5, 9}}, 40.5}, {{{7, 7}}, 250.0}}};
  const auto back = io::parse_stopset_json(io::stopset_to_json(s), 10, 10).spec;
  EXPECT_EQ(io::stopset_to_json(back), io::stopset_to_json(s));
}

TEST(StopSetJson, SamplesParse) {
  for (const char* name : {"diagonal-arc.json", "junction-center.json", "stripes-skeleton.json",
                           "three-arcs-invalid.json", "three-arcs-valid.json"})
    EXPECT_NO_THROW(io::parse_stopset(std::string(CTINPAINT_SAMPLES) + "/" + name, 64, 64))
        << name;
}

namespace {

Grid<double> ramp_field(int w, int h) {
  Grid<double> f(w, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      f(i, j) = j;
  return f;
}

bool is_marker(const RasterImage& img, int i, int j) {
  return img.at(i, j, 0) == 255.0 && img.at(i, j, 1) == 0.0 && img.at(i, j, 2) == 0.0;
}

} // namespace

TEST(Contours, RampGivesParallelLines) {
  const RasterImage base(20, 10, 1, 90.0);
  const auto c = render_contours(ramp_field(20, 10), base, 5);
  ASSERT_EQ(c.levels.size(), 5u);
  std::set<int> cols;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 20; ++j)
      if (is_marker(c.image, i, j))
        cols.insert(j);
  EXPECT_EQ(cols, (std::set<int>{3, 6, 9, 12, 15}));
  for (int col : cols)
    for (int i = 0; i < 10; ++i)
      EXPECT_TRUE(is_marker(c.image, i, col));
}

TEST(Contours, ConstantFieldLeavesBaseUnchanged) {
  RasterImage base(6, 6, 3, 40.0);
  const auto c = render_contours(Grid<double>(6, 6, 2.0), base, 4);
  EXPECT_EQ(c.image, base);
  EXPECT_EQ(c.warnings.size(), 1u);
  EXPECT_THROW(render_contours(Grid<double>(6, 6, 2.0), base, 0), InvalidArgument);
  EXPECT_THROW(render_contours(Grid<double>(5, 6, 2.0), base, 1), InvalidArgument);
}

TEST(Contours, RadialFieldGivesRings) {
  const int n = 41;
  Grid<double> f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f(i, j) = std::hypot(i - 20.0, j - 20.0);
  const auto c = render_contours(f, RasterImage(n, n, 1, 0.0), 6);
  std::vector<int> per_level(c.levels.size(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!is_marker(c.image, i, j))
        continue;
      // every marker sits just inside one level circle
      int hit = -1;
      for (std::size_t k = 0; k < c.levels.size(); ++k)
        if (f(i, j) < c.levels[k] && f(i, j) > c.levels[k] - 1.0)
          hit = static_cast<int>(k);
      ASSERT_GE(hit, 0) << i << "," << j;
      ++per_level[static_cast<std::size_t>(hit)];
    }
  for (std::size_t k = 0; k < per_level.size(); ++k) {
    if (c.levels[k] > 19.0)
      continue; // clipped by the image
    const double circumference = 2.0 * std::numbers::pi * c.levels[k];
    EXPECT_GT(per_level[k], 0.6 * circumference);
  }
}

TEST(Contours, NonMarkerPixelsUnchanged) {
  std::mt19937 rng(3);
  for (int nc : {1, 3}) {
    const auto base = ctinpaint::testing::random_image(rng, 30, 20, nc);
    Grid<double> f(30, 20);
    for (double& v : f.values())
      v = static_cast<double>(rng() % 1000);
    f(3, 3) = std::nan(""); // undefined cells are skipped
    const auto c = render_contours(f, base, 7);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 30; ++j)
        if (!is_marker(c.image, i, j)) {
          for (int ch = 0; ch < 3; ++ch)
            EXPECT_EQ(c.image.at(i, j, ch), base.at(i, j, nc == 3 ? ch : 0));
        }
  }
}
