#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace ctinpaint;
using ctinpaint::testing::block_mask;

namespace {

RasterImage image_from(int w, int h, auto&& f) {
  RasterImage img(w, h, 1);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      img.at(i, j) = f(i, j);
  return img;
}

// Up to sign, as g and -g are equivalent.
double axis_angle_deg(Vec2 a, Vec2 b) {
  const double ang = angle_deg(a, b);
  return std::min(ang, 180.0 - ang);
}

} // namespace

TEST(GaussianTaps, SymmetricUnnormalized) {
  const auto t = gaussian_taps(1.5, 6);
  ASSERT_EQ(t.size(), 13u);
  EXPECT_EQ(t[6], 1.0);
  for (int d = 1; d <= 6; ++d) {
    EXPECT_EQ(t[6 + d], t[6 - d]);
    EXPECT_NEAR(t[6 + d], std::exp(-d * d / 4.5), 1e-15);
  }
}

TEST(MaskedSmooth, ConstantStaysConstant) {
  std::mt19937 rng(1);
  Grid<double> v(20, 16, 128.0);
  Mask known(20, 16, 0);
  for (auto& k : known.values())
    k = rng() % 3 == 0;
  known(8, 8) = 1;
  const auto s = masked_gaussian_smooth(v, known, 1.3);
  for (double x : s.values())
    if (!std::isnan(x)) {
      EXPECT_NEAR(x, 128.0, 1e-12);
    }
}

TEST(MaskedSmooth, SmallSigmaIsNearIdentity) {
  Grid<double> v(24, 24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j)
      v(i, j) = 0.5 + 0.5 * std::sin(0.4 * i) * std::cos(0.3 * j);
  const auto s = masked_gaussian_smooth(v, Mask(24, 24, 1), 0.25);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j)
      EXPECT_NEAR(s(i, j), v(i, j), 1e-3);
}

TEST(MaskedSmooth, HalfPlaneRampAgainstDirectSummation) {
  const int w = 60, h = 30;
  const double sigma = 1.5;
  Grid<double> v(w, h);
  Mask known(w, h, 0);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      v(i, j) = j;
      known(i, j) = j < 30;
    }
  const auto s = masked_gaussian_smooth(v, known, sigma);
  const int r = static_cast<int>(std::ceil(4 * sigma));
  auto direct = [&](int i, int j) {
    double num = 0, den = 0;
    for (int p = i - r; p <= i + r; ++p)
      for (int q = j - r; q <= j + r; ++q)
        if (v.contains(p, q) && known(p, q)) {
          const double k = std::exp(-((p - i) * (p - i) + (q - j) * (q - j)) / (2 * sigma * sigma));
          num += k * v(p, q);
          den += k;
        }
    return num / den;
  };
  for (PixelCoord p : {PixelCoord{15, 10}, PixelCoord{15, 28}, PixelCoord{15, 31},
                       PixelCoord{3, 29}, PixelCoord{15, 34}})
    EXPECT_NEAR(s(p.i, p.j), direct(p.i, p.j), 1e-9) << p.i << "," << p.j;
  EXPECT_NEAR(s(15, 10), 10.0, 1e-9);   // far from the edge: no bias
  EXPECT_LT(s(15, 29), 29.0);           // pulled toward the known side
  EXPECT_TRUE(std::isnan(s(15, 40)));   // no known pixel within 4 sigma
}

TEST(MaskedSmooth, StaysInKnownRange) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto img = ctinpaint::testing::random_image(rng, 18, 14, 1);
    Mask known(18, 14, 0);
    for (auto& k : known.values())
      k = rng() % 2;
    double lo = 255, hi = 0;
    for (int i = 0; i < 14; ++i)
      for (int j = 0; j < 18; ++j)
        if (known(i, j)) {
          lo = std::min(lo, img.at(i, j));
          hi = std::max(hi, img.at(i, j));
        }
    const auto s = masked_gaussian_smooth(img.channel(0), known, 1.0 + trial * 0.3);
    for (double x : s.values())
      if (!std::isnan(x)) {
        EXPECT_GE(x, lo - 1e-9);
        EXPECT_LE(x, hi + 1e-9);
      }
  }
}

TEST(MaskedSmooth, Errors) {
  EXPECT_THROW(masked_gaussian_smooth(Grid<double>(3, 3), Mask(3, 3, 1), 0.0), InvalidArgument);
  EXPECT_THROW(masked_gaussian_smooth(Grid<double>(3, 3), Mask(4, 3, 1), 1.0), InvalidArgument);
}

TEST(StructureTensor, ConstantImageIsZero) {
  const RasterImage img(30, 30, 1, 77.0);
  const auto s = structure_tensor(img, Mask(30, 30, 1), {15, 15}, {0.5, 5.0});
  EXPECT_NEAR(s.a, 0.0, 1e-20);
  EXPECT_NEAR(s.b, 0.0, 1e-20);
  EXPECT_NEAR(s.c, 0.0, 1e-20);
  EXPECT_EQ(coherence_vector(s).g, (Vec2{}));
}

TEST(StructureTensor, RampAlongColumns) {
  const auto img = image_from(40, 40, [](int, int j) { return 10.0 * j; });
  const auto s = structure_tensor(img, Mask(40, 40, 1), {20, 20}, {0.5, 3.0});
  // away from the image border the smoothed ramp has slope exactly 10
  EXPECT_NEAR(s.a, 0.0, 1e-9);
  EXPECT_NEAR(s.b, 0.0, 1e-9);
  EXPECT_NEAR(s.c, 100.0, 1e-6);
  const auto g = coherence_vector(s).g;
  EXPECT_NEAR(g.i, 1.0, 1e-12);
  EXPECT_NEAR(g.j, 0.0, 1e-6);
}

TEST(StructureTensor, DiagonalEdge) {
  const auto img = image_from(40, 40, [](int i, int j) { return j > i ? 255.0 : 0.0; });
  for (PixelCoord x : {PixelCoord{20, 20}, PixelCoord{12, 13}, PixelCoord{25, 24}}) {
    const auto g = coherence_vector(structure_tensor(img, Mask(40, 40, 1), x, {0.5, 5.0})).g;
    EXPECT_LE(axis_angle_deg(g, {1.0, 1.0}), 5.0);
  }
}

TEST(StructureTensor, UsesOnlyKnownPixels) {
  // unknown pixels carry garbage that must not leak into the tensor
  auto img = image_from(30, 30, [](int i, int) { return 3.0 * i; });
  Mask known(30, 30, 1);
  for (int i = 0; i < 30; ++i)
    for (int j = 18; j < 30; ++j) {
      known(i, j) = 0;
      img.at(i, j) = (i * 7 + j * 13) % 255;
    }
  const auto g = coherence_vector(structure_tensor(img, known, {15, 17}, {0.5, 4.0})).g;
  EXPECT_LE(axis_angle_deg(g, {0.0, 1.0}), 1e-6);
}

TEST(StructureTensor, NoSamplesGivesZero) {
  const RasterImage img(10, 10, 1, 5.0);
  Mask known(10, 10, 0);
  known(5, 5) = 1;
  const auto s = structure_tensor(img, known, {5, 5}, {0.5, 2.0});
  EXPECT_EQ(s.a, 0.0);
  EXPECT_EQ(s.c, 0.0);
}

TEST(StructureTensor, PositiveSemidefinite) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto img = ctinpaint::testing::random_image(rng, 25, 25, trial % 2 ? 3 : 1);
    Mask known(25, 25, 0);
    for (auto& k : known.values())
      k = rng() % 4 != 0;
    const auto s = structure_tensor(img, known, {12, 12}, {0.5 + 0.1 * trial, 2.0});
    EXPECT_GE(s.lambda_min(), -1e-12 * std::max(1.0, s.trace()));
    EXPECT_GE(s.a, 0.0);
    EXPECT_GE(s.c, 0.0);
  }
}

TEST(StructureTensor, RotationByNinetyDegreesRotatesGuidance) {
  const int n = 41;
  auto u = [](double i, double j) { return 127.5 + 100.0 * std::sin(0.3 * i + 0.7 * j); };
  const auto img = image_from(n, n, [&](int i, int j) { return u(i, j); });
  // quarter turn: (i, j) -> (j, n - 1 - i)
  const auto rot = image_from(n, n, [&](int i, int j) { return u(n - 1 - j, i); });
  const TensorParams tp{0.5, 5.0};
  const auto g = coherence_vector(structure_tensor(img, Mask(n, n, 1), {20, 20}, tp)).g;
  const auto gr = coherence_vector(structure_tensor(rot, Mask(n, n, 1), {20, 20}, tp)).g;
  EXPECT_LE(axis_angle_deg(gr, {g.j, -g.i}), 2.0);
}

TEST(CoherenceVector, Examples) {
  const auto a = coherence_vector({1.0, 0.0, 0.0});
  EXPECT_EQ(a.g, (Vec2{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(a.coherence, 1.0);
  EXPECT_EQ(coherence_vector({0.0, 0.0, 0.0}).g, (Vec2{}));
  const auto b = coherence_vector({2.0, 1.0, 2.0}).g;
  EXPECT_NEAR(b.i, 1.0 / std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(b.j, -1.0 / std::numbers::sqrt2, 1e-12);
  EXPECT_EQ(coherence_vector({3.0, 0.0, 3.0}).g, (Vec2{})); // isotropic
}

TEST(CoherenceVector, UnitAndSignNormalized) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const SymTensor2 s{x * x + z * z, x * y, y * y + 0.1 * z * z};
    const auto g = coherence_vector(s).g;
    EXPECT_NEAR(norm(g), 1.0, 1e-12);
    EXPECT_TRUE(g.i > 0.0 || (g.i == 0.0 && g.j > 0.0));
    // eigenvector of the smaller eigenvalue
    const Vec2 sg{s.a * g.i + s.b * g.j, s.b * g.i + s.c * g.j};
    EXPECT_NEAR(sg.i, s.lambda_min() * g.i, 1e-9 * std::max(1.0, s.trace()));
    EXPECT_NEAR(sg.j, s.lambda_min() * g.j, 1e-9 * std::max(1.0, s.trace()));
  }
}

TEST(CoherenceVector, ScaleInvariant) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(rng), y = u(rng);
    const SymTensor2 s{x * x + 1.0, x * y, y * y};
    const auto g = coherence_vector(s).g;
    for (double c : {0.25, 2.0, 1024.0})
      EXPECT_EQ(coherence_vector({c * s.a, c * s.b, c * s.c}).g, g);
    for (double c : {0.3, 7.0, 1e6}) {
      const auto gc = coherence_vector({c * s.a, c * s.b, c * s.c}).g;
      EXPECT_NEAR(gc.i, g.i, 1e-12);
      EXPECT_NEAR(gc.j, g.j, 1e-12);
    }
  }
}

namespace {

PixelOrder block_order() {
  const auto d = build_domain(block_mask(9, 9, 3, 5, 3, 5));
  return serialize_pixels(distance_to_boundary(d), d);
}

} // namespace

TEST(KnownMaskAt, FirstLastAndMiddle) {
  const auto d = build_domain(block_mask(9, 9, 3, 5, 3, 5));
  const auto order = block_order();
  const TensorParams tp{0.5, 1.0};
  auto known_at = [&](std::size_t k, int i, int j) {
    const auto w = known_mask_at(k, d, order, tp);
    return w.known(i - w.origin.i, j - w.origin.j) != 0;
  };
  for (PixelCoord p : d.pixels())
    EXPECT_FALSE(known_at(0, p.i, p.j));
  EXPECT_TRUE(known_at(0, 2, 2));
  for (PixelCoord p : d.pixels())
    EXPECT_EQ(known_at(8, p.i, p.j), (p != PixelCoord{4, 4}));
  // entry 4 is (4,5); ring entries 0..3 are known
  EXPECT_TRUE(known_at(4, 4, 3));
  EXPECT_FALSE(known_at(4, 4, 5));
  EXPECT_FALSE(known_at(4, 5, 3));
}

TEST(KnownMaskAt, WindowSizeAndOutsideCells) {
  const auto d = build_domain(block_mask(9, 9, 3, 5, 3, 5));
  const auto order = block_order();
  const TensorParams tp{0.5, 5.0};
  const auto w = known_mask_at(0, d, order, tp);
  EXPECT_EQ(w.known.width(), 2 * tp.window_radius() + 1);
  EXPECT_EQ(w.known(0, 0), 0); // outside the image
}

TEST(BoundaryGuidance, VerticalBoundaryNormal) {
  const auto d = build_domain(block_mask(20, 20, 0, 19, 10, 19));
  const auto img = image_from(20, 20, [](int, int j) { return 12.0 * j; });
  const auto samples = boundary_guidance(img, d, {0.5, 3.0});
  ASSERT_EQ(samples.size(), 20u);
  for (const auto& s : samples) {
    EXPECT_EQ(s.pixel.j, 10);
    EXPECT_EQ(s.normal, (Vec2{0.0, 1.0}));
    // level lines run along the columns: g orthogonal to N
    EXPECT_NEAR(dot(s.guidance, s.normal), 0.0, 1e-6);
  }
}

TEST(BoundaryGuidance, ConstantDataGivesNoGuidance) {
  const auto d = build_domain(block_mask(20, 20, 5, 14, 5, 14));
  const auto samples = boundary_guidance(RasterImage(20, 20, 1, 90.0), d, {0.5, 3.0});
  for (const auto& s : samples) {
    EXPECT_EQ(s.guidance, (Vec2{}));
    // central differences cancel at the four corners
    const bool corner = (s.pixel.i == 5 || s.pixel.i == 14) && (s.pixel.j == 5 || s.pixel.j == 14);
    EXPECT_NEAR(norm(s.normal), corner ? 0.0 : 1.0, 1e-12);
  }
}
