#include <gtest/gtest.h>

#include "said/core.hpp"
#include "test_support.hpp"

using namespace said;
using testing_support::random_plane;

TEST(Plane, RejectsDegenerateShapes) {
  EXPECT_THROW(Plane(0, 3), ParameterError);
  EXPECT_THROW(Plane(2, 2, std::vector<double>(3)), ContractError);
  EXPECT_NO_THROW(Plane(2, 2, std::vector<double>(4)));
}

TEST(Image, ChannelCountFollowsColorspace) {
  EXPECT_EQ(Image(4, 3, ColorSpace::Gray).channels(), 1u);
  EXPECT_EQ(Image(4, 3, ColorSpace::RGB).channels(), 3u);
  EXPECT_THROW(Image({Plane(2, 2), Plane(2, 2)}, ColorSpace::RGB), ContractError);
  EXPECT_THROW(Image({Plane(2, 2), Plane(2, 3), Plane(2, 2)}, ColorSpace::RGB), ContractError);
}

TEST(ToLuma, GrayIsIdentity) {
  const Plane p = random_plane(5, 4, 1);
  EXPECT_EQ(to_luma(Image(p)), p);
  // idempotent on gray
  EXPECT_EQ(to_luma(Image(to_luma(Image(p)))), p);
}

TEST(ToLuma, Bt601Weights) {
  Image img(1, 1, ColorSpace::RGB);
  img.channel(0)(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(to_luma(img)(0, 0), 0.299);

  for (double v : {0.0, 0.25, 0.5, 1.0}) {
    Image g(1, 1, ColorSpace::RGB, v);
    EXPECT_NEAR(to_luma(g)(0, 0), v, 1e-15);
  }
}

TEST(ToLuma, BoundedByChannelExtremes) {
  const Image img = testing_support::random_rgb(16, 16, 7);
  const Plane y = to_luma(img);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = img.channel(0).samples()[i], g = img.channel(1).samples()[i], b = img.channel(2).samples()[i];
    EXPECT_GE(y.samples()[i], std::min({r, g, b}) - 1e-15);
    EXPECT_LE(y.samples()[i], std::max({r, g, b}) + 1e-15);
  }
}

TEST(ClampUnit, ClampsAndIsIdempotentMonotone) {
  Plane p(3, 1, std::vector<double>{0.5, -0.2, 1.7});
  const Plane c = clamp_unit(p);
  EXPECT_EQ(c(0, 0), 0.5);
  EXPECT_EQ(c(1, 0), 0.0);
  EXPECT_EQ(c(2, 0), 1.0);
  EXPECT_EQ(clamp_unit(c), c);

  const Plane a = random_plane(32, 1, 3, -1.0, 2.0);
  Plane b = a;
  for (auto& s : b.samples()) s += 0.3;
  const Plane ca = clamp_unit(a), cb = clamp_unit(b);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(ca.samples()[i], cb.samples()[i]);
}

TEST(Reflect101, MirrorsWithoutRepeatingTheEdge) {
  EXPECT_EQ(reflect101(-1, 5), 1u);
  EXPECT_EQ(reflect101(-2, 5), 2u);
  EXPECT_EQ(reflect101(5, 5), 3u);
  EXPECT_EQ(reflect101(6, 5), 2u);
  EXPECT_EQ(reflect101(-7, 3), 1u);  // far outside: keeps bouncing
  EXPECT_EQ(reflect101(-3, 1), 0u);
  for (std::ptrdiff_t i = -20; i < 20; ++i) EXPECT_EQ(reflect101(i, 4), static_cast<std::size_t>(oracle::mirror(int(i), 4)));
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (int threads : {1, 3, 8}) {
    set_num_threads(threads);
    std::vector<int> hits(101, 0);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  set_num_threads(1);
}
