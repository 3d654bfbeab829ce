#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "sni/io.hpp"
#include "sni/synthetic.hpp"
#include "support.hpp"

namespace sni {
namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sni_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(IoTest, GradientRoundTripIsFloatExact) {
  std::mt19937_64 rng(1);
  const GradientField g = testing::random_gradient(rng, 13, 7, 3.0);
  write_gradient(dir_ / "g.bin", g);
  const GradientField back = read_gradient(dir_ / "g.bin");
  ASSERT_EQ(back.width(), 13);
  ASSERT_EQ(back.height(), 7);
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    EXPECT_EQ(back.p[i], static_cast<double>(static_cast<float>(g.p[i])));
    EXPECT_EQ(back.q[i], static_cast<double>(static_cast<float>(g.q[i])));
  }
  std::ifstream in(dir_ / "g.bin", std::ios::binary);
  std::string magic;
  in >> magic;
  EXPECT_EQ(magic, "Gf");
}

TEST_F(IoTest, PfmRoundTripKeepsOrientationAndNan) {
  ScalarField f(5, 3);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.5 * static_cast<double>(i);
  f(4, 0) = kOutside;
  write_pfm(dir_ / "d.pfm", f);
  const ScalarField back = read_pfm(dir_ / "d.pfm");
  EXPECT_EQ(back(0, 0), 0.0);
  EXPECT_EQ(back(2, 1), 3.5);
  EXPECT_TRUE(std::isnan(back(4, 0)));
  // Bottom row is stored first.
  std::ifstream in(dir_ / "d.pfm", std::ios::binary);
  std::string magic;
  int w, h;
  double scale;
  in >> magic >> w >> h >> scale;
  in.get();
  float first;
  in.read(reinterpret_cast<char*>(&first), sizeof first);
  EXPECT_EQ(magic, "Pf");
  EXPECT_LT(scale, 0);
  EXPECT_EQ(first, static_cast<float>(f(0, 2)));
}

TEST_F(IoTest, MaskRoundTripPgmAndPng) {
  const DomainMask m = blob_mask(24, 20);
  for (const char* name : {"m.pgm", "m.png"}) {
    write_mask(dir_ / name, m);
    EXPECT_EQ(read_mask(dir_ / name), m) << name;
  }
}

TEST_F(IoTest, ImageFormats) {
  Grid<std::uint8_t> img(6, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<std::uint8_t>(i * 10);
  write_pgm(dir_ / "a.pgm", img);
  write_png_gray(dir_ / "a.png", img);
  const ScalarField a = read_image(dir_ / "a.pgm");
  const ScalarField b = read_image(dir_ / "a.png");
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_EQ(a[i], img[i]);
    EXPECT_EQ(b[i], img[i]);
  }
  // Plain ASCII P2 with a comment and 16-bit range.
  std::ofstream(dir_ / "b.pgm") << "P2\n# comment\n2 2\n1000\n0 250\n500 1000\n";
  const ScalarField c = read_image(dir_ / "b.pgm");
  EXPECT_EQ(c(1, 0), 250.0);
  EXPECT_EQ(c(1, 1), 1000.0);
  EXPECT_THROW(read_image(dir_ / "missing.pgm"), IoError);
  std::ofstream(dir_ / "junk.pgm") << "P7\n";
  EXPECT_THROW(read_image(dir_ / "junk.pgm"), IoError);
}

TEST_F(IoTest, LightingsNormalised) {
  std::ofstream(dir_ / "l.txt") << "# lx ly lz\n0 0 2\n3 0 4  # tilted\n\n0 1 1\n";
  const auto l = read_lightings(dir_ / "l.txt");
  ASSERT_EQ(l.size(), 3u);
  EXPECT_DOUBLE_EQ(l[0][2], 1.0);
  EXPECT_DOUBLE_EQ(l[1][0], 0.6);
  EXPECT_DOUBLE_EQ(l[1][2], 0.8);
  write_lightings(dir_ / "m.txt", l);
  const auto back = read_lightings(dir_ / "m.txt");
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(back[i][c], l[i][c], 1e-15);
  }
}

TEST(ErrorMap, EndpointsAndOutside) {
  ScalarField e(3, 1);
  e(0, 0) = 0;
  e(1, 0) = 1e6;
  DomainMask m = DomainMask::full(3, 1);
  m.set(2, 0, false);
  const auto img = error_colormap(e, m, 10.0);
  EXPECT_GT(img(0, 0)[2], 100);  // blue at zero
  EXPECT_EQ(img(0, 0)[0], 0);
  EXPECT_GT(img(1, 0)[0], 100);  // red at and above the cap
  EXPECT_EQ(img(1, 0)[2], 0);
  EXPECT_EQ(img(2, 0), (std::array<std::uint8_t, 3>{0, 0, 0}));
  EXPECT_THROW(error_colormap(e, m, 0.0), std::invalid_argument);
}

TEST(Gray8, SpansFullRange) {
  ScalarField f(3, 1);
  f(0, 0) = -2;
  f(1, 0) = 0;
  f(2, 0) = 2;
  const auto g = to_gray8(f, DomainMask::full(3, 1));
  EXPECT_EQ(g(0, 0), 0);
  EXPECT_EQ(g(1, 0), 128);
  EXPECT_EQ(g(2, 0), 255);
}

}  // namespace
}  // namespace sni
