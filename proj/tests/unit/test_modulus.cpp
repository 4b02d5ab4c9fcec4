#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "wgb/errors.hpp"
#include "wgb/modulus.hpp"

using namespace wgb;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Modulus, PowerValues) {
  const auto g = Modulus::power(0.5);
  EXPECT_DOUBLE_EQ(g(4.0), 2.0);
  EXPECT_EQ(g(0.0), 0.0);
  EXPECT_EQ(g(-1.0), 0.0);
  EXPECT_TRUE(std::isinf(g.slope_at_zero()));
  EXPECT_EQ(Modulus::power(1.0).slope_at_zero(), 1.0);
  EXPECT_EQ(g.label(), "power:0.5");
  EXPECT_THROW(Modulus::power(1.5), DomainError);
  EXPECT_THROW(Modulus::power(0.0), DomainError);
}

TEST(Modulus, ParseErrorsAreConfigErrors) {
  EXPECT_EQ(Modulus::parse("power:1").exponent(), 1.0);
  EXPECT_THROW(Modulus::parse("power"), ConfigError);
  EXPECT_THROW(Modulus::parse("power:abc"), ConfigError);
  EXPECT_THROW(Modulus::parse("power:2"), ConfigError);
  EXPECT_THROW(Modulus::parse("log:1"), ConfigError);
  EXPECT_THROW(Modulus::parse("table:/nonexistent/file.csv"), IoError);
}

TEST(Modulus, TableInterpolatesAndSaturates) {
  const auto g = Modulus::table({0.5, 1.0}, {1.0, 1.5});
  EXPECT_DOUBLE_EQ(g(0.25), 0.5);
  EXPECT_DOUBLE_EQ(g(0.75), 1.25);
  EXPECT_DOUBLE_EQ(g(7.0), 1.5);
  EXPECT_DOUBLE_EQ(g.slope_at_zero(), 2.0);
  EXPECT_FALSE(g.is_zero());
  EXPECT_EQ(g.label(), "table:2");
}

TEST(Modulus, TableFromFile) {
  const auto p = temp_file("wgb_modulus.csv", "# t,g\n0.5,0.5\n1,0.75\n");
  const auto g = Modulus::parse("table:" + p.string());
  EXPECT_DOUBLE_EQ(g(0.75), 0.625);
  const auto bad = temp_file("wgb_modulus_bad.csv", "0.5;0.5\n");
  EXPECT_THROW(Modulus::parse("table:" + bad.string()), IoError);
}

TEST(Modulus, RejectsNonSubadditiveAndDecreasing) {
  // convex start: g(2t) > 2 g(t)
  EXPECT_THROW(Modulus::table({1.0, 2.0}, {0.1, 1.0}), DomainError);
  EXPECT_THROW(Modulus::table({1.0, 2.0}, {1.0, 0.5}), DomainError);
  EXPECT_THROW(Modulus::table({1.0, 1.0}, {1.0, 1.0}), DomainError);
}

TEST(Modulus, PowersAreSubadditive) {
  for (double p : {0.1, 0.5, 0.9, 1.0}) EXPECT_NO_THROW(Modulus::power(p).validate());
}
