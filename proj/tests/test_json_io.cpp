#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "holext/json_io.hpp"

using namespace holext;
using io::json;

namespace {

std::vector<Complex> circle(std::size_t n) {
  std::vector<Complex> pts;
  for (std::size_t k = 0; k < n; ++k)
    pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
  return pts;
}

}  // namespace

TEST(Dump, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  json arr = json::array();
  std::vector<double> values{0.1, 1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, -0.0, 2.0};
  for (int i = 0; i < 1000; ++i) values.push_back(u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20));
  for (double v : values) arr.push_back(v);
  const auto text = io::dump(arr);
  const auto back = json::parse(text);
  ASSERT_EQ(back.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ASSERT_TRUE(back[i].is_number_float()) << text;
    EXPECT_EQ(back[i].get<double>(), values[i]);
  }
}

TEST(Dump, FormatsAndOrdering) {
  json j;
  j["b"] = 0.1;
  j["a"] = 2.0;
  j["c"] = json::array({1.0, 0.0});
  j["d"] = 3;
  const auto text = io::dump(j, -1);
  EXPECT_EQ(text, R"({"a":2.0,"b":0.10000000000000001,"c":[1.0,0.0],"d":3})");
}

TEST(Dump, NonFiniteMarkers) {
  json j;
  io::put_real(j, "x", std::numeric_limits<double>::infinity());
  io::put_real(j, "y", -std::numeric_limits<double>::infinity());
  io::put_real(j, "z", std::numeric_limits<double>::quiet_NaN());
  io::put_real(j, "w", 1.5);
  const auto back = json::parse(io::dump(j));
  EXPECT_TRUE(back["x"].is_null());
  EXPECT_EQ(back["x_nonfinite"], "inf");
  EXPECT_EQ(io::get_real(back, "x"), std::numeric_limits<double>::infinity());
  EXPECT_EQ(io::get_real(back, "y"), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isnan(io::get_real(back, "z")));
  EXPECT_EQ(io::get_real(back, "w"), 1.5);
}

TEST(Sets, RoundTrip) {
  const auto set = CompactSet::union_of(
      {CompactSet::disk({0.1, -0.2}, 1.0 / 3.0), CompactSet::segment({-1, 0}, {1, 2}, 100),
       CompactSet::cloud({{0.7, 0.1}, {2, 2}})},
      512);
  const auto back = io::set_from_json(json::parse(io::dump(io::to_json(set))));
  EXPECT_EQ(discretize(back), discretize(set));
  EXPECT_EQ(back.boundary_samples(), 512u);
  EXPECT_EQ(back.as<SetUnion>().parts[1].boundary_samples(), 100u);
}

TEST(Sets, Malformed) {
  EXPECT_THROW(io::set_from_json(json::parse(R"({"shape":"triangle"})")), Error);
  EXPECT_THROW(io::set_from_json(json::parse(R"({"shape":"disk","center":[0,0]})")), Error);
  EXPECT_THROW(io::set_from_json(json::parse(R"({"shape":"disk","center":[0],"radius":1})")), Error);
  EXPECT_THROW(io::set_from_json(json::parse(R"({"shape":"disk","center":[0,0],"radius":"1"})")), Error);
  EXPECT_THROW(io::set_from_json(json::parse(R"({"shape":"cloud","points":[]})")), Error);
  EXPECT_THROW(io::set_from_json(json::parse(R"([1,2])")), Error);
}

TEST(Predicates, ParseShapes) {
  const auto bidisk = io::predicate_from_json(json::parse(
      R"({"shape":"product","factors":[{"shape":"disk","center":[0,0],"radius":1},{"shape":"disk","center":[0,0],"radius":1}]})"));
  EXPECT_EQ(bidisk.dimension, 2u);
  const Complex in[2] = {{0.5, 0}, {0, 0.5}};
  EXPECT_TRUE(bidisk.contains(in));

  const auto planar = io::predicate_from_json(json::parse(R"({"shape":"segment","a":[-1,0],"b":[1,0]})"));
  ASSERT_TRUE(planar.planar.has_value());
  EXPECT_TRUE(planar.planar->is<Segment>());

  const auto img = io::predicate_from_json(json::parse(
      R"({"shape":"linear_image","matrix":[[[0,1]]],"of":{"shape":"ball","center":[[1,0]],"radius":0.5}})"));
  const Complex inside[1] = {{0, 1.2}};
  const Complex outside[1] = {{1.2, 0}};
  EXPECT_TRUE(img.contains(inside));
  EXPECT_FALSE(img.contains(outside));

  const auto line = io::predicate_from_json(json::parse(R"({"shape":"hyperplane","normal":[[0,0],[1,0]]})"));
  EXPECT_EQ(line.dimension, 2u);

  const auto uni = io::predicate_from_json(json::parse(
      R"({"shape":"union","parts":[{"shape":"ball","center":[[0,0],[0,0]],"radius":1},{"shape":"ball","center":[[3,0],[0,0]],"radius":1}]})"));
  const Complex far[2] = {{3, 0.5}, {0, 0}};
  EXPECT_TRUE(uni.contains(far));
  EXPECT_THROW(io::predicate_from_json(json::parse(R"({"shape":"teapot"})")), Error);
}

TEST(Sequences, Families) {
  const auto g = io::sequence_from_json(json::parse(R"({"family":"geometric","lambda":[1,1],"max_norm":10})"));
  EXPECT_EQ(g.at(3), Polynomial1D::monomial(3, ipow(Complex(1, 1), 3)));
  const auto s = io::sequence_from_json(json::parse(R"({"family":"sqrt_degree","max_norm":50,"declared_C0":9})"));
  EXPECT_EQ(*s.at(49).degree(), 7u);
  EXPECT_EQ(*s.declared_C0, 9.0);
  const auto t = io::sequence_from_json(json::parse(
      R"({"family":"table","max_norm":3,"terms":[{"n":0,"coefficients":[[1,0]]},{"n":2,"coefficients":[0,0,[0.5,0]]}]})"));
  EXPECT_EQ(t.at(0), Polynomial1D::constant(1.0));
  EXPECT_TRUE(t.at(1).is_zero());
  EXPECT_EQ(t.at(2), Polynomial1D::monomial(2, 0.5));
  const auto t2 = io::sequence_from_json(json::parse(
      R"({"family":"table","k":2,"max_norm":2,"terms":[{"n":[1,1],"coefficients":[1]}]})"));
  EXPECT_EQ(t2(MultiIndex{{1, 1}}), Polynomial1D::constant(1.0));
  EXPECT_THROW(io::sequence_from_json(json::parse(R"({"family":"table","max_norm":1,"terms":[{"n":2,"coefficients":[1]}]})")), Error);
  EXPECT_THROW(io::sequence_from_json(json::parse(R"({"family":"magic","max_norm":1})")), Error);
  EXPECT_THROW(io::sequence_from_json(json::parse(R"({"family":"geometric"})")), Error);
}

TEST(Samples, Forms) {
  EXPECT_EQ(io::samples_from_json(json::parse("[[1,0],[0,1]]")).size(), 2u);
  EXPECT_EQ(io::samples_from_json(json::parse(R"({"points":[[1,0]]})")).size(), 1u);
  EXPECT_EQ(io::samples_from_json(json::parse(R"({"shape":"disk","center":[0,0],"radius":1,"samples":200})")),
            circle(200));
}

TEST(Certificate, RoundTripIsLossless) {
  const auto seq = geometric_sequence(Complex(1, 1), 60);
  const auto cert = certify_extension(seq, circle(200));
  const auto text = io::dump(io::to_json(cert));
  const auto back = io::certificate_from_json(json::parse(text));
  EXPECT_EQ(back.C2, cert.C2);
  EXPECT_EQ(back.gammaC, cert.gammaC);
  EXPECT_EQ(back.rho1, cert.rho1);
  EXPECT_EQ(back.witness, cert.witness);
  EXPECT_EQ(back.config.window, cert.config.window);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
  for (const Complex z2 : {Complex(2, 0), Complex(0.3, -4), Complex(100, 1)}) {
    EXPECT_EQ(back.green(z2), cert.green(z2));
    const Complex z1 = 0.4 * cert.radius(z2);
    EXPECT_EQ(evaluate(back, seq, {z1}, z2, 1e-9).value, evaluate(cert, seq, {z1}, z2, 1e-9).value);
  }
}

TEST(Certificate, AnalyticBackingsRoundTrip) {
  for (const auto& set : {CompactSet::disk({1, 2}, 0.5), CompactSet::segment({-1, 1}, {2, 0})}) {
    const auto g = green_function(set);
    const auto back = io::green_from_json(json::parse(io::dump(io::to_json(g))));
    EXPECT_EQ(back(Complex(3, 3)), g(Complex(3, 3)));
    EXPECT_EQ(back.robin_constant(), g.robin_constant());
  }
}

TEST(Results, CapacityAndGammaShapes) {
  const auto est = capacity(CompactSet::cloud({{0, 0}}), 8);
  const auto j = json::parse(io::dump(io::to_json(est)));
  EXPECT_EQ(j["value"], 0.0);
  EXPECT_TRUE(j["polar"].get<bool>());
  EXPECT_TRUE(j["robin_constant"].is_null());

  GammaGrid grid;
  grid.fiber_resolution = 8;
  grid.projected_resolution = 8;
  grid.fiber_points = 8;
  grid.capacity_points = 16;
  const auto res = gamma_cap(ball_predicate({{0, 0}, {0, 0}}, 1.0), 2, 3, grid);
  const auto gj = json::parse(io::dump(io::to_json(res)));
  EXPECT_EQ(gj["per_unitary"].size(), 2u);
  EXPECT_EQ(gj["best_unitary"]["matrix"].size(), 2u);
  EXPECT_EQ(gj["grid"]["fiber_resolution"], 8);
}

TEST(Config, DefaultsAndOverrides) {
  const auto c = io::config_from_json(json::parse(R"({"theta":0.25,"z2_max":50})"));
  EXPECT_EQ(c.theta, 0.25);
  EXPECT_EQ(c.z2_max, 50.0);
  EXPECT_EQ(c.i_max, 100u);
  EXPECT_THROW(io::config_from_json(json::parse(R"({"i_max":-1})")), Error);
  EXPECT_THROW(io::config_from_json(json::parse(R"({"capacity_points":4})")), Error);
}
