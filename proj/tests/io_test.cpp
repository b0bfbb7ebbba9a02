#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "xda/io.hpp"

using namespace xda;

namespace {

ExperimentConfig sample() {
  ExperimentConfig c;
  c.command = "goodpair";
  c.points = {"quad:(-1+1*sqrt(5))/2"};
  c.params = {{"Q", "100"}, {"rho", "3/2"}};
  c.seed = 7;
  return c;
}

}  // namespace

TEST(Config, RoundTrip) {
  const ExperimentConfig c = sample();
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}

TEST(Config, HashStableUnderKeyOrder) {
  const auto a = nlohmann::json::parse(
      R"({"command":"goodpair","points":["quad:(-1+1*sqrt(5))/2"],"params":{"Q":"100","rho":"3/2"},"seed":7})");
  const auto b = nlohmann::json::parse(
      R"({"seed":7,"params":{"rho":"3/2","Q":"100"},"points":["quad:(-1+1*sqrt(5))/2"],"command":"goodpair"})");
  EXPECT_EQ(config_hash(config_from_json(a)), config_hash(config_from_json(b)));
  EXPECT_EQ(config_hash(config_from_json(a)), config_hash(sample()));
  ExperimentConfig other = sample();
  other.seed = 8;
  EXPECT_NE(config_hash(other), config_hash(sample()));
  EXPECT_EQ(config_hash(sample()).size(), 16u);
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json(nlohmann::json::object()), InvalidInput);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"points":[]})")), InvalidInput);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"command":"cf","format":"xml"})")), InvalidInput);
  EXPECT_THROW(load_config("/nonexistent/xda.json"), InvalidInput);
  const std::string path = ::testing::TempDir() + "xda_empty_config.json";
  std::ofstream(path) << "  \n";
  EXPECT_THROW(load_config(path), InvalidInput);
  std::remove(path.c_str());
}

TEST(Config, NumericParamsKeptAsText) {
  const auto j = nlohmann::json::parse(R"({"command":"cf","params":{"terms":6}})");
  EXPECT_EQ(config_from_json(j).params.at("terms"), "6");
}

TEST(SystemJson, ParsesAndRoundTrips) {
  const Json j = Json::parse(R"({
    "name": "cantor-json",
    "maps": [{"ratio": "1/3", "translation": ["0"]}, {"ratio": "1/3", "translation": ["2/3"]}],
    "open_set": {"interval": ["0", "1"]}})");
  const IFSystem s = parse_system_json(j);
  EXPECT_EQ(s.name(), "cantor-json");
  EXPECT_TRUE(check_osc(s).verified);
  EXPECT_EQ(membership(s, {QuadScalar(BigRational(1, 4))}).verdict, Verdict::kIn);
  for (const auto& n : builtin_names()) {
    const IFSystem b = builtin_system(n);
    const IFSystem r = parse_system_json(system_to_json(b));
    ASSERT_EQ(r.size(), b.size()) << n;
    for (std::size_t a = 0; a < b.size(); ++a) {
      EXPECT_EQ(r.map(a).ratio, b.map(a).ratio) << n;
      EXPECT_EQ(r.map(a).translation, b.map(a).translation) << n;
      EXPECT_EQ(r.map(a).orth, b.map(a).orth) << n;
    }
    EXPECT_EQ(r.open_set().vertices, b.open_set().vertices) << n;
  }
}

TEST(SystemJson, Malformed) {
  EXPECT_THROW(parse_system_json(Json::parse(R"({"maps": []})")), InvalidInput);
  EXPECT_THROW(parse_system_json(Json::parse(R"({"maps": [{"ratio": "1/2"}], "open_set": {"interval": ["0","1"]}})")),
               InvalidInput);
  EXPECT_THROW(load_system("builtin:unknown"), InvalidInput);
}

TEST(JsonValues, Encoding) {
  EXPECT_EQ(to_json(BigInt(42)), Json(42));
  EXPECT_EQ(to_json(ipow(10, 30)), Json("1000000000000000000000000000000"));
  EXPECT_EQ(to_json(BigRational(-3, 4)), Json("-3/4"));
  const Json iv = to_json(RationalInterval(BigRational(1, 3), BigRational(2, 3)));
  ASSERT_TRUE(iv.is_array());
  EXPECT_EQ(iv[0], Json("0.333333333333"));
  EXPECT_EQ(iv[1], Json("0.666666666667"));
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_row({"1", "x,y", "3"}), "1,\"x,y\",3\n");
}
