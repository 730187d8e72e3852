#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "config.hpp"

namespace rotstar::cli {
namespace {

using nlohmann::json;

json base_config() {
  return json::parse(R"({
    "model": {
      "eos": {"type": "polytrope", "K": 1.0, "gamma": 2.0},
      "entropy": {"type": "linear", "slope": -0.6666666666666666},
      "angmom": {"type": "power", "beta": 1.0, "q": 1.3333333333333333},
      "M": 1.0
    },
    "geometry": {"b": 1.0, "R_max": 3.0, "N": 64, "n_beta": 8}
  })");
}

TEST(Config, ParsesFullDocument) {
  const auto cfg = parse_config(base_config());
  EXPECT_EQ(cfg.geometry.cells, 64u);
  EXPECT_EQ(cfg.geometry.shell_nodes, 8u);
  EXPECT_EQ(*cfg.geometry.r_max, 3.0);
  EXPECT_EQ(cfg.model.total_mass, 1.0);
  EXPECT_NEAR(cfg.model.entropy.entropy_slope(0.5), -2.0 / 3.0, 1e-15);
  EXPECT_EQ(cfg.seed, 20240611u);
}

TEST(Config, RejectsUnknownKeys) {
  auto doc = base_config();
  doc["extra"] = 1;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["model"]["eos"]["Kappa"] = 1;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["geometry"]["cells"] = 10;
  EXPECT_THROW(parse_config(doc), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  auto doc = base_config();
  doc["model"]["M"] = -1.0;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["model"]["eos"]["type"] = "stiff";
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["geometry"]["N"] = 2;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["geometry"]["b"] = 3.0;
  doc["geometry"]["xi"] = 1.5;
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = base_config();
  doc["solver"] = {{"damping", 2.0}};
  EXPECT_THROW(parse_config(doc), ConfigError);
}

TEST(Config, TablesAndDefaults) {
  auto doc = base_config();
  doc["model"]["eos"] = {{"type", "table"}, {"table", {{0.5, 0.25}, {1.0, 1.0}, {2.0, 4.0}}}};
  doc["geometry"].erase("R_max");
  EXPECT_THROW(resolve_outer_radius(parse_config(doc)), ConfigError);
  doc = base_config();
  doc["geometry"].erase("R_max");
  EXPECT_NEAR(resolve_outer_radius(parse_config(doc)), 4.0 * std::sqrt(3.14159265358979 / 2.0), 1e-12);
}

TEST(Output, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.00375), "0.00375");
}

TEST(Commands, CheckAcceptsRemarkProfile) {
  std::ostringstream os;
  const auto dir = std::filesystem::temp_directory_path() / "rotstar_unit_check";
  EXPECT_EQ(cmd_check(parse_config(base_config()), dir, os), 0);
  EXPECT_TRUE(json::parse(os.str())["all_pass"].get<bool>());
}

TEST(Commands, CheckReportsA4Counterexample) {
  auto doc = base_config();
  doc["model"]["angmom"]["q"] = 2.0;
  std::ostringstream os;
  const auto dir = std::filesystem::temp_directory_path() / "rotstar_unit_check_fail";
  EXPECT_EQ(cmd_check(parse_config(doc), dir, os), 1);
  const auto j = json::parse(os.str());
  bool found = false;
  for (const auto& c : j["conditions"]) {
    if (c["name"] == "A4") {
      EXPECT_FALSE(c["pass"].get<bool>());
      EXPECT_TRUE(c.contains("counterexample"));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace rotstar::cli
