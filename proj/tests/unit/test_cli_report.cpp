#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "debranges/report.hpp"

using namespace debranges;
using nlohmann::json;

namespace {

json band_config(double a, double c, double d) {
  return {{"version", 1},
          {"ambient", {{"type", "paley_wiener"}, {"a", a}}},
          {"subspace", {{"type", "band"}, {"interval", {c, d}}, {"spans", 0}}}};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(band_config(4.0, -1.0, 3.0)));

  json unknown = band_config(4.0, -1.0, 3.0);
  unknown["colour"] = "blue";
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);

  json nested = band_config(4.0, -1.0, 3.0);
  nested["subspace"]["extra"] = 1;
  CHECK_THROWS_AS(parse_config(nested), ConfigError);

  json version = band_config(4.0, -1.0, 3.0);
  version["version"] = 2;
  CHECK_THROWS_AS(parse_config(version), ConfigError);

  json empty_grid = band_config(4.0, -1.0, 3.0);
  empty_grid["grids"] = {{"real", {{"start", -4}, {"stop", 4}, {"count", 0}}}};
  CHECK_THROWS_AS(parse_config(empty_grid), ConfigError);

  json bad_tol = band_config(4.0, -1.0, 3.0);
  bad_tol["tolerances"] = {{"identity", -1.0}};
  CHECK_THROWS_AS(parse_config(bad_tol), ConfigError);

  const json poly{{"version", 1},
                  {"ambient", {{"type", "polynomial"}, {"coefficients", {{0, 2}, {1, 0}}}}},
                  {"subspace", {{"type", "full"}}}};
  CHECK_THROWS_AS(parse_config(poly), ConfigError);
  json with_bound = poly;
  with_bound["exponent_bound"] = 1.0;
  CHECK_NOTHROW(parse_config(with_bound));

  CHECK_THROWS_AS(build_subspace(parse_config(band_config(1.0, -2.0, 0.5))), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("expected intervals") {
  CHECK(*expected_interval(parse_config(band_config(4.0, -1.0, 3.0))) == std::pair{-1.0, 3.0});
  json shifted{{"version", 1},
               {"ambient", {{"type", "paley_wiener"}, {"a", 2}}},
               {"subspace", {{"type", "shifted"}, {"shift", 0.5}, {"interval", {-1, 1}}}}};
  CHECK(*expected_interval(parse_config(shifted)) == std::pair{-0.5, 1.5});
}

TEST_CASE("verify on a band subspace") {
  const auto out = run_verify(parse_config(band_config(4.0, -1.0, 3.0)));
  CHECK(out.exit_code == kExitPass);
  CHECK(out.report.at("schema") == "debranges.verify/1");
  CHECK(std::abs(out.report.at("structure").at("alpha").get<double>() + 2.0) <= 1e-6);
  CHECK(out.report.at("interval").at("verdict") == "pass");
  CHECK(out.report.at("status") == "pass");
  CHECK(out.report.at("plot").at("rows").size() > 0);
}

TEST_CASE("verify reports a common zero with exit code 3") {
  const json pinned{{"version", 1},
                    {"ambient", {{"type", "paley_wiener"}, {"a", 1}}},
                    {"subspace", {{"type", "zero_pinned"}, {"node", {0, 0}}}}};
  const auto out = run_verify(parse_config(pinned));
  CHECK(out.exit_code == kExitPrecondition);
  const auto& err = out.report.at("error");
  CHECK(err.at("points").size() == 1);
  CHECK(err.at("points")[0] == json::array({0.0, 0.0}));
}

TEST_CASE("verify reports are reproducible") {
  const RunConfig config = parse_config(band_config(2.0, 0.0, 2.0));
  CHECK(run_verify(config).report.dump() == run_verify(config).report.dump());
}

TEST_CASE("tolerance scaling can turn a pass into a failure") {
  json tight = band_config(2.0, -1.0, 1.0);
  tight["tolerances"] = {{"roundtrip", 1e-30}};
  const auto out = run_verify(parse_config(tight));
  CHECK(out.exit_code == kExitFail);
  CHECK(out.report.at("status") == "fail");
}

TEST_CASE("sweeps") {
  const auto empty = run_sweep(std::span<const RunConfig>{});
  CHECK(empty.csv == std::string(kSweepHeader) + "\n");
  CHECK(empty.exit_code == kExitPass);

  std::vector<RunConfig> configs{parse_config(band_config(2.0, -1.5, 0.5)), parse_config(band_config(2.0, 0.0, 2.0))};
  const auto good = run_sweep(configs);
  CHECK(good.exit_code == kExitPass);
  CHECK(lines_of(good.csv).size() == 3);

  configs.insert(configs.begin() + 1,
                 parse_config(json{{"version", 1},
                                   {"ambient", {{"type", "paley_wiener"}, {"a", 1}}},
                                   {"subspace", {{"type", "zero_pinned"}, {"node", {0, 0}}}}}));
  const auto mixed = run_sweep(configs);
  CHECK(mixed.exit_code == kExitFail);
  const auto rows = lines_of(mixed.csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].ends_with(",pass"));
  CHECK(rows[2].find(",error:common_zero") != std::string::npos);
  CHECK(rows[3].ends_with(",pass"));

  const json sweep{{"version", 1}, {"runs", json::array({band_config(1.0, -0.5, 0.5)})}};
  CHECK(parse_sweep(sweep).size() == 1);
  CHECK_THROWS_AS(parse_sweep(json{{"version", 1}}), ConfigError);
}

TEST_CASE("kernel evaluation") {
  json config = band_config(4.0, -1.0, 3.0);
  config["kernel_points"] = json::array({{{"lambda", {0, 0}}, {"z", {0, 0}}}});
  const auto out = run_kernel(parse_config(config));
  REQUIRE(out.report.at("points").size() == 1);
  CHECK(out.exit_code == kExitPass);
}

TEST_CASE("exit codes for errors") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(CommonZeroError("x", {})) == kExitPrecondition);
  CHECK(exit_code_for(NotUnimodularError("x")) == kExitFail);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFail);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "debranges-unit";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  write_atomically(path, "first");
  write_atomically(path, "second");
  std::ifstream in(path);
  std::string contents((std::istreambuf_iterator<char>(in)), {});
  CHECK(contents == "second");
  CHECK_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"band_pw4.json", "full_pw1.json", "shifted_pw2.json", "zero_pinned_pw1.json", "polynomial.json"})
    CHECK_NOTHROW(load_config(std::filesystem::path(DEBRANGES_CONFIG_DIR) / name));
  CHECK(parse_sweep(read_json_file(std::filesystem::path(DEBRANGES_CONFIG_DIR) / "sweep_pw2.json")).size() == 20);
  CHECK_THROWS_AS(load_config(std::filesystem::path(DEBRANGES_TEST_DATA) / "empty_real_grid.json"), ConfigError);
}
