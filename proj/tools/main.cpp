// Command-line front end: verify, sweep, kernel, selftest.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "debranges/report.hpp"
#include "debranges/selftest.hpp"

namespace {

using namespace debranges;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_atomically(path, text);
  }
}

std::string output_path(const Flags& f, const RunConfig& c) {
  if (!f.out.empty()) return f.out;
  return c.output.value_or("");
}

RunConfig config_from(const Flags& f) {
  if (f.config.empty()) throw ConfigError("--config is required");
  RunConfig c = load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  return c;
}

int verify(const Flags& f) {
  const RunConfig c = config_from(f);
  const RunOutcome out = run_verify(c, f.tol_scale);
  emit(out.report.dump(2) + "\n", output_path(f, c));
  if (out.exit_code != kExitPass && out.report.contains("error"))
    std::cerr << "verify: " << out.report.at("error").at("message").get<std::string>() << "\n";
  return out.exit_code;
}

int sweep(const Flags& f) {
  if (f.config.empty()) throw ConfigError("--config is required");
  auto configs = parse_sweep(read_json_file(f.config));
  if (f.seed)
    for (auto& c : configs) c.seed = *f.seed;
  const SweepOutcome out = run_sweep(configs, f.tol_scale);
  emit(out.csv, f.out);
  return out.exit_code;
}

int kernel(const Flags& f) {
  const RunConfig c = config_from(f);
  const RunOutcome out = run_kernel(c);
  emit(out.report.dump(2) + "\n", output_path(f, c));
  return out.exit_code;
}

int selftest(const Flags& f) {
  SelftestOptions o;
  o.seed = f.seed.value_or(0);
  o.tol_scale = f.tol_scale;
  const nlohmann::json report = selftest_report(o);
  emit(report.dump(2) + "\n", f.out);
  for (const auto& c : report.at("criteria"))
    std::cerr << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << "  " << c.at("id").get<int>() << "  "
              << c.at("name").get<std::string>() << "\n";
  return report.at("passed").get<bool>() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure extraction and verification for subspaces of de Branges spaces"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "run configuration (JSON)");
  app.add_option("--out", flags.out, "output file; stdout when omitted");
  app.add_option("--seed", flags.seed, "seed overriding the configured one");
  app.add_option("--tol-scale", flags.tol_scale, "multiplier applied to every tolerance")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "run the structure pipeline on one configuration");
  auto* sweep_cmd = app.add_subcommand("sweep", "run a list of configurations and write a CSV table");
  auto* kernel_cmd = app.add_subcommand("kernel", "evaluate ambient and subspace kernels at points");
  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  for (auto* cmd : {verify_cmd, sweep_cmd, kernel_cmd, selftest_cmd}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*verify_cmd) return verify(flags);
    if (*sweep_cmd) return sweep(flags);
    if (*kernel_cmd) return kernel(flags);
    return selftest(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
