#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "asymcorr/errors.hpp"
#include "asymcorr/pipeline.hpp"

using namespace asymcorr;

namespace {

constexpr const char* kOutputEnv = "ASYMCORR_OUTPUT_DIR";

int run_command(const std::string& config_path, const std::string& stage, int digits, long order,
                const std::string& out) {
  RunConfig cfg = load_config(config_path);
  if (!stage.empty()) cfg.stage = parse_stage(stage);
  if (digits > 0) cfg.digits = digits;
  if (order > 0) cfg.series_order = order;
  if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output_dir = env;
  if (!out.empty()) cfg.output_dir = out;
  Report report = run(cfg, cfg.output_dir);
  for (const CheckResult& c : report.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  for (const std::string& s : report.skipped) std::cout << "SKIP " << s << "\n";
  std::cout << (report.passed() ? "all checks passed" : "some checks failed") << " (" << report.seconds
            << " s), reports in " << cfg.output_dir << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-expansion correspondence engine"};
  app.require_subcommand(1);
  CLI::App* run_cmd = app.add_subcommand("run", "Run a pipeline stage from a JSON config");
  std::string config_path, stage, out;
  int digits = 0;
  long order = 0;
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--stage", stage, "series | pf | borel | connect | lg | birkhoff | all");
  run_cmd->add_option("--digits", digits, "Working precision in decimal digits")->check(CLI::PositiveNumber);
  run_cmd->add_option("--order", order, "Series truncation order")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, std::string("Output directory (overrides ") + kOutputEnv + " and the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run_command(config_path, stage, digits, order, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
