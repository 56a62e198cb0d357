#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "asymcorr/connection.hpp"

namespace asymcorr {

enum class Stage { series, pf, borel, connect, lg, birkhoff, all };
std::string to_string(Stage s);
Stage parse_stage(const std::string& s);

struct RunConfig {
  std::string name = "run";
  long d = 2;
  std::vector<long> c{1, 1, 1};
  std::vector<std::vector<Rational>> group_generators;
  bool allow_crepant = false;
  Stage stage = Stage::all;
  std::optional<Direction> direction;  // geometric pair only; the LG stage uses the sign of r
  long series_order = 40;
  long pf_order = 30;
  Rational birkhoff_order = 10;
  long radius_terms = 200;
  int max_kbar = 2;  // used only when the group has gbar generators
  int digits = 60;
  // Overrides of the tolerances derived from digits.
  std::optional<double> ode_local_digits;
  std::optional<double> quad_digits;
  std::optional<double> match_digits;
  ComplexRational lambda{make_rational(7, 2), make_rational(1, 5)};
  Rational u_arg = 0;
  std::optional<Rational> ray_angle;  // default -u_arg
  Rational base_point = 30;
  Rational second_base_point = 60;
  std::vector<Rational> held_out{20, 50, 100, 150, 200};
  std::vector<Rational> connection_watson{100, 200};
  std::vector<Rational> borel_watson{100, 1000, 10000};
  double connection_residual_digits = 25;
  double lg_residual_digits = 20;
  double base_change_digits = 20;
  std::string output_dir = "out";
};

// ConfigError on schema violations; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct WatsonCurve {
  std::string label;  // stage and coset
  WatsonReport report;
};

struct Report {
  std::string name;
  Stage stage = Stage::all;
  std::vector<CheckResult> checks;
  std::vector<std::string> skipped;
  std::vector<std::string> artifacts;
  std::vector<WatsonCurve> watson;
  double seconds = 0;
  bool passed() const;
};

// Runs the stage, writing artifacts and summary.json into out_dir.
Report run(const RunConfig& config, const std::filesystem::path& out_dir);

// Columns |u|, n, log10 error, log10 next-term bound; MissingStage without Watson data.
std::string emit_plotdata(const Report& report);

// summary.json content.
std::string summary_json(const Report& report);

}  // namespace asymcorr
