#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "uftlqr/field.hpp"
#include "uftlqr/problem.hpp"

namespace uftlqr {

// Parsed form of a schema-1 JSON config.
struct Scenario {
  std::string name = "scenario";
  double c = 0.0;
  double L = 1.0;
  SpatialProfile initial;
  BoundarySignal boundary;
  std::vector<double> x;
  std::vector<double> t;
  std::vector<Method> methods;
  QuadratureSpec quad;
  int M = 40;
  int oracle_N = 201;
  double oracle_dt = 1e-3;
  std::string out_dir = "out";

  Problem problem() const;
  bool wants(Method m) const;
};

// Throws ConfigError naming the offending field path.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json serialize_scenario(const Scenario& s);

// Runs the requested methods, writes <method> CSVs and report.json into
// out_dir, and returns the report. A method that fails numerically is
// recorded under "failures" instead of aborting the run.
nlohmann::json run_scenario(const Scenario& s, const std::string& out_dir);

struct KernelGridSummary {
  double toeplitz_lobe_width = 0.0;
  double hankel_corner_fraction = 0.0;
  double max_diagonal_deviation = 0.0;
  double max_antidiagonal_deviation = 0.0;
};

// n x n kernel samples on [0, L]^2 as long-format CSV
// x,xi,gamma_toeplitz,gamma_hankel,gamma_combined.
KernelGridSummary emit_kernel_grid(double c, double L, int M, int n, const std::string& path);

}  // namespace uftlqr
