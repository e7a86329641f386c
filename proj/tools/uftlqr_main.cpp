#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "uftlqr/errors.hpp"
#include "uftlqr/scenario.hpp"
#include "uftlqr/verify.hpp"

namespace {

using namespace uftlqr;

int report_error(const Error& e) {
  nlohmann::json j = {{"error", error_kind_name(e.kind())}, {"message", e.what()}};
  if (!e.field().empty()) j["field"] = e.field();
  std::cerr << j.dump() << "\n";
  return exit_code_for(e.kind());
}

int cmd_run(const std::string& config, const std::string& out_override) {
  const Scenario s = load_scenario(config);
  const std::string out_dir = out_override.empty() ? s.out_dir : out_override;
  const nlohmann::json rep = run_scenario(s, out_dir);
  for (const auto& [name, m] : rep["methods"].items())
    std::printf("%-9s %-6s %.3fs\n", name.c_str(), m["status"].get<std::string>().c_str(), m["seconds"].get<double>());
  for (const auto& c : rep["comparisons"])
    std::printf("%s %s vs %s: max_abs %.3e rel_l2 %.3e\n", c["field"].get<std::string>().c_str(),
                c["a"].get<std::string>().c_str(), c["b"].get<std::string>().c_str(), c["max_abs"].get<double>(),
                c["rel_l2"].get<double>());
  std::printf("report: %s/report.json\n", out_dir.c_str());
  if (!rep["failures"].empty()) {
    for (const auto& f : rep["failures"]) std::cerr << f.dump() << "\n";
    return 3;
  }
  return 0;
}

int cmd_kernel(double c, double L, int M, int grid, const std::string& out) {
  const KernelGridSummary s = emit_kernel_grid(c, L, M, grid, out);
  std::printf("wrote %s\n", out.c_str());
  std::printf("toeplitz lobe width %.6f\nhankel corner fraction %.6f\n", s.toeplitz_lobe_width,
              s.hankel_corner_fraction);
  std::printf("max diagonal deviation %.3e\nmax anti-diagonal deviation %.3e\n", s.max_diagonal_deviation,
              s.max_antidiagonal_deviation);
  return 0;
}

int cmd_verify(bool full, std::optional<double> angle) {
  VerifyOptions opt;
  opt.full = full;
  opt.debug_contour_angle = angle;
  bool ok = true;
  for (const ProbeResult& r : verify_suite(opt)) {
    std::printf("%s %-22s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
    ok = ok && r.pass;
  }
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unified-transform LQR for 1D reaction-diffusion"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario config");
  std::string config, out_dir;
  run->add_option("config", config, "Scenario JSON (schema 1)")->required();
  run->add_option("--out-dir", out_dir, "Override output.dir from the config");

  auto* kernel = app.add_subcommand("kernel", "Write the feedback kernel on a grid");
  double c = 0.0, L = 3.141592653589793;
  int M = 10, grid = 101;
  std::string out;
  kernel->add_option("--c", c, "Reaction coefficient")->required();
  kernel->add_option("--L", L, "Interval length")->required();
  kernel->add_option("--M", M, "Truncation")->required();
  kernel->add_option("--grid", grid, "Nodes per axis")->required();
  kernel->add_option("--out", out, "CSV path")->required();

  auto* verify = app.add_subcommand("verify", "Run the invariant probes");
  bool full = false;
  std::optional<double> angle;
  verify->add_flag("--full", full, "Include the FD refinement study");
  verify->add_option("--debug-contour-angle", angle)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config, out_dir);
    if (*kernel) return cmd_kernel(c, L, M, grid, out);
    if (*verify) return cmd_verify(full, angle);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
  return 2;
}
