#pragma once

#include <optional>
#include <string>
#include <vector>

namespace uftlqr {

struct ProbeResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool full = false;
  // Replaces the contour angle in the vanishing-integral probe.
  std::optional<double> debug_contour_angle;
};

std::vector<ProbeResult> verify_suite(const VerifyOptions& opt);

}  // namespace uftlqr
