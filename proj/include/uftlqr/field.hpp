#pragma once

#include <complex>
#include <string>
#include <vector>

namespace uftlqr {

using cd = std::complex<double>;

enum class Method { Contour, Series, Feedback, Oracle };
const char* method_name(Method m);

// Sampled u*(x,t) or phi*(x,t); values are stored time-major.
struct Field {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<cd> values;
  std::vector<double> err;
  Method method = Method::Contour;

  Field() = default;
  Field(std::vector<double> xs, std::vector<double> ts, Method m);
  cd& at(std::size_t it, std::size_t ix) { return values[it * x.size() + ix]; }
  const cd& at(std::size_t it, std::size_t ix) const { return values[it * x.size() + ix]; }
  double& err_at(std::size_t it, std::size_t ix) { return err[it * x.size() + ix]; }
};

struct FieldComparison {
  double max_abs = 0.0;
  double rel_l2 = 0.0;
  std::vector<double> per_time_max_abs;
};

// Error norms of a - b. With resample, b is linearly interpolated in x onto
// a's nodes; time grids must always agree.
FieldComparison compare_fields(const Field& a, const Field& b, bool resample = false);

// Long format x,t,value_re,value_im,err_est with 17 significant digits.
void write_field_csv(const Field& f, const std::string& path);

}  // namespace uftlqr
