#include "uftlqr/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "uftlqr/errors.hpp"

namespace uftlqr {

const char* method_name(Method m) {
  switch (m) {
    case Method::Contour: return "contour";
    case Method::Series: return "series";
    case Method::Feedback: return "feedback";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

Field::Field(std::vector<double> xs, std::vector<double> ts, Method m)
    : x(std::move(xs)), t(std::move(ts)), method(m) {
  values.assign(x.size() * t.size(), 0.0);
  err.assign(x.size() * t.size(), 0.0);
}

namespace {

cd interp_x(const Field& f, std::size_t it, double xq) {
  const auto& x = f.x;
  if (xq < x.front() - 1e-12 || xq > x.back() + 1e-12)
    throw Error(ErrorKind::GridMismatch, "resample point outside the source grid");
  auto hi = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t j = (hi == x.end()) ? x.size() - 1 : static_cast<std::size_t>(hi - x.begin());
  if (j == 0) j = 1;
  const double w = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return (1.0 - w) * f.at(it, j - 1) + w * f.at(it, j);
}

}  // namespace

FieldComparison compare_fields(const Field& a, const Field& b, bool resample) {
  if (a.t.size() != b.t.size())
    throw Error(ErrorKind::GridMismatch, "time grids differ in length");
  for (std::size_t i = 0; i < a.t.size(); ++i)
    if (std::abs(a.t[i] - b.t[i]) > 1e-12 * (1.0 + std::abs(a.t[i])))
      throw Error(ErrorKind::GridMismatch, "time grids differ");
  if (!resample) {
    if (a.x.size() != b.x.size()) throw Error(ErrorKind::GridMismatch, "x grids differ in length");
    for (std::size_t i = 0; i < a.x.size(); ++i)
      if (std::abs(a.x[i] - b.x[i]) > 1e-12 * (1.0 + std::abs(a.x[i])))
        throw Error(ErrorKind::GridMismatch, "x grids differ; request resampling");
  }
  FieldComparison out;
  out.per_time_max_abs.assign(a.t.size(), 0.0);
  double diff2 = 0.0, ref2 = 0.0;
  for (std::size_t it = 0; it < a.t.size(); ++it) {
    for (std::size_t ix = 0; ix < a.x.size(); ++ix) {
      const cd bv = resample ? interp_x(b, it, a.x[ix]) : b.at(it, ix);
      const double d = std::abs(a.at(it, ix) - bv);
      out.per_time_max_abs[it] = std::max(out.per_time_max_abs[it], d);
      out.max_abs = std::max(out.max_abs, d);
      diff2 += d * d;
      ref2 += std::norm(bv);
    }
  }
  out.rel_l2 = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  return out;
}

void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << "x,t,value_re,value_im,err_est\n";
  char buf[160];
  for (std::size_t it = 0; it < f.t.size(); ++it) {
    for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
      const cd v = f.at(it, ix);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", f.x[ix], f.t[it], v.real(),
                    v.imag(), f.err[it * f.x.size() + ix]);
      out << buf;
    }
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

}  // namespace uftlqr
