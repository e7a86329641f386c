#include "uftlqr/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>

#include "uftlqr/contour.hpp"
#include "uftlqr/errors.hpp"
#include "uftlqr/fd.hpp"
#include "uftlqr/parallel.hpp"
#include "uftlqr/series.hpp"

namespace uftlqr {

using json = nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw config_error(path.empty() ? "<root>" : path, "must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error(join(path, key), "is required");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw config_error(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw config_error(path, "must be finite");
  return d;
}

double number_or(const json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), join(path, key));
}

int int_or(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw config_error(join(path, key), "must be an integer");
  return v.get<int>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw config_error(path, "must be an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string family_of(const json& obj, const std::string& path) {
  const json& f = require(obj, path, "family");
  if (!f.is_string()) throw config_error(join(path, "family"), "must be a string");
  return f.get<std::string>();
}

// Either an explicit array or {start, stop, count}.
std::vector<double> parse_axis(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    out = number_array(v, path);
  } else if (v.is_object()) {
    const double a = as_number(require(v, path, "start"), join(path, "start"));
    const double b = as_number(require(v, path, "stop"), join(path, "stop"));
    const json& cj = require(v, path, "count");
    if (!cj.is_number_integer() || cj.get<int>() < 1) throw config_error(join(path, "count"), "must be an integer >= 1");
    const int n = cj.get<int>();
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    throw config_error(path, "must be an array or {start, stop, count}");
  }
  if (out.empty()) throw config_error(path, "must not be empty");
  for (size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw config_error(path, "must be strictly increasing");
  return out;
}

SpatialProfile parse_initial(const json& j, double L) {
  const std::string path = "initial";
  const std::string fam = family_of(j, path);
  if (fam == "sine") {
    return SpatialProfile::sine(L, number_or(j, path, "amplitude", 1.0), number_or(j, path, "mode", 1.0));
  }
  if (fam == "polynomial") {
    return SpatialProfile::polynomial(L, number_array(require(j, path, "coefficients"), "initial.coefficients"));
  }
  if (fam == "tabulated") {
    auto x = number_array(require(j, path, "x"), "initial.x");
    auto y = number_array(require(j, path, "y"), "initial.y");
    if (x.size() != y.size()) throw config_error("initial.y", "must match initial.x in length");
    return SpatialProfile::tabulated(L, std::move(x), std::move(y));
  }
  throw config_error("initial.family", "unknown family '" + fam + "'");
}

TimeSignal parse_signal(const json& j, const std::string& path, double tbar, double taper) {
  const std::string fam = family_of(j, path);
  if (fam == "zero") return TimeSignal::zero();
  if (!std::isfinite(tbar)) throw config_error("boundary.vanish_time", "is required for non-zero boundary data");
  if (fam == "sine") {
    return TimeSignal::sine(number_or(j, path, "frequency", 1.0), number_or(j, path, "amplitude", 1.0), tbar, taper);
  }
  if (fam == "constant") {
    return TimeSignal::constant(as_number(require(j, path, "value"), join(path, "value")), tbar, taper);
  }
  if (fam == "tabulated") {
    auto t = number_array(require(j, path, "t"), join(path, "t"));
    auto v = number_array(require(j, path, "v"), join(path, "v"));
    if (t.size() != v.size() || t.size() < 2) throw config_error(join(path, "v"), "must match t in length (>= 2)");
    return TimeSignal::tabulated(std::move(t), std::move(v), tbar, taper);
  }
  throw config_error(join(path, "family"), "unknown family '" + fam + "'");
}

json signal_json(const TimeSignal& s) {
  switch (s.form()) {
    case TimeSignal::Form::Zero: return {{"family", "zero"}};
    case TimeSignal::Form::Sine:
      return {{"family", "sine"}, {"frequency", s.frequency()}, {"amplitude", s.amplitude()}};
    case TimeSignal::Form::Constant: return {{"family", "constant"}, {"value", s.amplitude()}};
    case TimeSignal::Form::Tabulated:
      return {{"family", "tabulated"}, {"t", s.spline().x()}, {"v", s.spline().y()}};
  }
  return {};
}

Method parse_method(const json& v, const std::string& path) {
  if (!v.is_string()) throw config_error(path, "must be a string");
  const std::string m = v.get<std::string>();
  if (m == "contour") return Method::Contour;
  if (m == "series") return Method::Series;
  if (m == "feedback") return Method::Feedback;
  if (m == "oracle") return Method::Oracle;
  throw config_error(path, "unknown method '" + m + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_err(const Field& f) {
  double m = 0.0;
  for (double e : f.err) m = std::max(m, e);
  return m;
}

double max_imag(const Field& f) {
  double m = 0.0;
  for (const cd& v : f.values) m = std::max(m, std::abs(v.imag()));
  return m;
}

// Nodes of f with x in [lo, hi].
Field restrict_x(const Field& f, double lo, double hi) {
  std::vector<size_t> keep;
  for (size_t i = 0; i < f.x.size(); ++i)
    if (f.x[i] >= lo - 1e-12 && f.x[i] <= hi + 1e-12) keep.push_back(i);
  std::vector<double> xs;
  for (size_t i : keep) xs.push_back(f.x[i]);
  Field out(xs, f.t, f.method);
  for (size_t it = 0; it < f.t.size(); ++it)
    for (size_t k = 0; k < keep.size(); ++k) {
      out.at(it, k) = f.at(it, keep[k]);
      out.err_at(it, k) = f.err[it * f.x.size() + keep[k]];
    }
  return out;
}

struct SeriesFields {
  Field state, control;
};

SeriesFields series_fields(const SeriesCoefficients& s, const std::vector<double>& x, const std::vector<double>& t) {
  SeriesFields out{Field(x, t, Method::Series), Field(x, t, Method::Series)};
  parallel_for(t.size(), [&](size_t it) {
    std::vector<double> a, c;
    s.amplitudes(t[it], a, c);
    for (size_t ix = 0; ix < x.size(); ++ix) {
      double phi = 0.0, u = 0.0;
      for (int m = 0; m < s.M; ++m) {
        const double sn = std::sin(s.k[m] * x[ix]);
        phi += a[m] * sn;
        u += c[m] * sn;
      }
      out.state.at(it, ix) = phi;
      out.control.at(it, ix) = u;
    }
  });
  return out;
}

Field feedback_field(const SeriesCoefficients& s, const std::vector<double>& x, const std::vector<double>& t) {
  Field out(x, t, Method::Feedback);
  const int n = 4 * s.M + 1;
  const double L = s.problem.L;
  parallel_for(t.size(), [&](size_t it) {
    std::vector<double> a, c;
    s.amplitudes(t[it], a, c);
    StateRow row;
    for (int j = 0; j < n; ++j) {
      const double xi = L * j / (n - 1);
      double phi = 0.0;
      for (int m = 0; m < s.M; ++m) phi += a[m] * std::sin(s.k[m] * xi);
      row.xi.push_back(xi);
      row.phi.push_back(phi);
    }
    for (size_t ix = 0; ix < x.size(); ++ix) out.at(it, ix) = feedback_control_eval(s, row, x[ix], t[it]);
  });
  return out;
}

json comparison_json(const std::string& field, const Field& a, const Field& b, bool resample) {
  const FieldComparison c = compare_fields(a, b, resample);
  return {{"field", field},
          {"a", method_name(a.method)},
          {"b", method_name(b.method)},
          {"max_abs", c.max_abs},
          {"rel_l2", c.rel_l2},
          {"per_time_max_abs", c.per_time_max_abs}};
}

}  // namespace

Problem Scenario::problem() const { return Problem::make(c, L, initial, boundary); }

bool Scenario::wants(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw config_error("<root>", "config must be a JSON object");
  const json& schema = require(j, "", "schema");
  if (!schema.is_number_integer() || schema.get<int>() != 1) throw config_error("schema", "must be 1");

  Scenario s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw config_error("name", "must be a string");
    s.name = j.at("name").get<std::string>();
  }
  const json& eq = require(j, "", "equation");
  s.c = as_number(require(eq, "equation", "c"), "equation.c");
  if (s.c < 0.0) throw config_error("equation.c", "must be >= 0");
  s.L = as_number(require(eq, "equation", "L"), "equation.L");
  if (!(s.L > 0.0)) throw config_error("equation.L", "must be > 0");

  s.initial = parse_initial(require(j, "", "initial"), s.L);

  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    if (!b.is_object()) throw config_error("boundary", "must be an object");
    const double tbar = number_or(b, "boundary", "vanish_time", std::numeric_limits<double>::infinity());
    const double taper = number_or(b, "boundary", "taper_width", 0.0);
    if (b.contains("g0")) s.boundary.g0 = parse_signal(b.at("g0"), "boundary.g0", tbar, taper);
    if (b.contains("h0")) s.boundary.h0 = parse_signal(b.at("h0"), "boundary.h0", tbar, taper);
  }

  const json& methods = require(j, "", "methods");
  if (!methods.is_array() || methods.empty()) throw config_error("methods", "must be a non-empty array");
  for (size_t i = 0; i < methods.size(); ++i) {
    const Method m = parse_method(methods[i], "methods[" + std::to_string(i) + "]");
    if (!s.wants(m)) s.methods.push_back(m);
  }

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    if (!q.is_object()) throw config_error("quadrature", "must be an object");
    s.quad.epsilon_origin = number_or(q, "quadrature", "epsilon_origin", s.quad.epsilon_origin);
    s.quad.truncation_radius = number_or(q, "quadrature", "truncation_radius", s.quad.truncation_radius);
    s.quad.panel_tolerance = number_or(q, "quadrature", "panel_tolerance", s.quad.panel_tolerance);
    s.quad.max_evals = int_or(q, "quadrature", "max_evals", static_cast<int>(s.quad.max_evals));
    s.quad.t_min = number_or(q, "quadrature", "t_min", s.quad.t_min);
    if (!(s.quad.epsilon_origin > 0.0)) throw config_error("quadrature.epsilon_origin", "must be > 0");
    if (!(s.quad.panel_tolerance > 0.0)) throw config_error("quadrature.panel_tolerance", "must be > 0");
    if (s.quad.max_evals < 1000) throw config_error("quadrature.max_evals", "must be >= 1000");
    if (!(s.quad.t_min > 0.0)) throw config_error("quadrature.t_min", "must be > 0");
  }
  if (j.contains("series")) {
    s.M = int_or(j.at("series"), "series", "M", s.M);
    if (s.M < 1) throw config_error("series.M", "must be >= 1");
  }
  if (j.contains("oracle")) {
    s.oracle_N = int_or(j.at("oracle"), "oracle", "N", s.oracle_N);
    s.oracle_dt = number_or(j.at("oracle"), "oracle", "dt", s.oracle_dt);
    if (s.oracle_N < 16) throw config_error("oracle.N", "must be >= 16");
    if (!(s.oracle_dt > 0.0)) throw config_error("oracle.dt", "must be > 0");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw config_error("output.dir", "must be a string");
      s.out_dir = o.at("dir").get<std::string>();
    }
  }

  const json& grid = require(j, "", "grid");
  s.x = parse_axis(require(grid, "grid", "x"), "grid.x");
  s.t = parse_axis(require(grid, "grid", "t"), "grid.t");
  const bool contour = s.wants(Method::Contour);
  for (double x : s.x) {
    if (contour ? !(x > 0.0 && x < s.L) : !(x >= 0.0 && x <= s.L))
      throw config_error("grid.x", contour ? "nodes must lie in (0, L) for contour evaluation"
                                           : "nodes must lie in [0, L]");
  }
  for (double t : s.t) {
    if (contour ? !(t >= s.quad.t_min) : !(t >= 0.0))
      throw config_error("grid.t", contour ? "nodes must be >= quadrature.t_min for contour evaluation"
                                           : "nodes must be >= 0");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

json serialize_scenario(const Scenario& s) {
  json j;
  j["schema"] = 1;
  j["name"] = s.name;
  j["equation"] = {{"c", s.c}, {"L", s.L}};
  switch (s.initial.form()) {
    case SpatialProfile::Form::Sine:
      j["initial"] = {{"family", "sine"}, {"amplitude", s.initial.amplitude()}, {"mode", s.initial.mode()}};
      break;
    case SpatialProfile::Form::Polynomial:
      j["initial"] = {{"family", "polynomial"}, {"coefficients", s.initial.poly_coeffs()}};
      break;
    case SpatialProfile::Form::Tabulated:
      j["initial"] = {{"family", "tabulated"}, {"x", s.initial.spline().x()}, {"y", s.initial.spline().y()}};
      break;
  }
  json b = {{"g0", signal_json(s.boundary.g0)}, {"h0", signal_json(s.boundary.h0)}};
  const TimeSignal& live = s.boundary.g0.is_zero() ? s.boundary.h0 : s.boundary.g0;
  if (!live.is_zero()) {
    b["vanish_time"] = live.vanish_time();
    b["taper_width"] = live.taper_width();
  }
  j["boundary"] = b;
  j["grid"] = {{"x", s.x}, {"t", s.t}};
  json methods = json::array();
  for (Method m : s.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["quadrature"] = {{"epsilon_origin", s.quad.epsilon_origin},
                     {"truncation_radius", s.quad.truncation_radius},
                     {"panel_tolerance", s.quad.panel_tolerance},
                     {"max_evals", s.quad.max_evals},
                     {"t_min", s.quad.t_min}};
  j["series"] = {{"M", s.M}};
  j["oracle"] = {{"N", s.oracle_N}, {"dt", s.oracle_dt}};
  j["output"] = {{"dir", s.out_dir}};
  return j;
}

json run_scenario(const Scenario& s, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + out_dir + ": " + ec.message());
  auto out_path = [&](const std::string& file) { return (fs::path(out_dir) / file).string(); };

  const Problem p = s.problem();
  json report;
  report["schema"] = 1;
  report["name"] = s.name;
  report["methods"] = json::object();
  report["comparisons"] = json::array();
  report["failures"] = json::array();

  std::optional<Field> u_contour, phi_contour, u_series, phi_series, u_feedback, u_oracle, phi_oracle;

  auto attempt = [&](Method m, const std::function<json()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      json entry = body();
      entry["status"] = "ok";
      entry["seconds"] = seconds_since(t0);
      report["methods"][method_name(m)] = entry;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Io) throw;
      report["methods"][method_name(m)] = {{"status", "failed"}, {"seconds", seconds_since(t0)}};
      report["failures"].push_back({{"method", method_name(m)},
                                    {"error", error_kind_name(e.kind())},
                                    {"message", e.what()},
                                    {"exit_code", exit_code_for(e.kind())}});
    }
  };

  if (s.wants(Method::Contour)) {
    attempt(Method::Contour, [&] {
      ContourFields f = contour_fields(p, s.x, s.t, s.quad);
      write_field_csv(f.control, out_path("u_contour.csv"));
      write_field_csv(f.state, out_path("phi_contour.csv"));
      json e = {{"files", {"u_contour.csv", "phi_contour.csv"}},
                {"max_err_est", std::max(max_err(f.control), max_err(f.state))},
                {"max_abs_imag", std::max(max_imag(f.control), max_imag(f.state))}};
      u_contour = std::move(f.control);
      phi_contour = std::move(f.state);
      return e;
    });
  }
  std::optional<SeriesCoefficients> coeffs;
  if (s.wants(Method::Series) || s.wants(Method::Feedback)) coeffs = make_series(p, s.M);
  if (s.wants(Method::Series)) {
    attempt(Method::Series, [&] {
      SeriesFields f = series_fields(*coeffs, s.x, s.t);
      write_field_csv(f.control, out_path("u_series.csv"));
      write_field_csv(f.state, out_path("phi_series.csv"));
      u_series = std::move(f.control);
      phi_series = std::move(f.state);
      return json{{"files", {"u_series.csv", "phi_series.csv"}}, {"M", s.M}};
    });
  }
  if (s.wants(Method::Feedback)) {
    attempt(Method::Feedback, [&] {
      Field f = feedback_field(*coeffs, s.x, s.t);
      write_field_csv(f, out_path("u_feedback.csv"));
      u_feedback = std::move(f);
      return json{{"files", {"u_feedback.csv"}}, {"M", s.M}};
    });
  }
  double fd_dx = 0.0;
  if (s.wants(Method::Oracle)) {
    attempt(Method::Oracle, [&] {
      const GridModel model = discretize(s.c, s.L, s.oracle_N);
      fd_dx = model.dx;
      const CareSolution care = solve_care(model);
      std::vector<double> phi0;
      for (double x : model.x) phi0.push_back(s.initial(x));
      FdFields f = simulate_closedloop(model, care, phi0, s.boundary, s.t, s.oracle_dt);
      write_field_csv(f.control, out_path("u_oracle.csv"));
      write_field_csv(f.state, out_path("phi_oracle.csv"));
      u_oracle = std::move(f.control);
      phi_oracle = std::move(f.state);
      return json{{"files", {"u_oracle.csv", "phi_oracle.csv"}},
                  {"N", s.oracle_N},
                  {"care_residual", care.residual},
                  {"newton_iterations", care.iterations}};
    });
  }

  auto& cmp = report["comparisons"];
  if (u_contour && u_series) {
    cmp.push_back(comparison_json("control", *u_contour, *u_series, false));
    cmp.push_back(comparison_json("state", *phi_contour, *phi_series, false));
  }
  if (u_contour && u_feedback) cmp.push_back(comparison_json("control", *u_contour, *u_feedback, false));
  if (u_series && u_feedback) cmp.push_back(comparison_json("control", *u_series, *u_feedback, false));
  if (u_oracle) {
    const std::optional<Field>& ref_u = u_contour ? u_contour : u_series;
    const std::optional<Field>& ref_phi = u_contour ? phi_contour : phi_series;
    if (ref_u) {
      const Field a_phi = restrict_x(*ref_phi, fd_dx, s.L - fd_dx);
      if (!a_phi.x.empty()) {
        cmp.push_back(comparison_json("state", a_phi, *phi_oracle, true));
        // The FD control has no feedforward, so only homogeneous data compare.
        if (s.boundary.homogeneous())
          cmp.push_back(comparison_json("control", restrict_x(*ref_u, fd_dx, s.L - fd_dx), *u_oracle, true));
      }
    }
  }

  std::ofstream rep(out_path("report.json"), std::ios::binary);
  if (!rep) throw Error(ErrorKind::Io, "cannot write report.json in " + out_dir);
  rep << report.dump(2) << "\n";
  return report;
}

KernelGridSummary emit_kernel_grid(double c, double L, int M, int n, const std::string& path) {
  if (c < 0.0) throw config_error("c", "must be >= 0");
  if (!(L > 0.0)) throw config_error("L", "must be > 0");
  if (M < 1) throw config_error("M", "must be >= 1");
  if (n < 2) throw config_error("grid", "must be >= 2");
  const KernelMatrix km = build_kernel_matrix(Dispersion::reaction_diffusion(c), L, M, n);
  const ToeplitzHankelParts parts = toeplitz_hankel_decompose(km);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << "x,xi,gamma_toeplitz,gamma_hankel,gamma_combined\n";
  char buf[200];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", km.x[i], km.xi[j], km.toeplitz(i, j),
                    km.hankel(i, j), km.combined(i, j));
      out << buf;
    }
  }
  if (!out) throw Error(ErrorKind::Io, "write to " + path + " failed");

  KernelGridSummary s;
  s.toeplitz_lobe_width = toeplitz_lobe_width(km);
  s.hankel_corner_fraction = hankel_corner_mass_fraction(km);
  s.max_diagonal_deviation = parts.max_diagonal_deviation;
  s.max_antidiagonal_deviation = parts.max_antidiagonal_deviation;
  return s;
}

}  // namespace uftlqr
