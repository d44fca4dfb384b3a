#include "tomo/cli.hpp"

#include "tomo/asymptotics.hpp"
#include "tomo/harmonics.hpp"
#include "tomo/moments.hpp"
#include "tomo/polyalg.hpp"
#include "tomo/report.hpp"
#include "tomo/slice.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace tomo::cli {

namespace {

using nlohmann::json;

/// Rows of JSON scalars; rendered as CSV or as an array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string cell(const json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return quote_csv(v.get<std::string>());
  return quote_csv(v.dump());
}

std::string render(const Table& t, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + cell(r[i]);
    s += "\n";
  }
  return s;
}

std::string render(const DetectionReport& rep, const std::string& format) {
  if (format == "json") return rep.to_json().dump(2) + "\n";
  Table t{{"label", "verdict", "degree", "relative_residual"}, {}};
  for (const auto& it : rep.items)
    t.rows.push_back({it.label, rep.label(it.outcome), it.degree >= 0 ? json(it.degree) : json(""), it.residual});
  t.rows.push_back({"aggregate", rep.verdict(), "", rep.max_residual()});
  std::string s = render(t, "csv");
  for (const auto& w : rep.warnings) s += "# warning: " + w + "\n";
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

Vec parse_vec(const std::string& text) {
  const auto v = parse_list(text);
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Context {
  ExperimentConfig cfg;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  Body body() const {
    if (cfg.body_path.empty()) throw Error("--body is required");
    return load_body(cfg.body_path);
  }

  QuadratureConfig quad() const {
    QuadratureConfig q;
    q.method = parse_method(cfg.method);
    q.seed = cfg.seed;
    q.samples = cfg.samples;
    return q;
  }

  std::vector<Direction> directions(const Body& b, int fallback_count) const {
    std::vector<Direction> out;
    for (const auto& s : cfg.xi) {
      Direction d(parse_vec(s));
      if (d.dim() != b.dim()) throw Error("--xi dimension does not match the body");
      out.push_back(d);
    }
    if (out.empty()) out = probe_directions(b.dim(), fallback_count);
    return out;
  }

  Direction direction(const Body& b) const {
    if (cfg.xi.empty()) throw Error("--xi is required");
    return directions(b, 0).front();
  }

  double tol(double fallback) const { return cfg.tol > 0.0 ? cfg.tol : fallback; }

  std::string format(const std::string& fallback) const {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f != "csv" && f != "json") throw Error("--format must be csv or json");
    return f;
  }

  DirectionGrid grid(int dim, const std::string& fallback) const {
    const std::string g = cfg.grid.empty() ? fallback : cfg.grid;
    const auto x = g.find('x');
    try {
      if (dim == 2) return DirectionGrid::circle(std::stoi(x == std::string::npos ? g : g.substr(0, x)));
      if (x == std::string::npos) throw Error("--grid for n = 3 must look like 48x96");
      return DirectionGrid::sphere(std::stoi(g.substr(0, x)), std::stoi(g.substr(x + 1)));
    } catch (const std::invalid_argument&) {
      throw Error("cannot parse --grid '" + g + "'");
    }
  }

  int emit(const std::string& text, const std::string& verdict = "") const {
    if (cfg.out.empty()) {
      *out << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw Error("cannot write '" + cfg.out + "'");
      f << text;
    }
    if (!cfg.expect.empty() && verdict != cfg.expect) {
      *err << "expected verdict '" << cfg.expect << "', got '" << verdict << "'\n";
      return 2;
    }
    return 0;
  }
};

json direction_columns(const Direction& xi, std::vector<std::string>* columns) {
  json cells = json::array();
  for (int i = 0; i < xi.dim(); ++i) {
    if (columns) columns->push_back("xi_" + std::to_string(i + 1));
    cells.push_back(xi[i]);
  }
  return cells;
}

void append(std::vector<json>& row, const json& cells) {
  for (const auto& c : cells) row.push_back(c);
}

// ---------------------------------------------------------------- commands

int cmd_section(const Context& c, int grid_points) {
  const Body b = c.body();
  const auto q = c.quad();
  Table t;
  for (const auto& xi : c.directions(b, 0)) {
    std::vector<std::string> cols;
    const json dc = direction_columns(xi, &cols);
    if (t.columns.empty()) {
      t.columns = cols;
      t.columns.insert(t.columns.end(), {"t", "A", "err"});
    }
    if (grid_points <= 0) {
      if (c.cfg.t.empty()) throw Error("give --t or --grid");
      for (double s : c.cfg.t) {
        const SectionValue v = section_function(b, xi, s, q);
        std::vector<json> row;
        append(row, dc);
        row.insert(row.end(), {s, v.value, v.err});
        t.rows.push_back(std::move(row));
      }
      continue;
    }
    const SectionProfile prof = section_profile(b, xi, grid_points, q);
    for (std::size_t i = 0; i < prof.offsets.size(); ++i) {
      std::vector<json> row;
      append(row, dc);
      row.insert(row.end(), {prof.offsets[i], prof.values[i], prof.err[i]});
      t.rows.push_back(std::move(row));
    }
  }
  if (t.columns.empty()) throw Error("--xi is required");
  return c.emit(render(t, c.format("csv")));
}

int cmd_cutoff(const Context& c, const std::string& sign) {
  const Body b = c.body();
  if (sign != "minus" && sign != "plus") throw Error("--sign must be minus or plus");
  const Direction xi = c.direction(b);
  if (c.cfg.t.empty()) throw Error("--t is required");
  Table t;
  direction_columns(xi, &t.columns);
  t.columns.insert(t.columns.end(), {"t", "sign", "V"});
  for (double s : c.cfg.t) {
    std::vector<json> row;
    append(row, direction_columns(xi, nullptr));
    row.insert(row.end(), {s, sign, cutoff_volume(b, xi, s, sign == "minus" ? Side::Minus : Side::Plus, c.quad())});
    t.rows.push_back(std::move(row));
  }
  return c.emit(render(t, c.format("csv")));
}

int cmd_fourier(const Context& c, const std::vector<double>& lambdas) {
  const Body b = c.body();
  const Direction xi = c.direction(b);
  if (lambdas.empty()) throw Error("--lambda is required");
  Table t{{"lambda", "re", "im"}, {}};
  for (double l : lambdas) {
    const auto v = fourier_slice(b, xi, l, c.quad());
    t.rows.push_back({l, v.real(), v.imag()});
  }
  return c.emit(render(t, c.format("csv")));
}

int cmd_invert(const Context& c, const std::vector<std::string>& points, int n_polar, int n_azimuth) {
  const Body b = c.body();
  if (b.dim() != 3) throw Error("invert works in dimension 3 only");
  if (points.empty()) throw Error("--x is required");
  InversionGrid grid;
  grid.n_polar = n_polar;
  grid.n_azimuth = n_azimuth;
  const RadonData data = radon_data(b, c.quad());
  Table t{{"x_1", "x_2", "x_3", "chi", "near_boundary"}, {}};
  for (const auto& p : points) {
    const Vec x = parse_vec(p);
    if (x.size() != 3) throw Error("--x must have 3 coordinates");
    const InversionResult r = invert_radon_3d(data, x, grid);
    t.rows.push_back({x[0], x[1], x[2], r.value, r.near_boundary});
  }
  return c.emit(render(t, c.format("csv")));
}

int cmd_polyfit(const Context& c, int m, int max_degree, double margin, int points) {
  const Body b = c.body();
  PolyTestOptions opt;
  opt.max_degree = max_degree;
  opt.tol = c.tol(1e-7);
  opt.margin = margin;
  opt.points = points;
  opt.quad = c.quad();
  const auto dirs = c.directions(b, 6);
  const DetectionReport rep =
      m == 1 ? test_polynomial_integrability(b, dirs, opt) : test_power_polynomiality(b, m, dirs, opt);
  return c.emit(render(rep, c.format("json")), rep.verdict());
}

int cmd_hilbert(const Context& c, int max_degree, double window, int points) {
  const Body b = c.body();
  if (!c.cfg.t.empty()) {
    const Direction xi = c.direction(b);
    const SupportInterval si = support_interval(b, xi);
    const auto q = c.quad();
    OffsetFunction g{[&](double s) { return section_function(b, xi, s, q).value; }, si.lo, si.hi,
                     section_breakpoints(b, xi)};
    Table t{{"t", "H"}, {}};
    for (double s : c.cfg.t) t.rows.push_back({s, hilbert_transform(g, s)});
    return c.emit(render(t, c.format("csv")));
  }
  HilbertTestOptions opt;
  opt.max_degree = max_degree;
  opt.tol = c.tol(1e-5);
  opt.window = window;
  opt.points = points;
  opt.quad = c.quad();
  const DetectionReport rep = test_hilbert_polynomiality(b, c.directions(b, 4), opt);
  return c.emit(render(rep, c.format("json")), rep.verdict());
}

int cmd_derivatives(const Context& c, const std::vector<int>& ks) {
  const Body b = c.body();
  const Direction xi = c.direction(b);
  Table t{{"k", "derivative"}, {}};
  for (int k : ks) t.rows.push_back({k, derivative_at_zero(b, xi, k, c.quad())});
  return c.emit(render(t, c.format("csv")));
}

int cmd_singularities(const Context& c, const std::string& path) {
  if (path.empty()) throw Error("--equation is required");
  std::ifstream in(path);
  if (!in) throw Error("cannot open equation file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("equation file: " + std::string(e.what()));
  }
  const AlgebraicEquation eq = parse_equation(j);
  const SingularityReport rep = has_real_singularities(eq);
  json o = {{"verdict", rep.label()},
            {"roots", rep.roots},
            {"degenerate_at_infinity", rep.degenerate_at_infinity},
            {"discriminant", rep.discriminant.coeffs}};
  std::string text;
  if (c.format("json") == "json") {
    text = o.dump(2) + "\n";
  } else {
    Table t{{"verdict", "root"}, {}};
    for (double r : rep.roots) t.rows.push_back({rep.label(), r});
    if (rep.roots.empty()) t.rows.push_back({rep.label(), ""});
    text = render(t, "csv");
  }
  return c.emit(text, rep.label());
}

int cmd_moments(const Context& c, int k_max) {
  const Body b = c.body();
  const DirectionGrid g = c.grid(b.dim(), b.dim() == 2 ? "72" : "8x16");
  const auto tables = moment_tables(b, g, k_max, c.quad());
  Table t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& tab : tables) {
      std::vector<json> row;
      append(row, direction_columns(g.dirs[i], t.columns.empty() ? &t.columns : nullptr));
      if (t.columns.size() == static_cast<std::size_t>(b.dim())) t.columns.insert(t.columns.end(), {"k", "value"});
      row.insert(row.end(), {tab.k, tab.values[i]});
      t.rows.push_back(std::move(row));
    }
  }
  return c.emit(render(t, c.format("csv")));
}

int cmd_range_check(const Context& c, int k_max) {
  const Body b = c.body();
  const DirectionGrid g = c.grid(b.dim(), b.dim() == 2 ? "720" : "8x16");
  const auto tables = moment_tables(b, g, k_max, c.quad());
  DetectionReport rep;
  rep.test = "range-check";
  for (const auto& tab : tables) {
    const HomogeneousFitReport fit = fit_homogeneous(tab, c.tol(1e-6));
    DetectionItem it;
    it.label = "k=" + std::to_string(tab.k);
    it.outcome = fit.passed ? Outcome::Positive : Outcome::Negative;
    it.degree = tab.k;
    it.residual = fit.relative_residual;
    rep.items.push_back(std::move(it));
  }
  return c.emit(render(rep, c.format("json")), rep.verdict());
}

int cmd_tangent_system(const Context& c, int k_max, double q) {
  const Body b = c.body();
  const DirectionGrid g = c.grid(b.dim(), b.dim() == 2 ? "72" : "8x16");
  const TangentMeasure tm = tangent_measure(b, g, [q](const Direction&) { return q; });
  std::vector<MomentTable> p;
  for (int k = 0; k <= k_max; ++k) p.push_back(tangent_moments(tm, k));
  const double dev = geometric_series_check(p, tm);
  double det_gap = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double h = tm.h[i], hc = tm.h[g.antipode[i]];
    det_gap = std::max(det_gap, std::abs(build_S_order1(h, hc).determinant() - h * h * hc * hc));
  }
  if (c.format("json") == "json") {
    json o = {{"k_max", k_max}, {"q", q}, {"geometric_series_deviation", dev}, {"order1_det_gap", det_gap}};
    return c.emit(o.dump(2) + "\n");
  }
  Table t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& tab : p) {
      std::vector<json> row;
      append(row, direction_columns(g.dirs[i], t.columns.empty() ? &t.columns : nullptr));
      if (t.columns.size() == static_cast<std::size_t>(b.dim())) t.columns.insert(t.columns.end(), {"k", "p"});
      row.insert(row.end(), {tab.k, tab.values[i]});
      t.rows.push_back(std::move(row));
    }
  }
  return c.emit(render(t, "csv"));
}

int cmd_recover_product(const Context& c, double q) {
  const Body b = c.body();
  const DirectionGrid g = c.grid(b.dim(), b.dim() == 2 ? "72" : "8x16");
  const TangentMeasure tm = tangent_measure(b, g, [q](const Direction&) { return q; });
  std::vector<MomentTable> p;
  for (int k = 0; k <= 3; ++k) p.push_back(tangent_moments(tm, k));
  const SupportProductEstimate est = recover_support_product(p);
  Table t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<json> row;
    append(row, direction_columns(g.dirs[i], t.columns.empty() ? &t.columns : nullptr));
    if (t.columns.size() == static_cast<std::size_t>(b.dim()))
      t.columns.insert(t.columns.end(), {"estimate", "support_product", "degenerate"});
    row.insert(row.end(), {est.degenerate[i] ? json("") : json(est.value[i]), tm.h[i] * tm.h[g.antipode[i]],
                           static_cast<bool>(est.degenerate[i])});
    t.rows.push_back(std::move(row));
  }
  return c.emit(render(t, c.format("csv")));
}

int cmd_detect(const Context& c, const std::vector<std::string>& translates) {
  const Body b = c.body();
  const DirectionGrid g = c.grid(b.dim(), b.dim() == 2 ? "720" : "48x96");
  std::vector<Vec> ts;
  for (const auto& s : translates) ts.push_back(parse_vec(s));
  if (ts.empty()) ts = default_translates(b);
  DetectionReport rep = support_product_quadratic_test(b, ts, g, c.tol(1e-7));
  rep.test = "detect-ellipsoid";
  return c.emit(render(rep, c.format("json")), rep.verdict());
}

int cmd_exponent(const Context& c, double window, int points) {
  const Body b = c.body();
  const Direction xi = c.direction(b);
  const ExponentFit fit = boundary_exponent(b, xi, window, points, c.quad());
  Table t{{"alpha", "fit_error"}, {{fit.alpha, fit.fit_error}}};
  return c.emit(render(t, c.format("csv")));
}

int cmd_stationary(const Context& c, int degree, double lmin, double lmax, int points) {
  const Body b = c.body();
  const Direction xi = c.direction(b);
  std::vector<double> grid = default_lambda_grid(b, xi, points);
  if (lmin > 0.0 && lmax > lmin) {
    for (int j = 0; j < points; ++j)
      grid[j] = std::exp(std::log(lmin) + (std::log(lmax) - std::log(lmin)) * j / std::max(1, points - 1));
  }
  const ExpansionFitReport rep = finite_expansion_test(b, xi, grid, degree, c.tol(1e-7), c.quad());
  if (c.format("json") == "json") {
    auto cvec = [](const std::vector<std::complex<double>>& v) {
      json a = json::array();
      for (const auto& z : v) a.push_back({z.real(), z.imag()});
      return a;
    };
    json o = {{"verdict", rep.verdict},           {"degree", rep.degree},
              {"b_plus", rep.b_plus},             {"b_minus", rep.b_minus},
              {"relative_residual", rep.relative_residual},
              {"residual_by_degree", rep.residual_by_degree},
              {"q_plus", cvec(rep.q_plus)},       {"q_minus", cvec(rep.q_minus)}};
    return c.emit(o.dump(2) + "\n", rep.verdict);
  }
  Table t{{"lambda", "re", "im"}, {}};
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i)
    t.rows.push_back({rep.lambdas[i], rep.values[i].real(), rep.values[i].imag()});
  return c.emit(render(t, "csv"), rep.verdict);
}

int cmd_harmonics(const Context& c, int L, double window) {
  const Body b = c.body();
  HarmonicTestOptions opt;
  opt.L = L;
  opt.window = window;
  opt.tol = c.tol(1e-6);
  opt.quad = c.quad();
  if (!c.cfg.t.empty()) {
    const HarmonicBasis basis(b.dim(), L);
    Table t{{"k", "alpha", "t", "p_value"}, {}};
    for (double s : c.cfg.t) {
      const HarmonicSample hs = harmonic_coefficients(b, s, basis, opt.quad);
      for (std::size_t j = 0; j < hs.index.size(); ++j)
        t.rows.push_back({hs.index[j].k, hs.index[j].alpha, s, hs.values[j]});
    }
    return c.emit(render(t, c.format("csv")));
  }
  const DetectionReport rep = test_coefficient_polynomiality(b, opt);
  return c.emit(render(rep, c.format("json")), rep.verdict());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical geometric tomography of convex bodies: section functions, transforms and "
               "characterization tests.\nEnvironment: TOMO_THREADS caps the number of worker threads."};
  app.name("tomo");
  app.require_subcommand(1);
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  ExperimentConfig& cfg = ctx.cfg;

  auto common = [&](CLI::App* s, bool with_body = true) {
    if (with_body) s->add_option("--body", cfg.body_path, "JSON body spec")->check(CLI::ExistingFile);
    s->add_option("--xi", cfg.xi, "direction, comma separated (repeatable)");
    s->add_option("--t", cfg.t, "offset(s), comma separated or repeated")->delimiter(',');
    s->add_option("--grid", cfg.grid, "grid size: profile points, circle angles (720) or sphere grid (48x96)");
    s->add_option("--tol", cfg.tol, "decision tolerance (command default when omitted)");
    s->add_option("--seed", cfg.seed, "rng seed for monte-carlo sections");
    s->add_option("--method", cfg.method, "auto | exact | clipping | tensor-gauss | monte-carlo");
    s->add_option("--samples", cfg.samples, "monte-carlo samples per section");
    s->add_option("--out", cfg.out, "write output to this file instead of stdout");
    s->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--expect", cfg.expect, "expected verdict; exit 2 when it differs");
  };

  auto* section = app.add_subcommand("section", "section function A(xi,t) at offsets or on a Chebyshev grid");
  common(section);
  auto* cutoff = app.add_subcommand("cutoff", "cutoff volume V-(xi,t) or V+(xi,t)");
  common(cutoff);
  std::string sign = "minus";
  cutoff->add_option("--sign", sign, "minus | plus");
  auto* fourier = app.add_subcommand("fourier-slice", "Fourier transform of the indicator along lambda xi");
  common(fourier);
  std::vector<double> lambdas;
  fourier->add_option("--lambda", lambdas, "frequencies")->delimiter(',');
  auto* invert = app.add_subcommand("invert", "back-projection inversion in R^3 at points x");
  common(invert);
  std::vector<std::string> points;
  int n_polar = 64, n_azimuth = 128;
  invert->add_option("--x", points, "evaluation point x,y,z (repeatable)");
  invert->add_option("--n-polar", n_polar, "polar nodes of the sphere grid");
  invert->add_option("--n-azimuth", n_azimuth, "azimuthal nodes of the sphere grid");
  auto* polyfit = app.add_subcommand("polyfit", "polynomiality of A(xi,.) per direction");
  common(polyfit);
  int max_degree = 20, fit_points = 64, m = 2;
  double margin = 1e-3;
  polyfit->add_option("--max-degree", max_degree, "largest fitted degree");
  polyfit->add_option("--margin", margin, "fraction of the width trimmed at each end");
  polyfit->add_option("--points", fit_points, "Chebyshev samples per direction");
  auto* power = app.add_subcommand("power-test", "polynomiality of A(xi,.)^m per direction");
  common(power);
  power->add_option("--m", m, "power");
  power->add_option("--max-degree", max_degree, "largest fitted degree");
  power->add_option("--margin", margin, "fraction of the width trimmed at each end");
  power->add_option("--points", fit_points, "Chebyshev samples per direction");
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert transform of A(xi,.) at --t, or its polynomiality test");
  common(hilbert);
  int h_degree = 1, h_points = 48;
  double h_window = 0.9;
  hilbert->add_option("--max-degree", h_degree, "largest fitted degree");
  hilbert->add_option("--window", h_window, "sample inside mid +- window * half-width");
  hilbert->add_option("--points", h_points, "samples per direction");
  auto* deriv = app.add_subcommand("derivatives", "k-th offset derivatives of A(xi,.) at t = 0");
  common(deriv);
  std::vector<int> ks{0, 1, 2, 3, 4};
  deriv->add_option("--k", ks, "derivative orders")->delimiter(',');
  auto* sing = app.add_subcommand("singularities", "real singularities of an algebraic equation Psi(t,w) = 0");
  common(sing, false);
  std::string equation;
  sing->add_option("--equation", equation, "JSON file {\"psi\": [[coefficients of w^0 in t], ...]}")
      ->check(CLI::ExistingFile);
  auto* moments = app.add_subcommand("moments", "moment tables M_k(xi) on a direction grid");
  common(moments);
  int k_max = 4;
  moments->add_option("--k-max", k_max, "largest moment degree");
  auto* range = app.add_subcommand("range-check", "homogeneity of M_k for k <= k-max");
  common(range);
  int range_k = 6;
  range->add_option("--k-max", range_k, "largest moment degree");
  auto* tangent = app.add_subcommand("tangent-system", "tangent-measure moments and the S P_k = P_{k+1} check");
  common(tangent);
  double q = 1.0;
  tangent->add_option("--k-max", k_max, "largest moment degree");
  tangent->add_option("--q", q, "constant tangent density");
  auto* recover = app.add_subcommand("recover-product", "recover h(xi) h(-xi) from tangent moments");
  common(recover);
  recover->add_option("--q", q, "constant tangent density");
  auto* detect = app.add_subcommand("detect-ellipsoid", "support-product quadratic test");
  common(detect);
  std::vector<std::string> translates;
  detect->add_option("--translates", translates, "translate vectors (repeatable); default four scaled axes");
  auto* exponent = app.add_subcommand("boundary-exponent", "tangency exponent of A near b_plus");
  common(exponent);
  double e_window = 1e-2;
  int e_points = 24;
  exponent->add_option("--window", e_window, "largest distance from b_plus, as a fraction of the width");
  exponent->add_option("--points", e_points, "log-spaced samples");
  auto* stationary = app.add_subcommand("stationary-phase", "finite expansion test of I(lambda)");
  common(stationary);
  int s_degree = 2, s_points = 64;
  double lmin = 0.0, lmax = 0.0;
  stationary->add_option("--degree", s_degree, "largest power of 1/lambda");
  stationary->add_option("--lambda-min", lmin, "smallest lambda (default 10/width)");
  stationary->add_option("--lambda-max", lmax, "largest lambda (default 2000/width)");
  stationary->add_option("--points", s_points, "lambda samples");
  auto* harmonics = app.add_subcommand("harmonics", "harmonic coefficients p_{k,alpha}(t) and their polynomiality");
  common(harmonics);
  int L = 4;
  double window = 0.0;
  harmonics->add_option("--L", L, "largest harmonic degree");
  harmonics->add_option("--window", window, "half-width of the t window (default inradius/2)");

  if (args.empty()) {
    err << app.help();
    return 1;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    const std::string& name = cfg.command;
    if (name == "section") {
      int n = 0;
      if (!cfg.grid.empty()) n = std::stoi(cfg.grid);
      return cmd_section(ctx, n);
    }
    if (name == "cutoff") return cmd_cutoff(ctx, sign);
    if (name == "fourier-slice") return cmd_fourier(ctx, lambdas);
    if (name == "invert") return cmd_invert(ctx, points, n_polar, n_azimuth);
    if (name == "polyfit") return cmd_polyfit(ctx, 1, max_degree, margin, fit_points);
    if (name == "power-test") return cmd_polyfit(ctx, m, max_degree, margin, fit_points);
    if (name == "hilbert") return cmd_hilbert(ctx, h_degree, h_window, h_points);
    if (name == "derivatives") return cmd_derivatives(ctx, ks);
    if (name == "singularities") return cmd_singularities(ctx, equation);
    if (name == "moments") return cmd_moments(ctx, k_max);
    if (name == "range-check") return cmd_range_check(ctx, range_k);
    if (name == "tangent-system") return cmd_tangent_system(ctx, k_max, q);
    if (name == "recover-product") return cmd_recover_product(ctx, q);
    if (name == "detect-ellipsoid") return cmd_detect(ctx, translates);
    if (name == "boundary-exponent") return cmd_exponent(ctx, e_window, e_points);
    if (name == "stationary-phase") return cmd_stationary(ctx, s_degree, lmin, lmax, s_points);
    if (name == "harmonics") return cmd_harmonics(ctx, L, window);
    err << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace tomo::cli
