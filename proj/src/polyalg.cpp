#include "tomo/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tomo {

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<double> c) : coeffs(std::move(c)) {
  double m = 0.0;
  for (double x : coeffs) m = std::max(m, std::abs(x));
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-12 * m) coeffs.pop_back();
  if (m == 0.0) coeffs.clear();
}

double Poly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// ---------------------------------------------------------------- Chebyshev

namespace {

double to_unit(double t, double lo, double hi) { return (2.0 * t - lo - hi) / (hi - lo); }

Mat chebyshev_vandermonde(const std::vector<double>& x, int degree) {
  Mat v(static_cast<Eigen::Index>(x.size()), degree + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    v(r, 0) = 1.0;
    if (degree >= 1) v(r, 1) = x[i];
    for (int k = 2; k <= degree; ++k) v(r, k) = 2.0 * x[i] * v(r, k - 1) - v(r, k - 2);
  }
  return v;
}

}  // namespace

double ChebSeries::operator()(double t) const {
  const double x = to_unit(t, lo, hi);
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

ChebSeries ChebSeries::derivative() const {
  ChebSeries d{lo, hi, {}};
  const int n = static_cast<int>(c.size());
  if (n <= 1) {
    d.c = {0.0};
    return d;
  }
  d.c.assign(n - 1, 0.0);
  for (int k = n - 1; k >= 1; --k) {
    d.c[k - 1] = 2.0 * k * c[k] + (k + 1 < n - 1 ? d.c[k + 1] : 0.0);
  }
  d.c[0] *= 0.5;
  const double scale = 2.0 / (hi - lo);
  for (double& v : d.c) v *= scale;
  return d;
}

Poly ChebSeries::to_poly() const {
  const int n = static_cast<int>(c.size());
  // Power-basis coefficients in x of sum c_k T_k(x).
  std::vector<double> px(n, 0.0), tkm2(n, 0.0), tkm1(n, 0.0), tk(n, 0.0);
  for (int k = 0; k < n; ++k) {
    std::fill(tk.begin(), tk.end(), 0.0);
    if (k == 0) tk[0] = 1.0;
    else if (k == 1) tk[1] = 1.0;
    else {
      for (int j = 0; j < n; ++j) {
        if (j > 0) tk[j] += 2.0 * tkm1[j - 1];
        tk[j] -= tkm2[j];
      }
    }
    for (int j = 0; j < n; ++j) px[j] += c[k] * tk[j];
    tkm2 = tkm1;
    tkm1 = tk;
  }
  // Substitute x = a t + b by Horner in polynomial arithmetic.
  const double a = 2.0 / (hi - lo), b = -(hi + lo) / (hi - lo);
  std::vector<double> pt(n, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    std::vector<double> next(n, 0.0);
    for (int j = 0; j < n; ++j) {
      next[j] += b * pt[j];
      if (j + 1 < n) next[j + 1] += a * pt[j];
    }
    next[0] += px[k];
    pt = std::move(next);
  }
  return Poly(std::move(pt));
}

ChebSeries chebyshev_fit(const std::vector<double>& t, const std::vector<double>& y, int degree, double lo,
                         double hi) {
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = to_unit(t[i], lo, hi);
  const Mat v = chebyshev_vandermonde(x, degree);
  const Vec rhs = Eigen::Map<const Vec>(y.data(), static_cast<Eigen::Index>(y.size()));
  const Vec c = v.colPivHouseholderQr().solve(rhs);
  return ChebSeries{lo, hi, std::vector<double>(c.data(), c.data() + c.size())};
}

std::string to_string(FitVerdict v) {
  switch (v) {
    case FitVerdict::Polynomial: return "polynomial";
    case FitVerdict::NotPolynomial: return "not-polynomial";
    default: return "inconclusive";
  }
}

PolyFitReport fit_polynomial(const std::vector<double>& t, const std::vector<double>& y, int max_degree, double tol,
                             double scale) {
  if (t.size() != y.size()) throw Error("fit_polynomial: sample arrays differ in length");
  if (max_degree < 0) throw Error("fit_polynomial: max_degree must be >= 0");
  PolyFitReport rep;
  if (t.empty()) {
    rep.verdict = FitVerdict::Polynomial;
    rep.relative_by_degree.assign(max_degree + 1, 0.0);
    return rep;
  }
  if (static_cast<int>(t.size()) < max_degree + 5) throw Error("fit_polynomial: need at least max_degree + 5 samples");
  std::vector<double> sorted = t;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("fit_polynomial: sample offsets must be distinct");
  const double lo = sorted.front(), hi = sorted.back();
  if (!(hi > lo)) throw Error("fit_polynomial: sample offsets must be distinct");

  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  const double denom = scale > 0.0 ? scale : ymax;
  rep.series = ChebSeries{lo, hi, {0.0}};
  if (ymax == 0.0) {
    rep.verdict = FitVerdict::Polynomial;
    rep.relative_by_degree.assign(max_degree + 1, 0.0);
    return rep;
  }

  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = to_unit(t[i], lo, hi);
  const Mat vfull = chebyshev_vandermonde(x, max_degree);
  Eigen::JacobiSVD<Mat> svd(vfull);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12)
    throw Error("increase samples or reduce degree");

  const Vec rhs = Eigen::Map<const Vec>(y.data(), static_cast<Eigen::Index>(y.size()));
  int chosen = -1;
  Vec chosen_c, chosen_res;
  for (int d = 0; d <= max_degree; ++d) {
    const Mat v = vfull.leftCols(d + 1);
    const Vec c = v.colPivHouseholderQr().solve(rhs);
    const Vec res = rhs - v * c;
    const double rel = res.cwiseAbs().maxCoeff() / denom;
    rep.relative_by_degree.push_back(rel);
    if (chosen < 0 && rel < tol) {
      chosen = d;
      chosen_c = c;
      chosen_res = res;
    }
    if (d == max_degree && chosen < 0) {
      chosen_c = c;
      chosen_res = res;
    }
  }
  const double top = rep.relative_by_degree.back();
  if (chosen >= 0) rep.verdict = FitVerdict::Polynomial;
  else rep.verdict = top > kPlateauFactor * tol ? FitVerdict::NotPolynomial : FitVerdict::Inconclusive;
  rep.best_degree = chosen >= 0 ? chosen : max_degree;
  rep.series = ChebSeries{lo, hi, std::vector<double>(chosen_c.data(), chosen_c.data() + chosen_c.size())};
  rep.poly = rep.series.to_poly();
  rep.max_residual = chosen_res.cwiseAbs().maxCoeff();
  rep.rms_residual = std::sqrt(chosen_res.squaredNorm() / static_cast<double>(chosen_res.size()));
  rep.relative_residual = rep.max_residual / denom;
  return rep;
}

// ---------------------------------------------------------------- verdict tests

namespace {

Outcome outcome_of(FitVerdict v) {
  switch (v) {
    case FitVerdict::Polynomial: return Outcome::Positive;
    case FitVerdict::NotPolynomial: return Outcome::Negative;
    default: return Outcome::Inconclusive;
  }
}

DetectionItem fit_item(const Direction& xi, const PolyFitReport& fit) {
  DetectionItem item;
  item.label = format_vector(xi.vec());
  item.outcome = outcome_of(fit.verdict);
  item.degree = fit.best_degree;
  item.residual = fit.relative_residual;
  if (fit.verdict == FitVerdict::Polynomial) item.details["coefficients"] = fit.poly.coeffs;
  item.details["relative_by_degree"] = fit.relative_by_degree;
  return item;
}

DetectionReport profile_power_test(const Body& body, int m, const std::vector<Direction>& directions,
                                   const PolyTestOptions& opt, const std::string& name) {
  if (directions.empty()) throw Error(name + ": need at least one direction");
  if (m < 1) throw Error(name + ": power must be >= 1");
  DetectionReport rep;
  rep.test = name;
  rep.items.resize(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const SectionProfile prof = section_profile(body, directions[i], opt.points, opt.quad, opt.margin);
    std::vector<double> y(prof.values.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = std::pow(prof.values[j], m);
    rep.items[i] = fit_item(directions[i], fit_polynomial(prof.offsets, y, opt.max_degree, opt.tol));
  }
  return rep;
}

}  // namespace

DetectionReport test_polynomial_integrability(const Body& body, const std::vector<Direction>& directions,
                                              const PolyTestOptions& opt) {
  return profile_power_test(body, 1, directions, opt, "polynomial-integrability");
}

DetectionReport test_power_polynomiality(const Body& body, int m, const std::vector<Direction>& directions,
                                         const PolyTestOptions& opt) {
  DetectionReport rep = profile_power_test(body, m, directions, opt, "power-polynomiality");
  rep.test += " m=" + std::to_string(m);
  return rep;
}

// ---------------------------------------------------------------- Hilbert

double hilbert_transform(const OffsetFunction& g, double t, double rel_tol) {
  if (!(g.hi > g.lo)) throw Error("hilbert_transform: empty support");
  const double mid = 0.5 * (g.lo + g.hi), half = 0.5 * (g.hi - g.lo);
  const bool inside = t > g.lo && t < g.hi;
  const double ft = inside ? g.f(t) : 0.0;

  // s = mid - half cos(theta) removes the endpoint square-root behaviour.
  auto integrand = [&](double th) {
    const double s = mid - half * std::cos(th);
    if (s == t) return 0.0;
    return (g.f(s) - ft) / (t - s) * (half * std::sin(th));
  };
  std::vector<double> breaks;
  for (double b : g.breaks) breaks.push_back(std::acos(std::clamp((mid - b) / half, -1.0, 1.0)));
  if (inside) breaks.push_back(std::acos(std::clamp((mid - t) / half, -1.0, 1.0)));
  std::sort(breaks.begin(), breaks.end());
  const double regular = integrate_adaptive(integrand, 0.0, M_PI, breaks, rel_tol, 1e-14 * half).value;
  const double log_term = inside ? ft * std::log((t - g.lo) / (g.hi - t)) : 0.0;
  return (regular + log_term) / M_PI;
}

HilbertValue hilbert_transform(const SectionProfile& profile, double t) {
  const auto& x = profile.offsets;
  const std::size_t n = x.size();
  if (n < 8) throw Error("hilbert_transform: profile too short");
  // Barycentric weights for the given nodes, rescaled to avoid overflow.
  std::vector<double> w(n, 1.0);
  const double span = x.back() - x.front();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w[j] /= 4.0 * (x[j] - x[k]) / span;
  auto interp = [&](double s) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = s - x[j];
      if (d == 0.0) return profile.values[j];
      num += w[j] / d * profile.values[j];
      den += w[j] / d;
    }
    return num / den;
  };
  OffsetFunction g{interp, x.front(), x.back(), {}};
  HilbertValue out;
  out.value = hilbert_transform(g, t, 1e-10);

  const ChebSeries cs = chebyshev_fit(x, profile.values, static_cast<int>(n) - 1, x.front(), x.back());
  double scale = 0.0;
  for (double v : profile.values) scale = std::max(scale, std::abs(v));
  double tail = 0.0;
  for (std::size_t k = n >= 3 ? n - 3 : 0; k < n; ++k) tail = std::max(tail, std::abs(cs.c[k]));
  out.warn = scale > 0.0 && tail > 1e-6 * scale;
  return out;
}

DetectionReport test_hilbert_polynomiality(const Body& body, const std::vector<Direction>& directions,
                                           const HilbertTestOptions& opt) {
  if (directions.empty()) throw Error("test_hilbert_polynomiality: need at least one direction");
  DetectionReport rep;
  rep.test = "hilbert-polynomiality";
  if (body.dim() % 2 != 0) rep.warnings.push_back("the Hilbert criterion is stated for even dimension");
  rep.items.resize(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Direction& xi = directions[i];
    const SupportInterval si = support_interval(body, xi);
    OffsetFunction g{[&](double s) { return section_function(body, xi, s, opt.quad).value; }, si.lo, si.hi,
                     section_breakpoints(body, xi)};
    const auto ts = chebyshev_roots(si.mid() - opt.window * si.half(), si.mid() + opt.window * si.half(), opt.points);
    std::vector<double> y(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) y[j] = hilbert_transform(g, ts[j]);
    rep.items[i] = fit_item(xi, fit_polynomial(ts, y, opt.max_degree, opt.tol));
  }
  return rep;
}

// ---------------------------------------------------------------- derivatives

double derivative_at_zero(const SectionProfile& profile, int k) {
  if (k < 0) throw Error("derivative order must be >= 0");
  if (k > 12) throw Error("derivative order too large for stable differentiation (k > 12)");
  const double lo = profile.support.lo, hi = profile.support.hi;
  if (!(lo < 0.0 && hi > 0.0)) throw Error("t = 0 is not inside the support interval");
  const double r = 0.5 * std::min(-lo, hi);
  std::vector<double> t, y;
  for (std::size_t i = 0; i < profile.offsets.size(); ++i) {
    if (std::abs(profile.offsets[i]) <= r * (1.0 + 1e-12)) {
      t.push_back(profile.offsets[i]);
      y.push_back(profile.values[i]);
    }
  }
  if (static_cast<int>(t.size()) < k + 5) throw Error("too few profile samples in the central window");
  const int degree = std::min(static_cast<int>(t.size()) - 1, 20);
  ChebSeries cs = chebyshev_fit(t, y, degree, t.front(), t.back());
  for (int j = 0; j < k; ++j) cs = cs.derivative();
  return cs(0.0);
}

double derivative_at_zero(const Body& body, const Direction& xi, int k, const QuadratureConfig& cfg) {
  if (k > 12) throw Error("derivative order too large for stable differentiation (k > 12)");
  const SupportInterval si = support_interval(body, xi);
  if (!(si.lo < 0.0 && si.hi > 0.0)) throw Error("t = 0 is not inside the support interval");
  const double r = 0.5 * std::min(-si.lo, si.hi);
  return derivative_at_zero(section_profile_at(body, xi, chebyshev_lobatto(-r, r, 33), cfg), k);
}

// ---------------------------------------------------------------- discriminant

double AlgebraicEquation::eval(double t, double w) const {
  double acc = 0.0;
  for (auto it = psi.rbegin(); it != psi.rend(); ++it) acc = acc * w + (*it)(t);
  return acc;
}

AlgebraicEquation parse_equation(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("psi")) throw Error("equation: field 'psi' is missing");
  const auto& arr = j.at("psi");
  if (!arr.is_array() || arr.size() < 2) throw Error("equation: field 'psi' must list at least two coefficient polynomials");
  AlgebraicEquation eq;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& row = arr[i];
    if (!row.is_array()) throw Error("equation: field 'psi[" + std::to_string(i) + "]' must be an array of numbers");
    std::vector<double> c;
    for (const auto& v : row) {
      if (!v.is_number()) throw Error("equation: field 'psi[" + std::to_string(i) + "]' must be an array of numbers");
      c.push_back(v.get<double>());
    }
    eq.psi.emplace_back(std::move(c));
  }
  if (eq.psi.back().is_zero()) throw Error("equation: field 'psi' has a zero leading coefficient psi_N");
  return eq;
}

namespace {

void check_equation(const AlgebraicEquation& eq) {
  if (eq.N() < 1) throw Error("equation must have degree >= 1 in w");
  if (eq.N() > 10) throw Error("equation degree in w above 10 is not supported");
  if (eq.psi.back().is_zero()) throw Error("leading coefficient psi_N is the zero polynomial");
}

// Sylvester matrix of Psi(t,.) and dPsi/dw(t,.) from the coefficient values.
Mat sylvester(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  const int size = 2 * n - 1;
  Mat s = Mat::Zero(size, size);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j <= n; ++j) s(i, i + j) = f[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(n - 1 + i, i + j) = (n - j) * f[n - j];
  return s;
}

}  // namespace

int formal_discriminant_degree(const AlgebraicEquation& eq) {
  check_equation(eq);
  const int n = eq.N();
  const int size = 2 * n - 1;
  std::vector<int> deg(n + 1);
  for (int j = 0; j <= n; ++j) deg[j] = eq.psi[j].is_zero() ? -1 : eq.psi[j].degree();
  // Entry degrees follow the Sylvester layout; -1 marks an identically zero entry.
  std::vector<std::vector<int>> d(size, std::vector<int>(size, -1));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j <= n; ++j) d[i][i + j] = deg[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[n - 1 + i][i + j] = deg[n - j];
  constexpr int kNone = std::numeric_limits<int>::min();
  std::vector<int> best(std::size_t{1} << size, kNone);
  best[0] = 0;
  for (unsigned mask = 0; mask < best.size(); ++mask) {
    if (best[mask] == kNone) continue;
    const int row = __builtin_popcount(mask);
    if (row == size) continue;
    for (int col = 0; col < size; ++col) {
      if (mask & (1u << col) || d[row][col] < 0) continue;
      auto& slot = best[mask | (1u << col)];
      slot = std::max(slot, best[mask] + d[row][col]);
    }
  }
  const int top = best.back();
  if (top == kNone) throw Error("discriminant vanishes identically");
  return top;
}

std::vector<double> discriminant_coefficients(const AlgebraicEquation& eq) {
  check_equation(eq);
  const int n = eq.N();
  int dt = 0;
  for (const auto& p : eq.psi) dt = std::max(dt, p.degree());
  const int formal = formal_discriminant_degree(eq);
  const int m = (2 * n - 1) * dt + 1;

  double lead_scale = 0.0;
  for (double c : eq.psi.back().coeffs) lead_scale = std::max(lead_scale, std::abs(c));
  std::vector<double> nodes = chebyshev_roots(-1.0, 1.0, m);
  const double spacing = m > 1 ? 2.0 / m : 1.0;
  std::vector<double> values(m);
  for (int i = 0; i < m; ++i) {
    int attempt = 0;
    while (std::abs(eq.psi.back()(nodes[i])) <= 1e-13 * lead_scale) {
      if (++attempt > 8) throw Error("degenerate leading coefficient");
      nodes[i] += 0.0137 * spacing * attempt;
    }
    std::vector<double> f(n + 1);
    for (int j = 0; j <= n; ++j) f[j] = eq.psi[j](nodes[i]);
    values[i] = sylvester(f).partialPivLu().determinant();
  }
  std::vector<double> x(nodes);
  const Mat v = chebyshev_vandermonde(x, m - 1);
  const Vec c = v.partialPivLu().solve(Eigen::Map<const Vec>(values.data(), m));
  // Expand to the monomial basis without trimming.
  ChebSeries cs{-1.0, 1.0, std::vector<double>(c.data(), c.data() + c.size())};
  std::vector<double> coeffs(formal + 1, 0.0);
  const Poly p = cs.to_poly();
  for (int k = 0; k <= formal && k < static_cast<int>(p.coeffs.size()); ++k) coeffs[k] = p.coeffs[k];
  return coeffs;
}

Poly discriminant_in_w(const AlgebraicEquation& eq) { return Poly(discriminant_coefficients(eq)); }

std::vector<std::complex<double>> poly_roots(const Poly& p) {
  const int d = p.degree();
  if (p.is_zero() || d == 0) return {};
  Mat comp = Mat::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.coeffs[i] / p.coeffs[d];
  Eigen::EigenSolver<Mat> es(comp, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

std::string SingularityReport::label() const {
  switch (kind) {
    case Kind::Free: return "free";
    case Kind::Singular: return "singular";
    default: return "degenerate-at-infinity";
  }
}

namespace {

// A simple discriminant zero is a fold: f(t,w) = f_w(t,w) = 0 with f_t, f_ww nonzero, so Newton
// in (t, w) converges to full precision where the determinant alone stalls near sqrt(eps).
double polish_fold(const AlgebraicEquation& eq, double t) {
  const int n = eq.N();
  auto wpoly = [&](double s) {
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = eq.psi[k](s);
    return Poly(c);
  };
  const auto roots = poly_roots(wpoly(t));
  double w = 0.0, gap = 1e300;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < gap) {
        gap = std::abs(roots[i] - roots[j]);
        w = 0.5 * (roots[i] + roots[j]).real();
      }
  if (gap == 1e300) return t;
  const double t_in = t;
  for (int it = 0; it < 20; ++it) {
    double f = 0, fw = 0, fww = 0, ft = 0, fwt = 0;
    for (int k = n; k >= 0; --k) {
      const Poly& p = eq.psi[k];
      double at = 0.0;
      for (std::size_t m = p.coeffs.size(); m-- > 1;) at = at * t + m * p.coeffs[m];
      const double a = p(t);
      const double wk = std::pow(w, k);
      f += a * wk;
      ft += at * wk;
      if (k >= 1) {
        fw += k * a * std::pow(w, k - 1);
        fwt += k * at * std::pow(w, k - 1);
      }
      if (k >= 2) fww += k * (k - 1.0) * a * std::pow(w, k - 2);
    }
    // J = [[ft, fw], [fwt, fww]] acting on (dt, dw).
    const double det = ft * fww - fw * fwt;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dt = (f * fww - fw * fw) / det;
    const double dw = (ft * fw - fwt * f) / det;
    t -= dt;
    w -= dw;
    if (std::abs(dt) <= 1e-16 * std::max(1.0, std::abs(t)) && std::abs(dw) <= 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  // Reject if Newton wandered off to a different fold.
  if (!std::isfinite(t) || std::abs(t - t_in) > 1e-4 * std::max(1.0, std::abs(t_in))) return t_in;
  return t;
}

}  // namespace

SingularityReport has_real_singularities(const AlgebraicEquation& eq) {
  const std::vector<double> raw = discriminant_coefficients(eq);
  double maxc = 0.0;
  for (double c : raw) maxc = std::max(maxc, std::abs(c));
  if (maxc == 0.0) throw Error("discriminant vanishes identically");
  SingularityReport rep;
  rep.degenerate_at_infinity = std::abs(raw.back()) < 1e-10 * maxc;
  rep.discriminant = Poly(raw);
  const int n = eq.N();
  auto exact_d = [&](double t) {
    std::vector<double> f(n + 1);
    for (int k = 0; k <= n; ++k) f[k] = eq.psi[k](t);
    return sylvester(f).partialPivLu().determinant();
  };
  for (const auto& z : poly_roots(rep.discriminant)) {
    if (!(std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z.real())))) continue;
    // The interpolant degrades away from [-1, 1]; refine by secant on the direct determinant.
    double r = z.real();
    double h = 1e-7 * std::max(1.0, std::abs(r));
    double r0 = r - h, d0 = exact_d(r0), d1 = exact_d(r);
    for (int it = 0; it < 30 && d1 != 0.0 && d1 != d0; ++it) {
      const double next = r - d1 * (r - r0) / (d1 - d0);
      if (!std::isfinite(next) || std::abs(next - z.real()) > 1e-3 * std::max(1.0, std::abs(z.real()))) break;
      r0 = r;
      d0 = d1;
      r = next;
      d1 = exact_d(r);
      if (std::abs(r - r0) <= 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    r = polish_fold(eq, r);
    rep.roots.push_back(r);
  }
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.roots.erase(std::unique(rep.roots.begin(), rep.roots.end(),
                              [](double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)); }),
                  rep.roots.end());
  if (!rep.roots.empty()) rep.kind = SingularityReport::Kind::Singular;
  else if (rep.degenerate_at_infinity) rep.kind = SingularityReport::Kind::DegenerateAtInfinity;
  return rep;
}

}  // namespace tomo
