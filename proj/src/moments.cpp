#include "tomo/moments.hpp"

#include <algorithm>
#include <cmath>

namespace tomo {

double moment(const Body& body, const Direction& xi, int k, const QuadratureConfig& cfg) {
  if (k < 0) throw Error("moment degree must be >= 0");
  const SupportInterval si = support_interval(body, xi);
  return integrate_section(body, xi, [k](double t) { return std::pow(t, k); }, si.lo, si.hi, cfg);
}

MomentVector moments_upto(const Body& body, const Direction& xi, int kmax, const QuadratureConfig& cfg) {
  if (kmax < 0) throw Error("moment degree must be >= 0");
  const SupportInterval si = support_interval(body, xi);
  const double mid = si.mid(), half = si.half();

  std::vector<double> cuts{0.0};
  for (double b : section_breakpoints(body, xi)) {
    const double th = std::acos(std::clamp((mid - b) / half, -1.0, 1.0));
    if (th > 1e-12 && th < M_PI - 1e-12) cuts.push_back(th);
  }
  cuts.push_back(M_PI);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-12; }), cuts.end());

  const GaussRule& rule = gauss_legendre(16);
  auto level = [&](int per_segment) {
    MomentVector mv{std::vector<double>(kmax + 1, 0.0), std::vector<double>(kmax + 1, 0.0)};
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double step = (cuts[s + 1] - cuts[s]) / per_segment;
      for (int p = 0; p < per_segment; ++p) {
        const double a = cuts[s] + p * step;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double th = a + 0.5 * step * (rule.nodes[i] + 1.0);
          const double t = mid - half * std::cos(th);
          const double w = 0.5 * step * rule.weights[i] * half * std::sin(th);
          const double a_t = section_function(body, xi, t, cfg).value * w;
          double tk = 1.0;
          for (int k = 0; k <= kmax; ++k) {
            mv.moments[k] += a_t * tk;
            mv.magnitudes[k] += std::abs(a_t * tk);
            tk *= t;
          }
        }
      }
    }
    return mv;
  };

  const bool sampled = cfg.method == QuadratureConfig::Method::MonteCarlo ||
                       cfg.method == QuadratureConfig::Method::TensorGauss;
  int per_segment = 2;
  MomentVector coarse = level(per_segment);
  if (sampled) return coarse;
  const double tol = std::max(10.0 * cfg.rel_tol, 1e-14);
  while (true) {
    per_segment *= 2;
    MomentVector fine = level(per_segment);
    double worst = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double scale = std::max(fine.magnitudes[k], 1e-300);
      worst = std::max(worst, std::abs(fine.moments[k] - coarse.moments[k]) / scale);
    }
    if (worst <= tol) return fine;
    if (per_segment >= 512) throw QuadratureError("moment quadrature did not converge", fine.moments[kmax], worst);
    coarse = std::move(fine);
  }
}

std::vector<MomentTable> moment_tables(const Body& body, const DirectionGrid& grid, int kmax,
                                       const QuadratureConfig& cfg) {
  std::vector<MomentTable> tables(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    tables[k].k = k;
    tables[k].grid = grid;
    tables[k].values.assign(grid.size(), 0.0);
  }
  std::vector<MomentVector> per_dir(grid.size());
  const long m = static_cast<long>(grid.size());
  std::string failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      per_dir[i] = moments_upto(body, grid.dirs[i], kmax, cfg);
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  for (long i = 0; i < m; ++i) {
    for (int k = 0; k <= kmax; ++k) {
      tables[k].values[i] = per_dir[i].moments[k];
      tables[k].magnitude = std::max(tables[k].magnitude, per_dir[i].magnitudes[k]);
    }
  }
  return tables;
}

std::vector<std::vector<int>> monomial_exponents(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int d = left; d >= 0; --d) {
      e[var] = d;
      rec(var + 1, left - d);
    }
  };
  rec(0, k);
  return out;
}

HomogeneousFitReport fit_homogeneous(const MomentTable& table, double tol) {
  const DirectionGrid& g = table.grid;
  if (table.values.size() != g.size()) throw Error("moment table does not match its grid");
  HomogeneousFitReport rep;
  rep.k = table.k;
  rep.exponents = monomial_exponents(g.dim, table.k);
  const auto cols = static_cast<Eigen::Index>(rep.exponents.size());
  const auto rows = static_cast<Eigen::Index>(g.size());
  if (rows < 3 * cols) throw Error("enlarge direction grid");

  double vmax = 0.0;
  for (double v : table.values) vmax = std::max(vmax, std::abs(v));
  const double denom = std::max(vmax, table.magnitude);
  rep.coefficients.assign(rep.exponents.size(), 0.0);
  if (denom == 0.0) {
    rep.passed = true;
    return rep;
  }

  // A degree-k form has parity (-1)^k; the other component must vanish.
  const double sign = table.k % 2 == 0 ? 1.0 : -1.0;
  Vec right(rows);
  double wrong = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double v = table.values[i], va = table.values[g.antipode[i]];
    right[i] = 0.5 * (v + sign * va);
    wrong = std::max(wrong, std::abs(0.5 * (v - sign * va)));
  }
  rep.parity_residual = wrong / denom;

  Mat x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vec& xi = g.dirs[i].vec();
    for (Eigen::Index j = 0; j < cols; ++j) {
      double m = 1.0;
      for (int d = 0; d < g.dim; ++d) m *= std::pow(xi[d], rep.exponents[j][d]);
      x(i, j) = m;
    }
  }
  Eigen::ColPivHouseholderQR<Mat> qr(x);
  if (qr.rank() < cols) throw Error("enlarge direction grid");
  const Vec c = qr.solve(right);
  const double fit = (right - x * c).cwiseAbs().maxCoeff() / denom;
  rep.coefficients.assign(c.data(), c.data() + c.size());
  rep.relative_residual = std::max(fit, rep.parity_residual);
  rep.passed = rep.relative_residual < tol;
  return rep;
}

TangentMeasure tangent_measure(const Body& body, const DirectionGrid& grid,
                               const std::function<double(const Direction&)>& q) {
  TangentMeasure tm{grid, {}, {}};
  for (const auto& xi : grid.dirs) {
    tm.q.push_back(q(xi));
    tm.h.push_back(support(body, xi));
  }
  return tm;
}

MomentTable tangent_moments(const TangentMeasure& tm, int k) {
  if (k < 0) throw Error("moment degree must be >= 0");
  MomentTable t{k, tm.grid, std::vector<double>(tm.grid.size()), 0.0};
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < tm.grid.size(); ++i) {
    const int a = tm.grid.antipode[i];
    t.values[i] = tm.q[i] * std::pow(tm.h[i], k) + sign * tm.q[a] * std::pow(tm.h[a], k);
  }
  return t;
}

Mat build_S_order0(double h, double hc) {
  Mat s(2, 2);
  s << 0.0, 1.0, h * hc, h - hc;
  return s;
}

Mat build_T_order0(double h, double hc) {
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = h;
  t(1, 1) = -hc;
  return t;
}

Mat build_S_order1(double h, double hc) {
  // Companion matrix of (z - h)^2 (z + hc)^2.
  const double s1 = 2.0 * (h - hc);
  const double s2 = -h * h + 4.0 * h * hc - hc * hc;
  const double s3 = -2.0 * h * hc * (h - hc);
  const double s4 = -h * h * hc * hc;
  Mat s = Mat::Zero(4, 4);
  for (int i = 0; i < 3; ++i) s(i, i + 1) = 1.0;
  s(3, 0) = s4;
  s(3, 1) = s3;
  s(3, 2) = s2;
  s(3, 3) = s1;
  return s;
}

Mat build_T_order1(double h, double hc) {
  Mat t = Mat::Zero(4, 4);
  t(0, 0) = t(1, 1) = h;
  t(0, 1) = -1.0;
  t(2, 2) = t(3, 3) = -hc;
  t(2, 3) = -1.0;
  return t;
}

double order1_moment(double h, double hc, double a0, double a1, double b0, double b1, int k) {
  auto plane = [k](double x, double w0, double w1) {
    const double d = k == 0 ? 0.0 : k * std::pow(x, k - 1);
    return w0 * std::pow(x, k) - w1 * d;
  };
  return plane(h, a0, a1) + plane(-hc, b0, b1);
}

double geometric_series_check(const std::vector<MomentTable>& p, const TangentMeasure& tm) {
  if (p.size() < 4) throw Error("geometric_series_check needs p_0..p_K with K >= 3");
  double dev = 0.0;
  for (std::size_t i = 0; i < tm.grid.size(); ++i) {
    const int a = tm.grid.antipode[i];
    const Mat s = build_S_order0(tm.h[i], tm.h[a]);
    for (std::size_t k = 0; k + 2 < p.size(); ++k) {
      Eigen::Vector2d pk(p[k].values[i], p[k + 1].values[i]);
      Eigen::Vector2d next(p[k + 1].values[i], p[k + 2].values[i]);
      dev = std::max(dev, (s * pk - next).cwiseAbs().maxCoeff());
    }
  }
  return dev;
}

std::size_t SupportProductEstimate::degenerate_count() const {
  return static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), true));
}

SupportProductEstimate recover_support_product(const std::vector<MomentTable>& p) {
  if (p.size() < 4) throw Error("recover_support_product needs the p_0..p_3 tables");
  const std::size_t m = p[0].values.size();
  SupportProductEstimate est;
  est.value.assign(m, 0.0);
  est.degenerate.assign(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    const double p0 = p[0].values[i], p1 = p[1].values[i], p2 = p[2].values[i], p3 = p[3].values[i];
    const double d01 = p0 * p2 - p1 * p1;
    const double d12 = p1 * p3 - p2 * p2;
    if (std::abs(d01) <= kDegeneracyFloor) {
      est.degenerate[i] = true;
      est.value[i] = std::nan("");
      continue;
    }
    est.value[i] = -d12 / d01;
  }
  return est;
}

DirectionGrid detection_grid(int dim, const DetectOptions& opt) {
  if (dim == 2) return DirectionGrid::circle(opt.grid_circle);
  if (dim == 3) return DirectionGrid::sphere(opt.grid_polar, opt.grid_azimuth);
  throw Error("ellipsoid detection is implemented for n = 2, 3");
}

DetectionReport support_product_quadratic_test(const Body& body, const std::vector<Vec>& translates,
                                               const DirectionGrid& grid, double tol) {
  if (translates.size() < 3) throw Error("support-product test needs at least 3 translates");
  if (std::none_of(translates.begin(), translates.end(), [](const Vec& a) { return a.isZero(0.0); }))
    throw Error("support-product test needs the zero translate");
  if (grid.dim != body.dim()) throw Error("direction grid dimension does not match the body");

  std::vector<double> h(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) h[i] = support(body, grid.dirs[i]);

  DetectionReport rep;
  rep.test = "support-product-quadratic";
  rep.positive = "ellipsoid";
  rep.negative = "not ellipsoid";
  for (const Vec& a : translates) {
    if (a.size() != body.dim()) throw Error("translate dimension does not match the body");
    MomentTable table{2, grid, std::vector<double>(grid.size()), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double shift = a.dot(grid.dirs[i].vec());
      table.values[i] = (h[i] + shift) * (h[grid.antipode[i]] - shift);
    }
    const HomogeneousFitReport fit = fit_homogeneous(table, tol);
    DetectionItem item;
    item.label = "a=" + format_vector(a);
    item.outcome = fit.passed ? Outcome::Positive : Outcome::Negative;
    item.degree = 2;
    item.residual = fit.relative_residual;
    item.details["form"] = fit.coefficients;
    rep.items.push_back(std::move(item));
  }
  return rep;
}

std::vector<Vec> default_translates(const Body& body) {
  const int n = body.dim();
  const double r = bounding_radius(body);
  Vec e1 = Vec::Zero(n), e2 = Vec::Zero(n);
  e1[0] = 1.0;
  e2[1] = 1.0;
  return {Vec::Zero(n), e1 * (r / 4.0), (e1 + e2) * (r / 4.0), -e2 * (r / 3.0)};
}

DetectionReport detect_ellipsoid(const Body& body, const DetectOptions& opt) {
  DetectionReport rep =
      support_product_quadratic_test(body, default_translates(body), detection_grid(body.dim(), opt), opt.tol);
  rep.test = "detect-ellipsoid";
  return rep;
}

}  // namespace tomo
