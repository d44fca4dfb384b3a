#include "tomo/slice.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tomo {

QuadratureConfig::Method parse_method(const std::string& name) {
  using M = QuadratureConfig::Method;
  if (name == "auto") return M::Auto;
  if (name == "exact") return M::Exact;
  if (name == "clipping") return M::Clipping;
  if (name == "tensor-gauss") return M::TensorGauss;
  if (name == "monte-carlo") return M::MonteCarlo;
  throw Error("unknown quadrature method '" + name + "'");
}

Mat plane_basis(const Direction& xi) {
  const int n = xi.dim();
  if (n == 2) {
    Mat b(2, 1);
    b << -xi[1], xi[0];
    return b;
  }
  Eigen::HouseholderQR<Mat> qr(Mat(xi.vec()));
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

namespace {

using Method = QuadratureConfig::Method;

double unit_ball_volume(int m) { return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

SectionValue ellipsoid_section(const Ellipsoid& e, const Direction& xi, double t) {
  const Vec& v = xi.vec();
  const int n = xi.dim();
  const double h0 = std::sqrt(v.dot(e.shape * v));
  const double s = (t - e.center.dot(v)) / h0;
  if (!(std::abs(s) < 1.0)) return {};
  const double value = unit_ball_volume(n - 1) * e.sqrt_det / h0 * std::pow(1.0 - s * s, 0.5 * (n - 1));
  return {value, 4e-16 * value};
}

SectionValue polytope_chord(const Polytope& p, const Direction& xi, double t) {
  const Vec eta = plane_basis(xi).col(0);
  const double big = 4.0 * bounding_radius(p) + 1.0;
  double lo = -big, hi = big;
  for (const auto& h : p.halfspaces) {
    const double slope = h.normal.dot(eta);
    const double rhs = h.offset - t * h.normal.dot(xi.vec());
    if (std::abs(slope) <= 1e-14 * h.normal.norm()) {
      if (rhs < 0.0) return {};
      continue;
    }
    if (slope > 0.0) hi = std::min(hi, rhs / slope);
    else lo = std::max(lo, rhs / slope);
  }
  const double len = std::max(0.0, hi - lo);
  return {len, 1e-14 * big};
}

using Poly2 = std::vector<Eigen::Vector2d>;

// Sutherland-Hodgman step against {y : g.y <= c}.
Poly2 clip(const Poly2& poly, const Eigen::Vector2d& g, double c) {
  Poly2 out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % m];
    const double fp = g.dot(p) - c, fq = g.dot(q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

double shoelace(const Poly2& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(a);
}

SectionValue polytope_area(const Polytope& p, const Direction& xi, double t) {
  const Mat basis = plane_basis(xi);
  const double big = 4.0 * bounding_radius(p) + 1.0;
  Poly2 poly{{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (const auto& h : p.halfspaces) {
    const Eigen::Vector2d g(h.normal.dot(basis.col(0)), h.normal.dot(basis.col(1)));
    poly = clip(poly, g, h.offset - t * h.normal.dot(xi.vec()));
    if (poly.size() < 3) return {};
  }
  return {shoelace(poly), 1e-13 * big * big};
}

// Gauge-type function F(x) = sum |(x_i - c_i)/r_i|^p - 1, convex, < 0 inside.
double lp_excess(const LpBall& b, const Vec& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs((x[i] - b.center[i]) / b.semiaxes[i]), b.p);
  return s - 1.0;
}

// Distance from `x0` (inside) to the boundary along unit `dir`.
double lp_ray(const LpBall& b, const Vec& x0, const Vec& dir, double reach) {
  auto f = [&](double s) { return lp_excess(b, x0 + s * dir); };
  if (f(0.0) >= 0.0) return 0.0;
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, reach, f(0.0), f(reach),
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

// Point of the slice plane inside K: on the segment joining the two support points.
Vec lp_plane_point(const LpBall& b, const Direction& xi, double t, const SupportInterval& si) {
  const Vec lo = support_point(b, -xi), hi = support_point(b, xi);
  const double lam = (t - si.lo) / si.width();
  Vec x = lo + lam * (hi - lo);
  x += (t - x.dot(xi.vec())) * xi.vec();
  return x;
}

SectionValue lp_chord(const LpBall& b, const Direction& xi, double t, const SupportInterval& si) {
  const Vec x0 = lp_plane_point(b, xi, t, si);
  const Vec eta = plane_basis(xi).col(0);
  const double reach = 4.0 * bounding_radius(b) + 1.0;
  const double len = lp_ray(b, x0, eta, reach) + lp_ray(b, x0, -eta, reach);
  return {len, 1e-14 * reach};
}

SectionValue lp_area(const LpBall& b, const Direction& xi, double t, const SupportInterval& si,
                     int angles) {
  const Mat basis = plane_basis(xi);
  const double reach = 4.0 * bounding_radius(b) + 1.0;
  auto polar_area = [&](const Vec& x0, int m, Eigen::Vector2d* centroid) {
    double area = 0.0;
    Eigen::Vector2d cx = Eigen::Vector2d::Zero();
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      const double rho = lp_ray(b, x0, std::cos(th) * basis.col(0) + std::sin(th) * basis.col(1), reach);
      area += 0.5 * rho * rho;
      // Centroid of the fan: each sector contributes (2/3) rho at its mid-angle.
      cx += (rho * rho * rho / 3.0) * Eigen::Vector2d(std::cos(th), std::sin(th));
    }
    area *= 2.0 * M_PI / m;
    cx *= 2.0 * M_PI / m;
    if (centroid) *centroid = area > 0.0 ? Eigen::Vector2d(cx / area) : Eigen::Vector2d::Zero();
    return area;
  };
  Vec x0 = lp_plane_point(b, xi, t, si);
  if (lp_excess(b, x0) >= 0.0) return {};
  Eigen::Vector2d shift;
  polar_area(x0, 64, &shift);
  const Vec x1 = x0 + basis * shift;
  if (lp_excess(b, x1) < 0.0) x0 = x1;
  const double full = polar_area(x0, angles, nullptr);
  const double half = polar_area(x0, angles / 2, nullptr);
  return {full, std::abs(full - half) + 1e-14 * reach * reach};
}

bool exact_path_available(const Body& body) {
  if (body.as<Ellipsoid>()) return true;
  if (body.as<Polytope>()) return true;
  if (body.as<LpBall>()) return body.dim() <= 3;
  return false;
}

SectionValue sampled_section(const Body& body, const Direction& xi, double t, const QuadratureConfig& cfg) {
  const SupportInterval si = support_interval(body, xi);
  const double clamp = 1e-6 * si.width();
  if (t <= si.lo + clamp || t >= si.hi - clamp) return {};
  const double r = bounding_radius(body);
  if (std::abs(t) >= r) return {};
  const int m = xi.dim() - 1;
  const double box = std::sqrt(r * r - t * t);
  const double box_volume = std::pow(2.0 * box, m);
  const Mat basis = plane_basis(xi);
  const Vec base = t * xi.vec();

  if (cfg.method == Method::TensorGauss) {
    if (cfg.points_per_axis < 1) throw Error("tensor-gauss needs points_per_axis > 0");
    auto tensor = [&](int k) {
      const GaussRule& rule = gauss_legendre(k);
      long total = 1;
      for (int i = 0; i < m; ++i) total *= k;
      double acc = 0.0;
      Vec s(m);
      for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        double w = 1.0;
        for (int i = 0; i < m; ++i) {
          const int j = static_cast<int>(rem % k);
          rem /= k;
          s[i] = box * rule.nodes[j];
          w *= box * rule.weights[j];
        }
        if (membership(body, base + basis * s)) acc += w;
      }
      return acc;
    };
    const double fine = tensor(cfg.points_per_axis);
    const double coarse = tensor(std::max(1, cfg.points_per_axis / 2));
    return {fine, std::abs(fine - coarse)};
  }

  if (cfg.samples <= 0) throw Error("monte-carlo needs samples > 0");
  std::uint64_t key = CounterRng::mix(cfg.seed, t);
  for (int i = 0; i < xi.dim(); ++i) key = CounterRng::mix(key, xi[i]);
  const CounterRng rng(key);
  long hits = 0;
  Vec s(m);
  for (long k = 0; k < cfg.samples; ++k) {
    for (int i = 0; i < m; ++i) s[i] = box * (2.0 * rng.uniform(static_cast<std::uint64_t>(k) * m + i) - 1.0);
    if (membership(body, base + basis * s)) ++hits;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(cfg.samples);
  return {f * box_volume, box_volume * std::sqrt(f * (1.0 - f) / static_cast<double>(cfg.samples))};
}

bool uses_sampling(const Body& body, const QuadratureConfig& cfg) {
  if (cfg.method == Method::TensorGauss || cfg.method == Method::MonteCarlo) return true;
  return cfg.method == Method::Auto && !exact_path_available(body);
}

}  // namespace

SectionValue section_function(const Body& body, const Direction& xi, double t, const QuadratureConfig& cfg) {
  if (xi.dim() != body.dim()) throw Error("section_function: dimension mismatch");
  if (!std::isfinite(t)) throw Error("section_function: offset must be finite");
  if (uses_sampling(body, cfg)) return sampled_section(body, xi, t, cfg);

  if (const auto* e = body.as<Ellipsoid>()) return ellipsoid_section(*e, xi, t);

  const SupportInterval si = support_interval(body, xi);
  if (!(t > si.lo && t < si.hi)) return {};
  if (const auto* p = body.as<Polytope>()) return xi.dim() == 2 ? polytope_chord(*p, xi, t) : polytope_area(*p, xi, t);
  if (const auto* b = body.as<LpBall>()) {
    if (xi.dim() == 2) return lp_chord(*b, xi, t, si);
    if (xi.dim() == 3) return lp_area(*b, xi, t, si, std::max(8, cfg.lp_angles));
  }
  throw Error("no exact section method for this body; use tensor-gauss or monte-carlo");
}

SectionProfile section_profile_at(const Body& body, const Direction& xi, const std::vector<double>& offsets,
                                  const QuadratureConfig& cfg) {
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (!(offsets[i] > offsets[i - 1])) throw Error("section profile offsets must be strictly increasing");
  SectionProfile prof{xi, support_interval(body, xi), offsets, std::vector<double>(offsets.size()),
                      std::vector<double>(offsets.size())};
  const long n = static_cast<long>(offsets.size());
  std::string failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const SectionValue v = section_function(body, xi, offsets[i], cfg);
      prof.values[i] = v.value;
      prof.err[i] = v.err;
    } catch (const std::exception& ex) {
#pragma omp critical
      failure = ex.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  return prof;
}

SectionProfile section_profile(const Body& body, const Direction& xi, int points, const QuadratureConfig& cfg,
                               double margin) {
  if (points < 8) throw Error("section profile needs at least 8 points");
  const SupportInterval si = support_interval(body, xi);
  const double pad = margin * si.width();
  return section_profile_at(body, xi, chebyshev_lobatto(si.lo + pad, si.hi - pad, points), cfg);
}

std::vector<double> section_breakpoints(const Body& body, const Direction& xi) {
  std::vector<double> out;
  if (const auto* p = body.as<Polytope>()) {
    for (const auto& v : p->vertices) out.push_back(v.dot(xi.vec()));
    std::sort(out.begin(), out.end());
  }
  return out;
}

namespace {

// Integrates g(theta) over theta in [th_lo, th_hi] where t = mid - half cos(theta).
// The substitution absorbs the (t - b)^{(n-1)/2} endpoint behaviour.
template <class R>
R integrate_theta(const Body& body, const Direction& xi, const SupportInterval& si,
                  const std::function<R(double)>& integrand_t, double th_lo, double th_hi, int extra_panels,
                  const QuadratureConfig& cfg) {
  const double mid = si.mid(), half = si.half();
  std::function<R(double)> g = [&](double th) -> R {
    const double t = mid - half * std::cos(th);
    return integrand_t(t) * (half * std::sin(th));
  };
  if (uses_sampling(body, cfg)) {
    const GaussRule& rule = gauss_legendre(std::max(4, cfg.offset_nodes));
    const int panels = std::max(1, extra_panels);
    R acc{};
    const double step = (th_hi - th_lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = th_lo + p * step;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += g(a + 0.5 * step * (rule.nodes[i] + 1.0)) * (0.5 * step * rule.weights[i]);
    }
    return acc;
  }
  std::vector<double> breaks;
  for (double b : section_breakpoints(body, xi)) {
    const double c = std::clamp((mid - b) / half, -1.0, 1.0);
    breaks.push_back(std::acos(c));
  }
  for (int p = 1; p < extra_panels; ++p) breaks.push_back(th_lo + (th_hi - th_lo) * p / extra_panels);
  std::sort(breaks.begin(), breaks.end());
  if constexpr (std::is_same_v<R, double>) {
    return integrate_adaptive(g, th_lo, th_hi, breaks, cfg.rel_tol).value;
  } else {
    return integrate_adaptive_complex(g, th_lo, th_hi, breaks, cfg.rel_tol);
  }
}

double theta_of(const SupportInterval& si, double t) {
  return std::acos(std::clamp((si.mid() - t) / si.half(), -1.0, 1.0));
}

}  // namespace

double integrate_section(const Body& body, const Direction& xi, const std::function<double(double)>& weight,
                         double lo, double hi, const QuadratureConfig& cfg) {
  const SupportInterval si = support_interval(body, xi);
  lo = std::max(lo, si.lo);
  hi = std::min(hi, si.hi);
  if (!(hi > lo)) return 0.0;
  std::function<double(double)> f = [&](double t) { return weight(t) * section_function(body, xi, t, cfg).value; };
  return integrate_theta<double>(body, xi, si, f, theta_of(si, lo), theta_of(si, hi), 1, cfg);
}

double cutoff_volume(const Body& body, const Direction& xi, double t, Side side, const QuadratureConfig& cfg) {
  const SupportInterval si = support_interval(body, xi);
  t = std::clamp(t, si.lo, si.hi);
  auto one = [](double) { return 1.0; };
  const double minus = integrate_section(body, xi, one, si.lo, t, cfg);
  if (side == Side::Minus) return minus;
  return integrate_section(body, xi, one, si.lo, si.hi, cfg) - minus;
}

double body_volume(const Body& body, const QuadratureConfig& cfg) {
  Vec e = Vec::Zero(body.dim());
  e[0] = 1.0;
  const Direction xi(e);
  return cutoff_volume(body, xi, support_interval(body, xi).hi, Side::Minus, cfg);
}

std::complex<double> fourier_slice(const Body& body, const Direction& xi, double lambda, const QuadratureConfig& cfg) {
  const SupportInterval si = support_interval(body, xi);
  std::function<std::complex<double>(double)> f = [&](double t) {
    return std::polar(section_function(body, xi, t, cfg).value, lambda * t);
  };
  const int panels = 1 + static_cast<int>(std::ceil(std::abs(lambda) * si.half() / M_PI));
  return integrate_theta<std::complex<double>>(body, xi, si, f, 0.0, M_PI, panels, cfg);
}

RadonData radon_data(const Body& body, const QuadratureConfig& cfg) {
  return RadonData{[body, cfg](const Direction& xi, double t) { return section_function(body, xi, t, cfg).value; },
                   [body](const Direction& xi) { return support_interval(body, xi); }};
}

InversionResult invert_radon_3d(const RadonData& data, const Vec& x, const InversionGrid& grid) {
  if (x.size() != 3) throw Error("invert_radon_3d: x must be a 3-vector");
  if (grid.n_polar < 2 || grid.n_azimuth < 4) throw Error("invert_radon_3d: sphere grid too small");

  // Signed distance to the body from support data: >0 outside, <0 inside.
  const DirectionGrid probe = DirectionGrid::sphere(24, 48);
  double outside = -std::numeric_limits<double>::infinity();
  double min_width = std::numeric_limits<double>::infinity();
  for (const auto& xi : probe.dirs) {
    const SupportInterval si = data.interval(xi);
    outside = std::max(outside, x.dot(xi.vec()) - si.hi);
    min_width = std::min(min_width, si.width());
  }
  const double h_ref = grid.fd_fraction * min_width;

  int n_polar = grid.n_polar;
  if (outside > 0.0) {
    // The tangency ridge is a thin band in cos(polar) of width ~2 h_fd / |x|.
    const int needed = static_cast<int>(std::ceil(grid.ridge_points * x.norm() / h_ref));
    n_polar = std::max(n_polar, needed);
  }
  const DirectionGrid sphere = DirectionGrid::sphere(n_polar, grid.n_azimuth, x);

  const long m = static_cast<long>(sphere.size());
  double acc = 0.0;
#pragma omp parallel for num_threads(thread_count()) reduction(+ : acc) schedule(static)
  for (long i = 0; i < m; ++i) {
    const Direction& xi = sphere.dirs[i];
    const double h = grid.fd_fraction * data.interval(xi).width();
    const double s = x.dot(xi.vec());
    const double d2 = (data.section(xi, s + h) - 2.0 * data.section(xi, s) + data.section(xi, s - h)) / (h * h);
    acc += sphere.weights[i] * d2;
  }
  InversionResult r;
  r.value = -acc / (8.0 * M_PI * M_PI);
  r.near_boundary = std::abs(outside) < 5.0 * h_ref;
  return r;
}

SectionProfile local_section_profile(const Body& body, const Vec& a, const std::vector<double>& t_grid,
                                     const QuadratureConfig& cfg) {
  if (boundary_defect(body, a) > 1e-8) throw Error("point is not on the boundary");
  const Direction inward(Vec(-outward_normal(body, a)));
  const double base = a.dot(inward.vec());
  SectionProfile prof{inward, support_interval(body, inward), t_grid, std::vector<double>(t_grid.size()),
                      std::vector<double>(t_grid.size())};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw Error("t grid must be strictly increasing");
    const SectionValue v = section_function(body, inward, base + t_grid[i], cfg);
    prof.values[i] = v.value;
    prof.err[i] = v.err;
  }
  return prof;
}

}  // namespace tomo
