#include "tomo/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>

namespace tomo {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return cache.emplace(n, std::move(rule)).first->second;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Tricomi initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

std::vector<double> chebyshev_lobatto(double lo, double hi, int n) {
  if (n < 2) throw Error("chebyshev_lobatto: need at least two points");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) {
    const double x = -std::cos(M_PI * j / (n - 1));
    t[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

std::vector<double> chebyshev_roots(double lo, double hi, int n) {
  if (n < 1) throw Error("chebyshev_roots: need at least one point");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) {
    const double x = -std::cos(M_PI * (j + 0.5) / n);
    t[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
  }
  return t;
}

// ---------------------------------------------------------------- grids

DirectionGrid DirectionGrid::circle(int m) {
  if (m < 4 || m % 2 != 0) throw Error("circle grid: need an even number of angles >= 4");
  DirectionGrid g;
  g.dim = 2;
  for (int j = 0; j < m; ++j) {
    g.dirs.push_back(Direction::from_angle(2.0 * M_PI * j / m));
    g.weights.push_back(2.0 * M_PI / m);
    g.antipode.push_back((j + m / 2) % m);
  }
  return g;
}

DirectionGrid DirectionGrid::sphere(int n_polar, int n_azimuth, const Vec& axis) {
  if (n_polar < 2 || n_azimuth < 4 || n_azimuth % 2 != 0)
    throw Error("sphere grid: need n_polar >= 2 and an even n_azimuth >= 4");
  Eigen::Vector3d e3(0, 0, 1), e1(1, 0, 0), e2(0, 1, 0);
  if (axis.size() == 3 && axis.norm() > 0.0) {
    e3 = axis.normalized();
    const Eigen::Vector3d seed = std::abs(e3[0]) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
    e1 = (seed - seed.dot(e3) * e3).normalized();
    e2 = e3.cross(e1);
  }
  const GaussRule& rule = gauss_legendre(n_polar);
  DirectionGrid g;
  g.dim = 3;
  for (int i = 0; i < n_polar; ++i) {
    const double z = rule.nodes[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int k = 0; k < n_azimuth; ++k) {
      const double phi = 2.0 * M_PI * k / n_azimuth;
      const Eigen::Vector3d v = rho * std::cos(phi) * e1 + rho * std::sin(phi) * e2 + z * e3;
      g.dirs.emplace_back(Vec(v));
      g.weights.push_back(rule.weights[i] * 2.0 * M_PI / n_azimuth);
      g.antipode.push_back((n_polar - 1 - i) * n_azimuth + (k + n_azimuth / 2) % n_azimuth);
    }
  }
  return g;
}

DirectionGrid DirectionGrid::standard(int dim) {
  if (dim == 2) return circle(720);
  if (dim == 3) return sphere(48, 96);
  throw Error("direction grids exist only for n = 2, 3");
}

std::vector<Direction> probe_directions(int dim, int count) {
  std::vector<Direction> out;
  for (int i = 0; i < dim && static_cast<int>(out.size()) < count; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    out.emplace_back(e);
  }
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int j = 1; static_cast<int>(out.size()) < count; ++j) {
    if (dim == 2) {
      out.push_back(Direction::from_angle(0.3 + 2.0 * M_PI * std::fmod(j * golden, 1.0)));
    } else {
      const double z = 1.0 - 2.0 * std::fmod(j * golden + 0.17, 1.0);
      const double phi = 2.0 * M_PI * std::fmod(j * golden * golden + 0.05, 1.0) + 0.4 * j;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec v = Vec::Zero(dim);
      v[0] = rho * std::cos(phi);
      v[1] = rho * std::sin(phi);
      v[2] = z;
      for (int i = 3; i < dim; ++i) v[i] = std::sin(1.3 * j + i);
      out.emplace_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------- rng

namespace {
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t a, std::uint64_t b) { return splitmix(a ^ splitmix(b + 0x632be59bd9b4e019ULL)); }

std::uint64_t CounterRng::mix(std::uint64_t a, double b) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &b, sizeof bits);
  return mix(a, bits);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(splitmix(key_ ^ splitmix(counter)) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------- adaptive

namespace {

// Bisection against an absolute target. Boost's own recursion scales its target by the first
// estimate, which collapses when a panel's oscillations cancel. A child whose estimate has not
// dropped well below its parent's is at the integrand's noise floor (e.g. phase rounding at
// large frequency) and is accepted as is.
template <class F>
auto refine(const F& f, double a, double b, double abs_tol, int depth, double parent_err, double& err) {
  using boost::math::quadrature::gauss_kronrod;
  double e = 0.0, l1 = 0.0;
  const auto v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &e, &l1);
  // Boost's estimate also bottoms out near eps * max|f| whatever the width.
  const double unit = l1 * std::max(1.0, 2.0 / (b - a));
  const bool stalled = e > 0.7 * parent_err && e <= 1e-9 * unit;
  if (depth == 0 || e <= abs_tol || e <= 64 * std::numeric_limits<double>::epsilon() * unit || stalled) {
    err = e;
    return v;
  }
  const double m = 0.5 * (a + b);
  double el = 0.0, er = 0.0;
  const auto left = refine(f, a, m, 0.5 * abs_tol, depth - 1, e, el);
  const auto right = refine(f, m, b, 0.5 * abs_tol, depth - 1, e, er);
  err = el + er;
  return decltype(v)(left + right);
}

template <class F, class R>
R integrate_panels(const F& f, double a, double b, const std::vector<double>& breaks, double rel_tol,
                   double abs_floor, double& err_out) {
  using boost::math::quadrature::gauss_kronrod;
  // Near-coincident cuts would leave sliver panels that the adaptive rule bisects to its depth limit.
  const double gap = 1e-12 * (b - a);
  std::vector<double> inner;
  for (double c : breaks)
    if (c > a + gap && c < b - gap) inner.push_back(c);
  std::sort(inner.begin(), inner.end());
  std::vector<double> cuts{a};
  for (double c : inner)
    if (c - cuts.back() > gap) cuts.push_back(c);
  cuts.push_back(b);

  // One unrefined pass fixes the global L1 scale; each panel then only has to meet its share of
  // rel_tol * L1 in absolute terms, so tiny panels near zeros of f are not refined into roundoff.
  const std::size_t panels = cuts.size() - 1;
  std::vector<R> value(panels);
  std::vector<double> e0(panels), l0(panels);
  double l1 = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    value[i] = gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 0, 0.0, &e0[i], &l0[i]);
    l1 += l0[i];
  }
  R total{};
  double err = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double share = rel_tol * l1 * (cuts[i + 1] - cuts[i]) / (b - a);
    if (e0[i] > share && l0[i] > 0.0)
      value[i] = refine(f, cuts[i], cuts[i + 1], share, 15, std::numeric_limits<double>::infinity(), e0[i]);
    total += value[i];
    err += e0[i];
  }
  err_out = err;
  // Kronrod error estimates are pessimistic; only a clear miss counts as failure.
  if (!(err <= std::max(1e3 * rel_tol * l1, abs_floor)) && err > 1e-300)
    throw QuadratureError("quadrature did not converge", std::abs(total), err);
  return total;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& breaks, double rel_tol, double abs_floor) {
  if (!(b > a)) return {0.0, 0.0};
  double err = 0.0;
  const double v = integrate_panels<std::function<double(double)>, double>(f, a, b, breaks, rel_tol, abs_floor, err);
  return {v, err};
}

std::complex<double> integrate_adaptive_complex(const std::function<std::complex<double>(double)>& f, double a,
                                                double b, const std::vector<double>& breaks, double rel_tol) {
  if (!(b > a)) return {0.0, 0.0};
  double err = 0.0;
  return integrate_panels<std::function<std::complex<double>(double)>, std::complex<double>>(f, a, b, breaks, rel_tol,
                                                                                           0.0, err);
}

}  // namespace tomo
