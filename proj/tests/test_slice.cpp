#include "doctest.h"
#include "support.hpp"

#include "tomo/slice.hpp"

#include <cmath>
#include <complex>

using namespace tomo;
using namespace tomo::testing;

namespace {

double ball_section(int n, double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::pow(M_PI, 0.5 * (n - 1)) / std::tgamma(0.5 * (n + 1)) * std::pow(1.0 - t * t, 0.5 * (n - 1));
}

struct McEstimate {
  double value, sigma;
};

// Hit-or-miss estimate on the plane <x, xi> = t, independent of the library's sampler.
McEstimate plane_monte_carlo(const Body& body, const Direction& xi, double t, long samples, std::uint64_t seed) {
  const Mat basis = plane_basis(xi);
  const double r = bounding_radius(body);
  const int m = body.dim() - 1;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  long hits = 0;
  for (long k = 0; k < samples; ++k) {
    Vec s(m);
    for (int i = 0; i < m; ++i) s[i] = u(rng);
    if (membership(body, t * xi.vec() + basis * s)) ++hits;
  }
  const double box = std::pow(2.0 * r, m);
  const double f = static_cast<double>(hits) / samples;
  return {f * box, box * std::sqrt(f * (1.0 - f) / samples)};
}

std::complex<double> simpson_fourier(const std::function<double(double)>& a, double lo, double hi, double lambda,
                                     int panels) {
  const double h = (hi - lo) / panels;
  std::complex<double> acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double t = lo + i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * a(t) * std::polar(1.0, lambda * t);
  }
  return acc * h / 3.0;
}

QuadratureConfig with(QuadratureConfig::Method m, long samples = 200000, std::uint64_t seed = 1) {
  QuadratureConfig c;
  c.method = m;
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("ball sections follow the closed formula") {
  CHECK(section_function(Ellipsoid::ball(3), Direction({0.0, 0.0, 1.0}), 0.0).value ==
        doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(section_function(Ellipsoid::ball(2), Direction({1.0, 0.0}), 0.6).value == doctest::Approx(1.6).epsilon(1e-14));
  Rng rng(1);
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      const double v = section_function(Ellipsoid::ball(n), random_direction(n, rng), t).value;
      CHECK(v == doctest::Approx(ball_section(n, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("offsets outside the support interval give exactly zero") {
  Rng rng(4);
  for (const Body& b : std::vector<Body>{Ellipsoid::ball(3), square(), lp4(2), random_ellipsoid(3, rng)}) {
    const Direction xi = random_direction(b.dim(), rng);
    const SupportInterval si = support_interval(b, xi);
    for (double t : {si.hi + 1e-3, si.lo - 0.5, si.hi + 10.0}) {
      const SectionValue v = section_function(b, xi, t);
      CHECK(v.value == 0.0);
      CHECK(v.err == 0.0);
    }
  }
}

TEST_CASE("polytope sections") {
  CHECK(section_function(square(), Direction({1.0, 0.0}), 0.0).value == doctest::Approx(2.0));
  // Square chord along the diagonal direction: 2 sqrt(2) - 2|t|.
  const Direction d = Direction::from_angle(M_PI / 4);
  for (double t : {0.0, 0.5, 1.2}) {
    const double chord = 2.0 * std::sqrt(2.0) - 2.0 * std::abs(t);
    CHECK(section_function(square(), d, t).value == doctest::Approx(chord).epsilon(1e-12));
  }
  // The diagonal cross-section of the cube through the centre is a regular hexagon of side sqrt 2.
  const Direction diag({1.0, 1.0, 1.0});
  CHECK(section_function(cube(), diag, 0.0).value == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(section_function(cube(), Direction({0.0, 0.0, 1.0}), 0.3).value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("exact sections agree with an independent Monte-Carlo estimate") {
  const Body e = Ellipsoid::make((Mat(3, 3) << 4, 0, 0, 0, 1, 0, 0, 0, 1).finished(), Vec::Zero(3));
  const Direction z({0.0, 0.0, 1.0});
  const McEstimate mc = plane_monte_carlo(e, z, 0.5, 1000000, 99);
  CHECK(std::abs(section_function(e, z, 0.5).value - mc.value) < 3.0 * mc.sigma);

  Rng rng(8);
  const Polytope hex = Polytope::regular_polygon(6, 1.3);
  const std::vector<Body> bodies{lp4(2), LpBall::make(3.0, (Vec(3) << 1.0, 0.8, 1.2).finished(), Vec::Zero(3)), hex,
                                 cube()};
  for (const Body& b : bodies) {
    for (int i = 0; i < 3; ++i) {
      const Direction xi = random_direction(b.dim(), rng);
      const SupportInterval si = support_interval(b, xi);
      const double t = si.mid() + 0.6 * si.half() * std::uniform_real_distribution<double>(-1, 1)(rng);
      const McEstimate est = plane_monte_carlo(b, xi, t, 400000, 7 + i);
      CHECK(std::abs(section_function(b, xi, t).value - est.value) < 4.0 * est.sigma);
    }
  }
}

TEST_CASE("property: library Monte-Carlo path within 4 sigma of the closed form") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 2;
    const Ellipsoid e = random_ellipsoid(n, rng);
    const Direction xi = random_direction(n, rng);
    const SupportInterval si = support_interval(e, xi);
    const double t = si.mid() + 0.9 * si.half() * std::uniform_real_distribution<double>(-1, 1)(rng);
    const SectionValue exact = section_function(e, xi, t);
    const SectionValue mc = section_function(e, xi, t, with(QuadratureConfig::Method::MonteCarlo, 20000, i + 1));
    CHECK(std::abs(mc.value - exact.value) < 4.0 * mc.err + 1e-12);
  }
}

TEST_CASE("tensor-gauss path converges to the exact section") {
  QuadratureConfig cfg = with(QuadratureConfig::Method::TensorGauss);
  cfg.points_per_axis = 400;
  const Body disk = Ellipsoid::ball(2);
  CHECK(section_function(disk, Direction({1.0, 0.0}), 0.3, cfg).value == doctest::Approx(2.0 * std::sqrt(0.91)).epsilon(1e-2));
  cfg.points_per_axis = 96;
  const double v = section_function(Ellipsoid::ball(3), Direction({0.0, 1.0, 0.0}), 0.2, cfg).value;
  CHECK(v == doctest::Approx(M_PI * 0.96).epsilon(1e-2));
}

TEST_CASE("Monte-Carlo sections are bit-reproducible per seed") {
  const QuadratureConfig a = with(QuadratureConfig::Method::MonteCarlo, 50000, 5);
  const Direction xi({0.3, -0.2, 0.9});
  const double v1 = section_function(Ellipsoid::ball(3), xi, 0.1, a).value;
  const double v2 = section_function(Ellipsoid::ball(3), xi, 0.1, a).value;
  CHECK(v1 == v2);
  const double v3 = section_function(Ellipsoid::ball(3), xi, 0.1, with(QuadratureConfig::Method::MonteCarlo, 50000, 6)).value;
  CHECK(v1 != v3);
}

TEST_CASE("section profiles") {
  const SectionProfile p = section_profile(Ellipsoid::ball(2), Direction({0.0, 1.0}), 32);
  REQUIRE(p.offsets.size() == 32);
  for (std::size_t i = 0; i < p.offsets.size(); ++i) {
    CHECK(std::abs(p.values[i] - 2.0 * std::sqrt(std::max(0.0, 1.0 - p.offsets[i] * p.offsets[i]))) < 1e-10);
    if (i) CHECK(p.offsets[i] > p.offsets[i - 1]);
  }
  CHECK_THROWS_AS(section_profile(Ellipsoid::ball(2), Direction({0.0, 1.0}), 7), Error);

  Rng rng(12);
  for (const Body& b : std::vector<Body>{square(), lp4(2), cube(), Polytope::regular_polygon(5)}) {
    const Direction xi = random_direction(b.dim(), rng);
    const SectionProfile f = section_profile(b, xi, 24);
    CHECK(*std::min_element(f.values.begin(), f.values.end()) >= 0.0);
    CHECK(f.values.front() <= 10.0 * f.err.front() + 1e-12);
    CHECK(f.values.back() <= 10.0 * f.err.back() + 1e-12);
  }

  for (const Body& b : std::vector<Body>{square(), lp4(2), cube(), Ellipsoid::ball(3)}) {
    const Direction xi = random_direction(b.dim(), rng);
    const SectionProfile f = section_profile(b, xi, 24);
    const SectionProfile g = section_profile(b, -xi, 24);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const std::size_t j = f.values.size() - 1 - i;
      CHECK(std::abs(f.values[i] - g.values[j]) <= f.err[i] + g.err[j] + 1e-12);
    }
  }
}

TEST_CASE("property: evenness A(xi, t) = A(-xi, -t)") {
  Rng rng(13);
  const std::vector<Body> bodies{random_ellipsoid(3, rng), Polytope::regular_polygon(7, 0.8),
                                 LpBall::make(3.0, (Vec(2) << 1.0, 0.6).finished(), (Vec(2) << 0.2, 0.1).finished())};
  for (const Body& b : bodies) {
    for (int i = 0; i < 20; ++i) {
      const Direction xi = random_direction(b.dim(), rng);
      const SupportInterval si = support_interval(b, xi);
      const double t = si.mid() + 0.95 * si.half() * std::uniform_real_distribution<double>(-1, 1)(rng);
      const SectionValue p = section_function(b, xi, t), m = section_function(b, -xi, -t);
      CHECK(std::abs(p.value - m.value) <= p.err + m.err + 1e-13);
    }
  }
}

TEST_CASE("property: integral of the section is the volume in every direction") {
  Rng rng(14);
  const Ellipsoid e = random_ellipsoid(3, rng);
  const std::vector<std::pair<Body, double>> bodies{
      {e, 4.0 / 3.0 * M_PI * e.sqrt_det},
      {square(), 4.0},
      {cube(), 8.0},
      {Polytope::regular_polygon(5), 2.5 * std::sin(2.0 * M_PI / 5.0)},
      {lp4(2), std::pow(std::tgamma(1.25), 2) / std::tgamma(1.5) * 4.0},
  };
  for (const auto& [b, vol] : bodies) {
    for (int i = 0; i < 50; ++i) {
      const Direction xi = random_direction(b.dim(), rng);
      const double v = cutoff_volume(b, xi, support_interval(b, xi).hi, Side::Minus);
      CHECK(v == doctest::Approx(vol).epsilon(1e-6));
    }
  }
  // Unit l4 ball in 3-D: 8 Gamma(5/4)^3 / Gamma(7/4).
  const double lp3 = 8.0 * std::pow(std::tgamma(1.25), 3) / std::tgamma(1.75);
  for (int i = 0; i < 5; ++i) {
    const Direction xi = random_direction(3, rng);
    CHECK(cutoff_volume(lp4(3), xi, 2.0, Side::Minus) == doctest::Approx(lp3).epsilon(1e-6));
  }
}

TEST_CASE("property: affine covariance of ellipsoid volumes") {
  Rng rng(15);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 2;
    const Ellipsoid e = random_ellipsoid(n, rng);
    const double unit = n == 2 ? M_PI : 4.0 * M_PI / 3.0;
    CHECK(body_volume(e) == doctest::Approx(e.sqrt_det * unit).epsilon(1e-8));
  }
}

TEST_CASE("cutoff volumes") {
  const Body ball = Ellipsoid::ball(3);
  const Direction z({0.0, 0.0, 1.0});
  CHECK(cutoff_volume(ball, z, 0.0, Side::Minus) == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-12));
  for (double t : {-0.5, 0.0, 0.5}) {
    const double archimedes = M_PI * (2.0 / 3.0 + t - t * t * t / 3.0);
    CHECK(std::abs(cutoff_volume(ball, z, t, Side::Minus) - archimedes) < 1e-8);
  }
  CHECK(cutoff_volume(ball, z, -3.0, Side::Minus) == 0.0);
  CHECK(cutoff_volume(ball, z, 3.0, Side::Minus) == doctest::Approx(4.0 * M_PI / 3.0));

  Rng rng(16);
  for (const Body& b : std::vector<Body>{square(), lp4(2), random_ellipsoid(3, rng), cube()}) {
    const Direction xi = random_direction(b.dim(), rng);
    const SupportInterval si = support_interval(b, xi);
    const double vol = body_volume(b);
    for (double s : {-0.7, 0.1, 0.8}) {
      const double t = si.mid() + s * si.half();
      CHECK(std::abs(cutoff_volume(b, xi, t, Side::Minus) + cutoff_volume(b, xi, t, Side::Plus) - vol) < 1e-8);
    }
  }
}

TEST_CASE("fourier slice") {
  const Body ball = Ellipsoid::ball(3);
  const Direction z({0.0, 0.0, 1.0});
  CHECK(std::abs(fourier_slice(ball, z, 0.0) - 4.0 * M_PI / 3.0) < 1e-12);
  const auto archimedes = [](double t) { return M_PI * (1.0 - t * t); };
  const std::complex<double> oracle = simpson_fourier(archimedes, -1.0, 1.0, 5.0, 20000);
  const std::complex<double> v = fourier_slice(ball, z, 5.0);
  CHECK(std::abs(v - oracle) < 1e-10);
  CHECK(std::abs(v - 4.0 * M_PI * (std::sin(5.0) - 5.0 * std::cos(5.0)) / 125.0) < 1e-12);

  Rng rng(18);
  for (const Body& b : std::vector<Body>{random_ellipsoid(2, rng), square(), lp4(2)}) {
    const Direction xi = random_direction(b.dim(), rng);
    for (double lambda : {0.7, 6.0, 40.0}) {
      const auto p = fourier_slice(b, xi, lambda), m = fourier_slice(b, xi, -lambda);
      CHECK(std::abs(m - std::conj(p)) < 1e-12 * std::max(1.0, std::abs(p)));
    }
    const SupportInterval si = support_interval(b, xi);
    const auto a = [&](double t) { return section_function(b, xi, t).value; };
    CHECK(std::abs(fourier_slice(b, xi, 6.0) - simpson_fourier(a, si.lo, si.hi, 6.0, 40000)) < 1e-5);
  }
}

TEST_CASE("back-projection inversion in R^3") {
  const RadonData ball = radon_data(Ellipsoid::ball(3));
  CHECK(std::abs(invert_radon_3d(ball, Vec::Zero(3)).value - 1.0) < 1e-3);
  const InversionResult far = invert_radon_3d(ball, (Vec(3) << 0.0, 2.0, 0.0).finished());
  CHECK(std::abs(far.value) < 1e-3);
  CHECK_FALSE(far.near_boundary);

  const RadonData e = radon_data(Ellipsoid::make((Mat(3, 3) << 4, 0, 0, 0, 1, 0, 0, 0, 1).finished(), Vec::Zero(3)));
  CHECK(std::abs(invert_radon_3d(e, Vec::Zero(3)).value - 1.0) < 1e-2);

  const InversionResult edge = invert_radon_3d(ball, (Vec(3) << 0.0, 0.0, 0.9995).finished());
  CHECK(edge.near_boundary);
}

TEST_CASE("local sections at boundary points") {
  const Body ball = Ellipsoid::ball(3);
  Rng rng(20);
  const std::vector<double> ts{0.0, 0.05, 0.2, 0.5, 1.0};
  for (int i = 0; i < 5; ++i) {
    const Vec a = random_direction(3, rng).vec();
    const SectionProfile p = local_section_profile(ball, a, ts);
    for (std::size_t j = 0; j < ts.size(); ++j)
      CHECK(p.values[j] == doctest::Approx(M_PI * (2.0 * ts[j] - ts[j] * ts[j])).epsilon(1e-12));
    CHECK(p.values[0] == 0.0);
  }
  const Ellipsoid e = random_ellipsoid(3, rng);
  const Vec a = support_point(e, random_direction(3, rng));
  const SectionProfile p = local_section_profile(e, a, {0.0, 1e-3, 1e-2, 5e-2, 1e-1});
  for (std::size_t j = 1; j < p.values.size(); ++j) {
    CHECK(p.values[j] >= 0.0);
    CHECK(p.values[j] > p.values[j - 1]);
  }
  CHECK_THROWS_WITH_AS(local_section_profile(cube(), Vec::Ones(3), ts), doctest::Contains("no unique normal"), Error);
  CHECK_THROWS_AS(local_section_profile(ball, Vec::Zero(3), ts), Error);
}

TEST_CASE("quadrature method names") {
  CHECK(parse_method("tensor-gauss") == QuadratureConfig::Method::TensorGauss);
  CHECK(parse_method("monte-carlo") == QuadratureConfig::Method::MonteCarlo);
  CHECK_THROWS_AS(parse_method("simpson"), Error);
}
