#include "tomo/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace tomo {

using cd = std::complex<double>;

ExponentFit boundary_exponent(const Body& body, const Direction& xi, double window, int points,
                              const QuadratureConfig& cfg) {
  if (body.as<Polytope>()) throw Error("boundary exponent needs a smooth tangency; polytope facets are excluded");
  if (points < 4) throw Error("boundary exponent needs at least 4 samples");
  if (!(window > 1e-6)) throw Error("window must exceed 1e-6");
  const SupportInterval si = support_interval(body, xi);
  ExponentFit fit;
  const double a = std::log(1e-6), b = std::log(window);
  Mat x(points, 2);
  Vec y(points);
  for (int j = 0; j < points; ++j) {
    const double s = std::exp(a + (b - a) * j / (points - 1)) * si.width();
    const double v = section_function(body, xi, si.hi - s, cfg).value;
    if (!(v > 0.0)) throw Error("shrink window");
    fit.s.push_back(s);
    fit.values.push_back(v);
    x(j, 0) = std::log(s);
    x(j, 1) = 1.0;
    y[j] = std::log(v);
  }
  const Vec c = x.colPivHouseholderQr().solve(y);
  fit.alpha = c[0];
  fit.fit_error = std::sqrt((y - x * c).squaredNorm() / points);
  return fit;
}

std::complex<double> oscillatory_integral(const Body& body, const Direction& xi, double lambda,
                                          const QuadratureConfig& cfg) {
  if (lambda == 0.0) throw Error("oscillatory integral needs lambda != 0");
  return cd(0.0, lambda) * fourier_slice(body, xi, lambda, cfg);
}

std::complex<double> ellipsoid_surface_integral(const Ellipsoid& e, const Direction& xi, double lambda) {
  const int n = xi.dim();
  const Vec eta = e.chol.transpose() * xi.vec();                     // phase direction: <u, L^T xi>
  const Vec g = e.chol.triangularView<Eigen::Lower>().solve(xi.vec());  // L^{-1} xi
  const double det_l = e.sqrt_det;
  const cd shift = std::polar(1.0, lambda * e.center.dot(xi.vec()));
  const double k = std::abs(lambda) * eta.norm();

  cd acc = 0.0;
  if (n == 2) {
    const int m = 64 + 2 * static_cast<int>(std::ceil(k));
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      acc += std::polar(g.dot(u), lambda * eta.dot(u)) * (2.0 * M_PI / m);
    }
  } else if (n == 3) {
    const DirectionGrid grid = DirectionGrid::sphere(48 + static_cast<int>(std::ceil(k)), 8, eta);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec& u = grid.dirs[i].vec();
      acc += std::polar(g.dot(u), lambda * eta.dot(u)) * grid.weights[i];
    }
  } else {
    throw Error("surface quadrature is implemented for n = 2, 3");
  }
  return det_l * shift * acc;
}

std::vector<double> default_lambda_grid(const Body& body, const Direction& xi, int points) {
  const double w = support_interval(body, xi).width();
  std::vector<double> out(points);
  const double a = std::log(10.0 / w), b = std::log(2000.0 / w);
  for (int j = 0; j < points; ++j) out[j] = std::exp(a + (b - a) * j / std::max(1, points - 1));
  return out;
}

ExpansionFitReport fit_expansion(const std::vector<double>& lambdas, const std::vector<cd>& values, double b_minus,
                                 double b_plus, int degree, double tol) {
  if (!(b_plus - b_minus >= 1e-12)) throw Error("degenerate width");
  if (degree < 0) throw Error("expansion degree must be >= 0");
  const auto rows = static_cast<Eigen::Index>(lambdas.size());
  if (rows < 2 * (degree + 1) + 4) throw Error("lambda grid too small for the requested degree");

  ExpansionFitReport rep;
  rep.b_plus = b_plus;
  rep.b_minus = b_minus;
  rep.lambdas = lambdas;
  rep.values = values;

  // Local envelope of |I| over +-4 neighbours.
  std::vector<double> weight(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double env = 0.0;
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - 4); j <= std::min(rows - 1, i + 4); ++j)
      env = std::max(env, std::abs(values[j]));
    weight[i] = env > 0.0 ? 1.0 / env : 1.0;
  }

  Eigen::VectorXcd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) rhs[i] = values[i] * weight[i];

  int chosen = -1;
  Eigen::VectorXcd chosen_c;
  for (int d = 0; d <= degree; ++d) {
    const Eigen::Index cols = 2 * (d + 1);
    Eigen::MatrixXcd x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double lam = lambdas[i];
      for (int j = 0; j <= d; ++j) {
        const double p = std::pow(lam, -j) * weight[i];
        x(i, j) = std::polar(p, lam * b_plus);
        x(i, d + 1 + j) = std::polar(p, lam * b_minus);
      }
    }
    Vec norms(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      norms[j] = x.col(j).norm();
      x.col(j) /= norms[j];
    }
    Eigen::VectorXcd c = x.colPivHouseholderQr().solve(rhs);
    const double rel = (rhs - x * c).cwiseAbs().maxCoeff();
    rep.residual_by_degree.push_back(rel);
    for (Eigen::Index j = 0; j < cols; ++j) c[j] /= norms[j];
    if ((chosen < 0 && rel < tol) || (d == degree && chosen < 0)) {
      chosen_c = c;
      if (rel < tol) chosen = d;
    }
  }
  rep.degree = chosen >= 0 ? chosen : degree;
  rep.relative_residual = rep.residual_by_degree[rep.degree];
  for (int j = 0; j <= rep.degree; ++j) {
    rep.q_plus.push_back(chosen_c[j]);
    rep.q_minus.push_back(chosen_c[rep.degree + 1 + j]);
  }
  if (chosen >= 0) rep.verdict = "finite";
  else if (rep.residual_by_degree.back() > kPlateauFactor * tol) rep.verdict = "not finite";
  return rep;
}

ExpansionFitReport finite_expansion_test(const Body& body, const Direction& xi, const std::vector<double>& lambdas,
                                         int degree, double tol, const QuadratureConfig& cfg) {
  const SupportInterval si = support_interval(body, xi);
  if (lambdas.empty()) throw Error("empty lambda grid");
  const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
  if (lmin < 5.0 / si.width() * (1.0 - 1e-12)) throw Error("lambda grid must start at >= 5/width (oscillatory regime)");
  std::vector<cd> values(lambdas.size());
  const long m = static_cast<long>(lambdas.size());
  std::string failure;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      values[i] = oscillatory_integral(body, xi, lambdas[i], cfg);
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  return fit_expansion(lambdas, values, si.lo, si.hi, degree, tol);
}

}  // namespace tomo
