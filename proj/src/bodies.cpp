#include "tomo/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tomo {

int thread_count() {
  if (const char* env = std::getenv("TOMO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return std::max(1u, std::thread::hardware_concurrency());
#endif
}

// ---------------------------------------------------------------- Direction

Direction::Direction(Vec v) : v_(std::move(v)) {
  if (v_.size() < 2) throw Error("direction: dimension must be at least 2");
  const double norm = v_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("direction: zero or non-finite vector");
  v_ /= norm;
}

Direction::Direction(std::initializer_list<double> coords)
    : Direction(Vec(Eigen::Map<const Vec>(coords.begin(), static_cast<Eigen::Index>(coords.size())))) {}

Direction Direction::from_angle(double theta) {
  Vec v(2);
  v << std::cos(theta), std::sin(theta);
  return Direction(v);
}

Direction Direction::operator-() const { return Direction(Vec(-v_)); }

// ---------------------------------------------------------------- factories

Ellipsoid Ellipsoid::make(Mat shape, Vec center) {
  const auto n = shape.rows();
  if (n < 2 || shape.cols() != n) throw Error("ellipsoid: shape must be a square matrix of size >= 2");
  if (center.size() != n) throw Error("ellipsoid: center dimension does not match shape");
  const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error("ellipsoid: shape is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(shape, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw Error("ellipsoid: shape is not positive definite");

  Ellipsoid e;
  e.shape = 0.5 * (shape + shape.transpose());
  e.center = std::move(center);
  Eigen::LLT<Mat> llt(e.shape);
  e.chol = llt.matrixL();
  e.inverse = llt.solve(Mat::Identity(n, n));
  e.sqrt_det = e.chol.diagonal().prod();
  return e;
}

Ellipsoid Ellipsoid::ball(int dim, double radius) {
  return make(Mat::Identity(dim, dim) * radius * radius, Vec::Zero(dim));
}

namespace {

double slack_scale(const Halfspace& h) { return h.normal.norm() + std::abs(h.offset) + 1.0; }

bool feasible(const std::vector<Halfspace>& hs, const Vec& x, double tol) {
  for (const auto& h : hs)
    if (h.normal.dot(x) - h.offset > tol * (slack_scale(h) + x.norm())) return false;
  return true;
}

bool has_recession_direction(const std::vector<Halfspace>& hs, int n) {
  if (hs.empty()) return true;
  auto in_cone = [&](const Vec& d) {
    for (const auto& h : hs)
      if (h.normal.dot(d) > 1e-12 * h.normal.norm()) return false;
    return true;
  };
  if (n == 2) {
    for (const auto& h : hs) {
      Vec d(2);
      d << -h.normal[1], h.normal[0];
      if (in_cone(d) || in_cone(-d)) return true;
    }
    return false;
  }
  bool any_pair = false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const Eigen::Vector3d a = hs[i].normal.head<3>(), b = hs[j].normal.head<3>();
      Vec d = a.cross(b);
      if (d.norm() <= 1e-12 * a.norm() * b.norm()) continue;
      any_pair = true;
      if (in_cone(d) || in_cone(-d)) return true;
    }
  }
  return !any_pair;
}

std::vector<Vec> enumerate_vertices(const std::vector<Halfspace>& hs, int n) {
  std::vector<Vec> out;
  auto push_unique = [&](const Vec& v) {
    for (const auto& w : out)
      if ((w - v).norm() <= 1e-9 * (1.0 + v.norm())) return;
    out.push_back(v);
  };
  const std::size_t m = hs.size();
  if (n == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        Eigen::Matrix2d a;
        a.row(0) = hs[i].normal.transpose();
        a.row(1) = hs[j].normal.transpose();
        if (std::abs(a.determinant()) <= 1e-12 * hs[i].normal.norm() * hs[j].normal.norm()) continue;
        Vec v = a.partialPivLu().solve(Eigen::Vector2d(hs[i].offset, hs[j].offset));
        if (feasible(hs, v, 1e-9)) push_unique(v);
      }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          Eigen::Matrix3d a;
          a.row(0) = hs[i].normal.transpose();
          a.row(1) = hs[j].normal.transpose();
          a.row(2) = hs[k].normal.transpose();
          const double scale = hs[i].normal.norm() * hs[j].normal.norm() * hs[k].normal.norm();
          if (std::abs(a.determinant()) <= 1e-12 * scale) continue;
          Vec v = a.partialPivLu().solve(Eigen::Vector3d(hs[i].offset, hs[j].offset, hs[k].offset));
          if (feasible(hs, v, 1e-9)) push_unique(v);
        }
  }
  return out;
}

}  // namespace

Polytope Polytope::make(std::vector<Halfspace> halfspaces) {
  if (halfspaces.empty()) throw Error("unbounded body");
  const int n = static_cast<int>(halfspaces.front().normal.size());
  if (n != 2 && n != 3) throw Error("polytope: only dimensions 2 and 3 are supported");
  for (const auto& h : halfspaces) {
    if (h.normal.size() != n) throw Error("polytope: halfspace normals have mixed dimensions");
    if (!(h.normal.norm() > 0.0)) throw Error("polytope: zero halfspace normal");
  }
  if (has_recession_direction(halfspaces, n)) throw Error("unbounded body");

  Polytope p;
  p.vertices = enumerate_vertices(halfspaces, n);
  p.halfspaces = std::move(halfspaces);
  if (static_cast<int>(p.vertices.size()) < n + 1) throw Error("polytope: empty interior");
  Vec centroid = Vec::Zero(n);
  for (const auto& v : p.vertices) centroid += v;
  centroid /= static_cast<double>(p.vertices.size());
  for (const auto& h : p.halfspaces) {
    if (h.offset - h.normal.dot(centroid) <= 1e-10 * slack_scale(h))
      throw Error("polytope: empty interior");
  }
  return p;
}

Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  std::vector<Halfspace> hs;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    Vec e = Vec::Zero(lo.size());
    e[i] = 1.0;
    hs.push_back({e, hi[i]});
    hs.push_back({-e, -lo[i]});
  }
  return make(std::move(hs));
}

Polytope Polytope::regular_polygon(int sides, double circumradius) {
  if (sides < 3) throw Error("polygon needs at least 3 sides");
  std::vector<Halfspace> hs;
  const double apothem = circumradius * std::cos(M_PI / sides);
  for (int k = 0; k < sides; ++k) {
    const double phi = 2.0 * M_PI * (k + 0.5) / sides;
    Vec a(2);
    a << std::cos(phi), std::sin(phi);
    hs.push_back({a, apothem});
  }
  return make(std::move(hs));
}

LpBall LpBall::make(double p, Vec semiaxes, Vec center) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("lpball: exponent p must be >= 1");
  if (semiaxes.size() < 2) throw Error("lpball: dimension must be at least 2");
  if (center.size() != semiaxes.size()) throw Error("lpball: center dimension does not match semiaxes");
  if (!(semiaxes.minCoeff() > 0.0)) throw Error("lpball: semiaxes must be positive");
  return LpBall{p, std::move(semiaxes), std::move(center)};
}

// ---------------------------------------------------------------- Body

int Body::dim() const {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) return static_cast<int>(b.center.size());
        else if constexpr (std::is_same_v<T, Polytope>) return static_cast<int>(b.halfspaces.front().normal.size());
        else if constexpr (std::is_same_v<T, LpBall>) return static_cast<int>(b.center.size());
        else return b.dim;
      },
      rep_);
}

std::string Body::kind() const {
  static const char* names[] = {"ellipsoid", "polytope", "lpball", "oracle"};
  return names[rep_.index()];
}

namespace {

void check_dim(const Body& body, Eigen::Index n, const char* what) {
  if (body.dim() != n) throw Error(std::string(what) + ": dimension mismatch");
}

double lp_dual_norm(const Vec& eta, double p) {
  if (p == 1.0) return eta.cwiseAbs().maxCoeff();
  const double q = p / (p - 1.0);
  const double m = eta.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) s += std::pow(std::abs(eta[i]) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double lp_value(const LpBall& b, const Vec& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs((x[i] - b.center[i]) / b.semiaxes[i]), b.p);
  return s;
}

}  // namespace

double support(const Body& body, const Direction& xi) {
  check_dim(body, xi.dim(), "support");
  const Vec& v = xi.vec();
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return std::sqrt(v.dot(b.shape * v)) + b.center.dot(v);
        } else if constexpr (std::is_same_v<T, Polytope>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& x : b.vertices) best = std::max(best, x.dot(v));
          return best;
        } else if constexpr (std::is_same_v<T, LpBall>) {
          return b.center.dot(v) + lp_dual_norm(b.semiaxes.cwiseProduct(v), b.p);
        } else {
          const double h = b.support(v);
          if (!std::isfinite(h)) throw Error("unbounded body");
          return h;
        }
      },
      body.rep());
}

double support_homogeneous(const Body& body, const Vec& v) {
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  return norm * support(body, Direction(v));
}

double support_translated(const Body& body, const Vec& a, const Direction& xi) {
  return support(body, xi) + a.dot(xi.vec());
}

SupportInterval support_interval(const Body& body, const Direction& xi) {
  SupportInterval s{-support(body, -xi), support(body, xi)};
  if (!(s.hi - s.lo >= 1e-12)) throw Error("degenerate width");
  return s;
}

Vec support_point(const Body& body, const Direction& xi) {
  check_dim(body, xi.dim(), "support_point");
  const Vec& v = xi.vec();
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          Vec av = b.shape * v;
          return b.center + av / std::sqrt(v.dot(av));
        } else if constexpr (std::is_same_v<T, Polytope>) {
          const Vec* best = &b.vertices.front();
          for (const auto& x : b.vertices)
            if (x.dot(v) > best->dot(v)) best = &x;
          return *best;
        } else if constexpr (std::is_same_v<T, LpBall>) {
          const Vec eta = b.semiaxes.cwiseProduct(v);
          const Eigen::Index n = eta.size();
          Vec y = Vec::Zero(n);
          if (b.p == 1.0) {
            Eigen::Index k;
            eta.cwiseAbs().maxCoeff(&k);
            y[k] = eta[k] >= 0.0 ? 1.0 : -1.0;
          } else {
            const double q = b.p / (b.p - 1.0);
            const double nq = lp_dual_norm(eta, b.p);
            for (Eigen::Index i = 0; i < n; ++i) {
              const double mag = std::pow(std::abs(eta[i]) / nq, q - 1.0);
              y[i] = eta[i] >= 0.0 ? mag : -mag;
            }
          }
          return b.center + b.semiaxes.cwiseProduct(y);
        } else {
          throw Error("support point is not available for oracle bodies");
        }
      },
      body.rep());
}

bool membership(const Body& body, const Vec& x) {
  check_dim(body, x.size(), "membership");
  return std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          const Vec d = x - b.center;
          return d.dot(b.inverse * d) <= 1.0 + 1e-14;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          for (const auto& h : b.halfspaces)
            if (h.normal.dot(x) > h.offset + 1e-14 * slack_scale(h)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, LpBall>) {
          return lp_value(b, x) <= 1.0 + 1e-14;
        } else {
          return b.contains(x);
        }
      },
      body.rep());
}

double bounding_radius(const Body& body) {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          Eigen::SelfAdjointEigenSolver<Mat> eig(b.shape, Eigen::EigenvaluesOnly);
          return b.center.norm() + std::sqrt(eig.eigenvalues().maxCoeff());
        } else if constexpr (std::is_same_v<T, Polytope>) {
          double r = 0.0;
          for (const auto& v : b.vertices) r = std::max(r, v.norm());
          return r;
        } else if constexpr (std::is_same_v<T, LpBall>) {
          const double spread = b.p <= 2.0 ? b.semiaxes.maxCoeff() : b.semiaxes.norm();
          return b.center.norm() + spread;
        } else {
          return b.radius;
        }
      },
      body.rep());
}

Vec interior_point(const Body& body) {
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Polytope>) {
          Vec c = Vec::Zero(b.vertices.front().size());
          for (const auto& v : b.vertices) c += v;
          return c / static_cast<double>(b.vertices.size());
        } else if constexpr (std::is_same_v<T, OracleBody>) {
          return Vec::Zero(b.dim);
        } else {
          return b.center;
        }
      },
      body.rep());
}

double minkowski_functional(const Body& body, const Vec& x) {
  check_dim(body, x.size(), "minkowski_functional");
  const Vec zero = Vec::Zero(x.size());
  const bool origin_interior = std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) return b.center.dot(b.inverse * b.center) < 1.0;
        else if constexpr (std::is_same_v<T, Polytope>) {
          return std::all_of(b.halfspaces.begin(), b.halfspaces.end(),
                             [](const Halfspace& h) { return h.offset > 0.0; });
        } else if constexpr (std::is_same_v<T, LpBall>) return lp_value(b, zero) < 1.0;
        else return b.contains(zero);
      },
      body.rep());
  if (!origin_interior) throw Error("origin outside interior");

  const double norm = x.norm();
  if (norm == 0.0) return 0.0;
  if (const auto* e = body.as<Ellipsoid>(); e && e->center.isZero(0.0)) return std::sqrt(x.dot(e->inverse * x));

  // Bisection on the scale s with s x in K for s <= 1/||x||_K.
  double lo = 0.0, hi = 2.0 * bounding_radius(body) / norm;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (membership(body, mid * x)) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 1.0 / (0.5 * (lo + hi));
}

Body translate(const Body& body, const Vec& a) {
  check_dim(body, a.size(), "translate");
  return std::visit(
      [&](const auto& b) -> Body {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          Ellipsoid e = b;
          e.center += a;
          return e;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          Polytope p = b;
          for (auto& h : p.halfspaces) h.offset += h.normal.dot(a);
          for (auto& v : p.vertices) v += a;
          return p;
        } else if constexpr (std::is_same_v<T, LpBall>) {
          LpBall l = b;
          l.center += a;
          return l;
        } else {
          OracleBody o;
          o.dim = b.dim;
          o.contains = [f = b.contains, a](const Vec& x) { return f(x - a); };
          o.support = [f = b.support, a](const Vec& v) { return f(v) + a.dot(v); };
          o.radius = b.radius + a.norm();
          return o;
        }
      },
      body.rep());
}

Vec outward_normal(const Body& body, const Vec& a) {
  check_dim(body, a.size(), "outward_normal");
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return (b.inverse * (a - b.center)).normalized();
        } else if constexpr (std::is_same_v<T, LpBall>) {
          Vec g(a.size());
          for (Eigen::Index i = 0; i < a.size(); ++i) {
            const double y = (a[i] - b.center[i]) / b.semiaxes[i];
            const double mag = std::pow(std::abs(y), b.p - 1.0) / b.semiaxes[i];
            g[i] = y >= 0.0 ? mag : -mag;
          }
          if (!(g.norm() > 0.0)) throw Error("no unique normal");
          return g.normalized();
        } else if constexpr (std::is_same_v<T, Polytope>) {
          std::vector<Vec> active;
          for (const auto& h : b.halfspaces) {
            if (std::abs(h.normal.dot(a) - h.offset) > 1e-9 * (slack_scale(h) + a.norm())) continue;
            Vec u = h.normal.normalized();
            const bool seen = std::any_of(active.begin(), active.end(),
                                          [&](const Vec& w) { return (w - u).norm() < 1e-12; });
            if (!seen) active.push_back(u);
          }
          if (active.empty()) throw Error("point is not on the boundary");
          if (active.size() > 1) throw Error("no unique normal");
          return active.front();
        } else {
          throw Error("no unique normal");
        }
      },
      body.rep());
}

double boundary_defect(const Body& body, const Vec& a) {
  const Vec c = interior_point(body);
  return std::abs(minkowski_functional(translate(body, -c), a - c) - 1.0);
}

// ---------------------------------------------------------------- JSON

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error("body spec: field '" + field + "' " + why);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad_field(path + key, "is missing");
  return j.at(key);
}

double read_number(const json& j, const std::string& field) {
  if (!j.is_number()) bad_field(field, "must be a number");
  return j.get<double>();
}

Vec read_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad_field(field, "must be a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Mat read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad_field(field, "must be a square array of numbers");
  const auto n = static_cast<Eigen::Index>(j.size());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vec row = read_vector(j[static_cast<std::size_t>(r)], field + "[" + std::to_string(r) + "]");
    if (row.size() != n) bad_field(field, "must be a square array of numbers");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_array(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

Body body_from_json(const json& j) {
  if (!j.is_object()) throw Error("body spec: top level must be an object");
  const json& type = require(j, "type", "");
  if (!type.is_string()) bad_field("type", "must be a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "ellipsoid") {
      Mat shape = read_matrix(require(j, "shape", ""), "shape");
      Vec center = j.contains("center") ? read_vector(j.at("center"), "center") : Vec::Zero(shape.rows());
      if (center.size() != shape.rows()) bad_field("center", "dimension does not match shape");
      return Ellipsoid::make(std::move(shape), std::move(center));
    }
    if (t == "polytope") {
      const json& arr = require(j, "halfspaces", "");
      if (!arr.is_array() || arr.empty()) bad_field("halfspaces", "must be a non-empty array");
      std::vector<Halfspace> hs;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "halfspaces[" + std::to_string(i) + "].";
        Halfspace h{read_vector(require(arr[i], "a", path), path + "a"),
                    read_number(require(arr[i], "b", path), path + "b")};
        if (!hs.empty() && h.normal.size() != hs.front().normal.size()) bad_field(path + "a", "has the wrong dimension");
        hs.push_back(std::move(h));
      }
      return Polytope::make(std::move(hs));
    }
    if (t == "lpball") {
      const double p = read_number(require(j, "p", ""), "p");
      if (!(p >= 1.0)) bad_field("p", "must be >= 1");
      Vec axes = read_vector(require(j, "semiaxes", ""), "semiaxes");
      Vec center = j.contains("center") ? read_vector(j.at("center"), "center") : Vec::Zero(axes.size());
      if (center.size() != axes.size()) bad_field("center", "dimension does not match semiaxes");
      return LpBall::make(p, std::move(axes), std::move(center));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("body spec: ") + e.what());
  }
  bad_field("type", "must be one of ellipsoid, polytope, lpball (got '" + t + "')");
}

Body load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open body spec '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("body spec '" + path + "': " + e.what());
  }
  return body_from_json(j);
}

json body_to_json(const Body& body) {
  return std::visit(
      [&](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          json rows = json::array();
          for (Eigen::Index r = 0; r < b.shape.rows(); ++r) rows.push_back(to_array(b.shape.row(r).transpose()));
          return {{"type", "ellipsoid"}, {"shape", rows}, {"center", to_array(b.center)}};
        } else if constexpr (std::is_same_v<T, Polytope>) {
          json hs = json::array();
          for (const auto& h : b.halfspaces) hs.push_back({{"a", to_array(h.normal)}, {"b", h.offset}});
          return {{"type", "polytope"}, {"halfspaces", hs}};
        } else if constexpr (std::is_same_v<T, LpBall>) {
          return {{"type", "lpball"}, {"p", b.p}, {"semiaxes", to_array(b.semiaxes)}, {"center", to_array(b.center)}};
        } else {
          throw Error("oracle bodies have no JSON form");
        }
      },
      body.rep());
}

}  // namespace tomo
