#pragma once

// Convex-body representations and the support / gauge calculus the rest of
// the library is written against.

#include "tomo/common.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace tomo {

/// Unit vector in R^n, n >= 2.
class Direction {
 public:
  /// Normalizes `v`; throws on the zero vector or n < 2.
  explicit Direction(Vec v);
  Direction(std::initializer_list<double> coords);

  static Direction from_angle(double theta);

  const Vec& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }
  Direction operator-() const;

 private:
  Vec v_;
};

/// {x : (x-c)^T A^{-1} (x-c) <= 1} with A symmetric positive definite.
struct Ellipsoid {
  Mat shape;
  Vec center;
  // Derived at construction.
  Mat chol;       // lower factor L, shape = L L^T
  Mat inverse;    // shape^{-1}
  double sqrt_det = 0.0;

  static Ellipsoid make(Mat shape, Vec center);
  static Ellipsoid ball(int dim, double radius = 1.0);
};

struct Halfspace {
  Vec normal;  // a
  double offset = 0.0;  // b, meaning <a,x> <= b
};

/// Bounded H-polytope in dimension 2 or 3, with a cached vertex list.
struct Polytope {
  std::vector<Halfspace> halfspaces;
  std::vector<Vec> vertices;

  static Polytope make(std::vector<Halfspace> halfspaces);
  static Polytope box(const Vec& lo, const Vec& hi);
  static Polytope regular_polygon(int sides, double circumradius = 1.0);
};

/// {x : sum |(x_i - c_i)/r_i|^p <= 1}, p >= 1.
struct LpBall {
  double p = 2.0;
  Vec semiaxes;
  Vec center;

  static LpBall make(double p, Vec semiaxes, Vec center);
};

/// Body known only through callbacks.
struct OracleBody {
  int dim = 0;
  std::function<bool(const Vec&)> contains;
  std::function<double(const Vec&)> support;  // positively homogeneous, any nonzero vector
  double radius = 0.0;                         // every member satisfies |x| <= radius
};

class Body {
 public:
  using Rep = std::variant<Ellipsoid, Polytope, LpBall, OracleBody>;

  Body(Ellipsoid e) : rep_(std::move(e)) {}
  Body(Polytope p) : rep_(std::move(p)) {}
  Body(LpBall b) : rep_(std::move(b)) {}
  Body(OracleBody o) : rep_(std::move(o)) {}

  int dim() const;
  std::string kind() const;
  const Rep& rep() const { return rep_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&rep_);
  }

 private:
  Rep rep_;
};

struct SupportInterval {
  double lo = 0.0;  // b_minus = -h(-xi)
  double hi = 0.0;  // b_plus  =  h(xi)
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  double half() const { return 0.5 * (hi - lo); }
};

double support(const Body& body, const Direction& xi);
/// Positively homogeneous extension h(v) = |v| h(v/|v|); h(0) = 0.
double support_homogeneous(const Body& body, const Vec& v);
double support_translated(const Body& body, const Vec& a, const Direction& xi);
SupportInterval support_interval(const Body& body, const Direction& xi);

/// A maximizer of <x, xi> over the body (exact for every representation except Oracle).
Vec support_point(const Body& body, const Direction& xi);

bool membership(const Body& body, const Vec& x);
double minkowski_functional(const Body& body, const Vec& x);
double bounding_radius(const Body& body);

/// Some point strictly inside the body (center, vertex centroid, ...).
Vec interior_point(const Body& body);

Body translate(const Body& body, const Vec& a);

/// Unit outward normal at a boundary point; throws "no unique normal" at polytope edges/vertices.
Vec outward_normal(const Body& body, const Vec& a);

/// |gauge about interior_point(body) of a - 1|, used to validate boundary points.
double boundary_defect(const Body& body, const Vec& a);

Body body_from_json(const nlohmann::json& j);
Body load_body(const std::string& path);
nlohmann::json body_to_json(const Body& body);

}  // namespace tomo
