#pragma once

// Section function A_K(xi,t), cutoff volumes, Fourier slices and the
// three-dimensional back-projection inversion.

#include "tomo/bodies.hpp"
#include "tomo/quadrature.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace tomo {

struct QuadratureConfig {
  enum class Method { Auto, Exact, Clipping, TensorGauss, MonteCarlo };

  Method method = Method::Auto;
  int points_per_axis = 64;     // tensor-gauss, per plane axis
  long samples = 200000;        // monte-carlo, per section
  std::uint64_t seed = 1;
  int lp_angles = 256;          // polar rule for 3-D Lp-ball sections
  int offset_nodes = 48;        // fixed offset rule used with the sampled methods
  double rel_tol = 1e-11;       // adaptive offset integration
};

QuadratureConfig::Method parse_method(const std::string& name);

struct SectionValue {
  double value = 0.0;
  double err = 0.0;
};

struct SectionProfile {
  Direction xi;
  SupportInterval support;
  std::vector<double> offsets;  // strictly increasing
  std::vector<double> values;
  std::vector<double> err;
};

/// (n-1)-volume of K cut by <x,xi> = t. Exactly (0,0) outside the support interval.
SectionValue section_function(const Body& body, const Direction& xi, double t, const QuadratureConfig& cfg = {});

/// `points` Chebyshev-Lobatto offsets over the support interval shrunk by margin*width at both ends.
SectionProfile section_profile(const Body& body, const Direction& xi, int points, const QuadratureConfig& cfg = {},
                               double margin = 0.0);
SectionProfile section_profile_at(const Body& body, const Direction& xi, const std::vector<double>& offsets,
                                  const QuadratureConfig& cfg = {});

/// Integral of weight(t) A(xi,t) over [lo, hi] (clamped to the support interval).
double integrate_section(const Body& body, const Direction& xi, const std::function<double(double)>& weight,
                         double lo, double hi, const QuadratureConfig& cfg = {});

enum class Side { Minus, Plus };

/// V-(t) = volume of {<x,xi> <= t}; V+ = Vol - V-. t is clamped to the support interval.
double cutoff_volume(const Body& body, const Direction& xi, double t, Side side, const QuadratureConfig& cfg = {});
double body_volume(const Body& body, const QuadratureConfig& cfg = {});

/// chi_K^(lambda xi) = integral of e^{i lambda t} A(xi,t) dt.
std::complex<double> fourier_slice(const Body& body, const Direction& xi, double lambda,
                                   const QuadratureConfig& cfg = {});

/// Radon data as seen by the inversion: only sections and their support intervals.
struct RadonData {
  std::function<double(const Direction&, double)> section;
  std::function<SupportInterval(const Direction&)> interval;
};
RadonData radon_data(const Body& body, const QuadratureConfig& cfg = {});

struct InversionGrid {
  int n_polar = 64;
  int n_azimuth = 128;
  double fd_fraction = 1e-3;    // h_fd = fd_fraction * width(xi)
  double ridge_points = 8.0;    // polar nodes per second-difference stencil for exterior points
};

struct InversionResult {
  double value = 0.0;
  bool near_boundary = false;
};

/// -1/(8 pi^2) * integral over S^2 of d^2/dt^2 A(xi, <x,xi>).
InversionResult invert_radon_3d(const RadonData& data, const Vec& x, const InversionGrid& grid = {});

/// Sections by planes parallel to the tangent plane at boundary point `a`, pushed
/// inward by each t. The profile's `xi` is the inward normal and `offsets` holds t.
SectionProfile local_section_profile(const Body& body, const Vec& a, const std::vector<double>& t_grid,
                                     const QuadratureConfig& cfg = {});

/// Offsets where A(xi, .) may be non-smooth (vertex projections of polytopes).
std::vector<double> section_breakpoints(const Body& body, const Direction& xi);

/// Orthonormal basis of the hyperplane xi^perp, as the columns of an n x (n-1) matrix.
Mat plane_basis(const Direction& xi);

}  // namespace tomo
