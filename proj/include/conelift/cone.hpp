#pragma once

// Metric cones C(M) = R+ x M with gbar = dr^2 + r^2 g, written in the chart
// (r, x^1..x^m) with r first; the Liouville field is Psi = r d_r.
//
// Cone tangent vectors at (r, x) are stored as a d_r + X, with X in the
// coordinates of the base presentation (chart components, or ambient
// components for embedded unit spheres).

#include <Eigen/Dense>
#include <optional>

#include "conelift/charts.hpp"
#include "conelift/immersion.hpp"
#include "conelift/sasaki.hpp"

namespace conelift {

struct ConeVector {
  double radial = 0.0;
  Eigen::VectorXd base;

  ConeVector operator+(const ConeVector& o) const { return {radial + o.radial, base + o.base}; }
  ConeVector operator-(const ConeVector& o) const { return {radial - o.radial, base - o.base}; }
  ConeVector operator*(double s) const { return {radial * s, base * s}; }
};

// sqrt(radial^2 + h(base, base)) with h the base metric at the point.
double cone_norm(const ConeVector& v, const Eigen::MatrixXd& h);

// Cone chart over `base`, r in (0, r_max).
ChartManifold cone_metric(const ChartManifold& base, double r_max = 100.0);
Eigen::VectorXd liouville_field(const Point& rx);

// Connection of constant-coefficient fields U, W (chart components, radial
// first) from the base connection: the four lines of the cone connection
// formula.
Eigen::VectorXd cone_connection_closed(const ChartManifold& base, const Point& rx, const Eigen::VectorXd& U,
                                       const Eigen::VectorXd& W, const DifferentiationConfig& cfg);
TensorValue cone_christoffel_closed(const ChartManifold& base, const Point& rx, const DifferentiationConfig& cfg);

// R(X,Y)Z = R^N(X,Y)Z - h(Y,Z) X + h(X,Z) Y on base vectors, zero whenever
// d_r enters.
Eigen::VectorXd cone_curvature_closed(const ChartManifold& base, const Point& rx, const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                                      const DifferentiationConfig& cfg);
TensorValue cone_riemann_closed(const ChartManifold& base, const Point& rx, const DifferentiationConfig& cfg);

// phibar(r, x) = (r, phi(x)) written in a cone chart of the target. Sphere
// targets use a stereographic chart centred at phi(x0), so conversions
// between chart and cone components are valid on the slice {x = x0}.
struct ConeLift {
  Immersion base;
  Immersion lifted;
  Point x0;
  std::optional<StereographicChart> stereo;

  int m() const { return base.m(); }
  Point at(double r) const;
  ConeVector to_cone(const Eigen::VectorXd& chart) const;
  Eigen::VectorXd to_chart(const ConeVector& v) const;
  // Chart-component section (r, x) -> (B, V in chart coordinates) for a
  // section given by its cone decomposition.
  SmoothMap chart_section(const SmoothMap& V, const SmoothMap& B) const;
};

ConeLift lift(const Immersion& phi, const Point& x0);

// W = V + B d_r with V: (r, x) -> base target components and B: (r, x) -> R.
struct ConeSection {
  SmoothMap V;
  SmoothMap B;
};

// The induced connection on phibar^{-1} T C(N) as printed:
//   nabla_X W   = nabla-bar_X V + (B / r) X + (X B) d_r
//   nabla_d_r W = (d_r B) d_r
// `direction` is a d_r + X in source chart components.
ConeVector cone_pullback_connection_closed(const Immersion& phi, const ConeSection& W, const Eigen::VectorXd& direction,
                                           double r, const Point& x, const DifferentiationConfig& cfg);
// The same derivative computed on the lifted immersion in a cone chart.
ConeVector cone_pullback_connection_generic(const ConeLift& L, const ConeSection& W, const Eigen::VectorXd& direction,
                                            double r, const DifferentiationConfig& cfg);

struct ConeLaplacian {
  ConeVector laplacian;
  ConeVector jacobi;
  Eigen::VectorXd tangential;  // V^T
};
// Rough Laplacian and Jacobi operator of W along phibar, term by term as
// printed (the V part is taken at fixed r).
ConeLaplacian cone_laplacian_and_jacobi_closed(const Immersion& phi, const ConeSection& W, double r, const Point& x,
                                               const DifferentiationConfig& cfg);
ConeLaplacian cone_laplacian_and_jacobi_generic(const ConeLift& L, const ConeSection& W, double r,
                                                const DifferentiationConfig& cfg);

// Cone over a contact metric carrier (unit sphere presentation).
// I(a d_r + X) = -(a / r) xi + J X + r eta(X) d_r.
ConeVector cone_complex_structure(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r,
                                  const ConeVector& v);
// gbar(U, V) = a b + r^2 h(X, Y)
double cone_inner(double r, const ConeVector& u, const ConeVector& v);
// Omega = 2 r dr ^ eta + r^2 d eta, wedge and d with the 1/2 convention;
// d eta is differentiated numerically from eta.
double kaehler_form(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r, const ConeVector& u,
                    const ConeVector& v, const DifferentiationConfig& cfg);
// max |Omega(u_i, u_j)| over pairs of the given basis (at most m + 1
// vectors; fewer test isotropy).
double lagrangian_residual(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r,
                           const std::vector<ConeVector>& basis, const DifferentiationConfig& cfg);
// Basis {Psi, dphi e_1, ..., dphi e_m} of T C(M) at (r, x).
std::vector<ConeVector> lifted_tangent_basis(const LocalImmersion& L, double r);
// Largest component of d Omega at z = r p, by central differences of the
// ambient components of Omega on R^{2m+2} \ 0.
double kaehler_closure_residual(const ContactMetricStructure& S, const Eigen::VectorXd& z,
                                const DifferentiationConfig& cfg);

// I applied to a chart-component section of a lift of an immersion into the
// Sasaki sphere; the result is a chart-component section (jets).
Section cone_complex_structure_section(const ConeLift& L, const LocalImmersion& Lbar, const ContactMetricStructure& S,
                                       const Section& W);

}  // namespace conelift
