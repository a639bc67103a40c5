#pragma once

// Calculus of an immersion phi: (M, g) -> (N, h): pullback metric, second
// fundamental form, tension, rough Laplacian, Jacobi operator, bitension,
// shape operator and normal calculus.
//
// The source metric used throughout is the pullback metric phi*h, computed
// from the Taylor model of phi; the source chart contributes its domain.
// Targets come in two presentations: a chart manifold, or the unit sphere
// S^n embedded in R^{n+1}. Sections along phi are given by their components
// in the target coordinates (chart basis, or ambient R^{n+1}).

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conelift/manifold.hpp"

namespace conelift {

using Section = std::vector<Jet>;

enum class TargetKind { Chart, Sphere };

// Target-side data along phi around a base point.
struct TargetModel {
  std::vector<Jet> h;          // coords^2, h_ab(phi)
  std::vector<Jet> gamma;      // coords^3, Gamma^a_bc(phi)
  std::vector<Jet> projector;  // coords^2, tangent projector of N at phi
  TensorValue riemann;         // R^a_bcd at phi(x0)
  Eigen::MatrixXd h0;          // h at phi(x0)
};

class TargetGeometry {
 public:
  static TargetGeometry chart(ChartManifold N);
  static TargetGeometry sphere(int n);

  TargetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int coords() const { return kind_ == TargetKind::Chart ? dim_ : dim_ + 1; }
  std::string name() const;
  const ChartManifold& chart_manifold() const;

  void check_point(std::span<const double> y) const;
  Eigen::MatrixXd metric_at(std::span<const double> y) const;
  Eigen::MatrixXd tangent_projector(std::span<const double> y) const;
  // Metric model composed along phi, accurate to `order`.
  TargetModel model_along(std::span<const Jet> phi, int order, const DifferentiationConfig& cfg) const;

 private:
  TargetKind kind_ = TargetKind::Chart;
  int dim_ = 0;
  std::optional<ChartManifold> chart_;
};

struct Immersion {
  ChartManifold source;
  TargetGeometry target;
  SmoothMap map;  // source chart -> target coordinates
  std::string label;

  int m() const { return source.dim(); }
  void validate() const;
};

struct SecondFundamentalData {
  Point x;
  std::vector<Eigen::VectorXd> B;  // m*m, row-major in (i, j), target components
  Eigen::VectorXd tension;
  Eigen::VectorXd mean_curvature;

  const Eigen::VectorXd& b(int i, int j, int m) const { return B[i * m + j]; }
};

struct SplitResiduals {
  Eigen::VectorXd tangential;
  Eigen::VectorXd normal;
};

// All quantities of phi at one source point.
class LocalImmersion {
 public:
  // `order` is the Taylor order used for phi; defaults to cfg.jet_order and
  // must be >= 4 for bitension-level quantities.
  LocalImmersion(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg, int order = 0);

  int m() const { return m_; }
  int coords() const { return nc_; }
  int order() const { return order_; }
  const Point& point() const { return x_; }
  const DifferentiationConfig& config() const { return cfg_; }
  const TargetModel& target_model() const { return target_; }
  const LocalMetric& source_metric() const { return *source_; }

  const std::vector<Jet>& phi() const { return phi_; }
  const Jet& dphi(int a, int i) const { return dphi_[a * m_ + i]; }
  Eigen::VectorXd phi_value() const;
  Eigen::MatrixXd differential() const;  // coords x m
  Eigen::MatrixXd metric() const;        // pullback metric at x
  const Eigen::MatrixXd& frame() const { return frame_; }
  // Replaces the Gram-Schmidt frame used by traces (columns must be
  // g-orthonormal); used to check frame independence.
  void set_frame(const Eigen::MatrixXd& frame);

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm(const Eigen::VectorXd& a) const;
  // dphi applied to a source vector given in chart components.
  Eigen::VectorXd push(const Eigen::VectorXd& v) const;
  // Source vector X with dphi X = tangential part of V.
  Eigen::VectorXd pull(const Eigen::VectorXd& V) const;

  // B(d_i, d_j) as a section (order - 2).
  const Section& second_fundamental(int i, int j) const { return B_[i * m_ + j]; }
  const Section& tension_section() const { return tau_; }
  SecondFundamentalData second_fundamental_data() const;
  Eigen::VectorXd tension() const;
  Eigen::VectorXd mean_curvature() const;

  // Taylor model of a section given as a map source -> target components.
  Section section_model(const SmoothMap& V, int order = 2) const;
  Section constant_section(const Eigen::VectorXd& v) const;
  // nabla-bar_{d_i} V (order lowered by one).
  Section covariant(const Section& V, int i) const;
  Eigen::VectorXd covariant_along(const Section& V, const Eigen::VectorXd& X) const;
  Eigen::VectorXd rough_laplacian(const Section& V) const;
  // sum_a R^N(V, dphi e_a) dphi e_a
  Eigen::VectorXd curvature_term(const Eigen::VectorXd& V) const;
  Eigen::VectorXd jacobi(const Section& V) const;
  Eigen::VectorXd bitension() const;

  Section tangent_part(const Section& V) const;
  Section normal_part(const Section& V) const;
  Eigen::VectorXd normal_value(const Eigen::VectorXd& V) const;
  Eigen::VectorXd tangent_value(const Eigen::VectorXd& V) const;

  // (A_zeta)^k_i in chart components; throws NotNormal unless zeta is normal.
  Eigen::MatrixXd shape_operator(const Eigen::VectorXd& zeta) const;
  Section normal_covariant(const Section& zeta, int i) const;
  Eigen::VectorXd normal_laplacian(const Section& zeta) const;
  // (nabla-perp_k B)(d_i, d_j)
  Eigen::VectorXd normal_derivative_of_B(int k, int i, int j) const;
  // sum_a (nabla_{e_a} A_H)(e_a) pushed forward by dphi.
  Eigen::VectorXd divergence_of_shape_H() const;
  // sum_a A_{nabla-perp_{e_a} H}(e_a) pushed forward.
  Eigen::VectorXd shape_of_normal_derivative_H() const;
  // sum_a B(A_H e_a, e_a)
  Eigen::VectorXd second_fundamental_of_shape_H() const;

  // Left-hand sides of the biharmonic splitting (tangential, normal).
  SplitResiduals biharmonic_split() const;

  // div_g of the source vector field X with dphi X = tangential part of W;
  // W needs order >= 1.
  double tangent_divergence(const Section& W) const;

  // Delta_g applied to every target coordinate function.
  Eigen::VectorXd coordinate_laplacians() const;

 private:
  Immersion phi_map_;
  Point x_;
  DifferentiationConfig cfg_;
  int order_;
  int m_;
  int nc_;
  std::vector<Jet> phi_;
  std::vector<Jet> dphi_;
  TargetModel target_;
  std::optional<LocalMetric> source_;
  Eigen::MatrixXd frame_;
  std::vector<Section> B_;
  Section tau_;

  double frame_trace(const std::function<double(int, int)>& t) const;
  Eigen::VectorXd frame_trace_vec(const std::function<Eigen::VectorXd(int, int)>& t) const;
  std::vector<Jet> shape_H_jets() const;
};

Eigen::VectorXd values(const Section& s);

// Convenience wrappers over LocalImmersion.
struct PullbackData {
  Eigen::MatrixXd metric;
  Eigen::MatrixXd differential;
};
PullbackData pullback_metric_and_differential(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg);
SecondFundamentalData second_fundamental_form(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg);
Eigen::VectorXd pullback_connection(const Immersion& phi, const SmoothMap& V, const Eigen::VectorXd& X,
                                    const Point& x, const DifferentiationConfig& cfg);
Eigen::VectorXd rough_laplacian(const Immersion& phi, const SmoothMap& V, const Point& x,
                                const DifferentiationConfig& cfg);
struct CurvatureAndJacobi {
  Eigen::VectorXd curvature;
  Eigen::VectorXd jacobi;
};
CurvatureAndJacobi curvature_operator_and_jacobi(const Immersion& phi, const SmoothMap& V, const Point& x,
                                                 const DifferentiationConfig& cfg);
Eigen::VectorXd bitension(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg);
struct ShapeAndNormal {
  Eigen::VectorXd shape;  // A_zeta X, source components
  Eigen::VectorXd normal_derivative;
  Eigen::VectorXd normal_laplacian;
};
ShapeAndNormal shape_and_normal_calculus(const Immersion& phi, const SmoothMap& zeta, const Eigen::VectorXd& X,
                                         const Point& x, const DifferentiationConfig& cfg);
SplitResiduals biharmonic_split_residuals(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg);

}  // namespace conelift
