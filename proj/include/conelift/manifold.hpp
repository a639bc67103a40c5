#pragma once

// Chart-level Riemannian calculus.
//
// Library-wide sign conventions:
//   * Curvature  R(U,V) = nabla_U nabla_V - nabla_V nabla_U - nabla_[U,V].
//     Components R^l_ijk are dx^l(R(d_i, d_j) d_k), so the unit sphere has
//     R(X,Y)Z = g(Y,Z)X - g(X,Z)Y and positive sectional curvature
//     g(R(e1,e2)e2, e1) = 1.
//   * Ricci      Ric(X,Y) = sum_a g(R(e_a,X)Y, e_a), i.e. Ric_jk = R^i_ijk.
//   * Laplacians are positive: on flat R^n, Delta f = -sum_i d_i^2 f. The
//     rough Laplacian and normal Laplacian follow the same sign.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "conelift/differentiation.hpp"

namespace conelift {

using Point = Eigen::VectorXd;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
  // Distance from x to the complement of the box (negative when outside).
  double clearance(std::span<const double> x) const;
  Point center() const;
};

// Minimum distance to a chart boundary accepted by chart operations.
inline constexpr double kDomainMargin = 1e-6;

class ChartManifold {
 public:
  ChartManifold() = default;
  // `metric` maps a point to the dim*dim row-major component grid g_ij.
  ChartManifold(std::string name, int dim, Box domain, SmoothMap metric);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  const SmoothMap& metric() const { return metric_; }

  // Throws DomainError when x is within kDomainMargin of the boundary.
  void check_point(std::span<const double> x) const;
  Eigen::MatrixXd metric_at(std::span<const double> x) const;

 private:
  std::string name_;
  int dim_ = 0;
  Box domain_;
  SmoothMap metric_;
};

// Component grid with declared variance, e.g. "^__" for Gamma^k_ij.
struct TensorValue {
  std::vector<int> shape;
  std::string variance;
  std::vector<double> data;

  TensorValue() = default;
  TensorValue(std::vector<int> shape, std::string variance);

  double& at(std::initializer_list<int> idx);
  double at(std::initializer_list<int> idx) const;
  double max_abs() const;
};

struct OrthonormalFrame {
  Point point;
  // Column a holds e_a in the chart basis.
  Eigen::MatrixXd frame;
};

// Metric, inverse and Christoffel symbols of a chart metric around a point,
// all as jets in the chart increments.
class LocalMetric {
 public:
  // g: dim*dim row-major jets of order k >= 1.
  LocalMetric(int dim, std::vector<Jet> g);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const Jet& g(int i, int j) const { return g_[i * dim_ + j]; }
  const Jet& inverse(int i, int j) const { return inv_[i * dim_ + j]; }
  // Gamma^k_ij, order k - 1.
  const Jet& christoffel(int k, int i, int j) const { return gamma_[(k * dim_ + i) * dim_ + j]; }

  Eigen::MatrixXd metric_value() const;
  Eigen::MatrixXd inverse_value() const;
  // R^l_ijk at the base point; needs order >= 2.
  TensorValue riemann() const;

 private:
  int dim_;
  int order_;
  std::vector<Jet> g_;
  std::vector<Jet> inv_;
  std::vector<Jet> gamma_;
};

// Inverse of a square jet matrix (row-major) by Gauss-Jordan elimination
// with partial pivoting on the base values.
std::vector<Jet> invert(std::span<const Jet> a, int n);

LocalMetric local_metric(const ChartManifold& M, std::span<const double> x, int order,
                         const DifferentiationConfig& cfg);

// Gamma^k_ij, variance "^__".
TensorValue christoffel(const ChartManifold& M, const Point& x, const DifferentiationConfig& cfg);

struct CurvatureTensors {
  TensorValue riemann;  // R^l_ijk, "^___"
  TensorValue ricci;    // Ric_ij, "__"
};
// Ric(d_j, d_k) = sum_a g(R(e_a, d_j) d_k, e_a) for R given as R^l_ijk.
TensorValue ricci_from_riemann(const TensorValue& riemann, const Eigen::MatrixXd& g);
CurvatureTensors riemann_and_ricci(const ChartManifold& M, const Point& x, const DifferentiationConfig& cfg);

// Gram-Schmidt on the coordinate basis in index order.
OrthonormalFrame orthonormal_frame(const ChartManifold& M, const Point& x);
Eigen::MatrixXd gram_schmidt_frame(const Eigen::MatrixXd& g);

struct ScalarCalculus {
  Eigen::VectorXd gradient;
  double laplacian = 0.0;
};
// f: dim -> 1
ScalarCalculus scalar_calculus(const ChartManifold& M, const SmoothMap& f, const Point& x,
                               const DifferentiationConfig& cfg);
// V: dim -> dim (components in the chart basis)
double divergence(const ChartManifold& M, const SmoothMap& V, const Point& x, const DifferentiationConfig& cfg);

// Sum over a frame of T(e_a, e_a) for a bilinear form given by components.
double frame_trace(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& components);

// Checks symmetry (1e-12) and positive definiteness; throws SingularMetric.
void validate_metric(const Eigen::MatrixXd& g, const std::string& where);

}  // namespace conelift
