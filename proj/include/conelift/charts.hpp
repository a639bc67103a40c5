#pragma once

// Standard chart manifolds and their embeddings.

#include <Eigen/Dense>

#include "conelift/manifold.hpp"

namespace conelift {

ChartManifold euclidean_chart(int dim, double half_width = 10.0);

// Unit S^n in hyperspherical angles (theta_1, ..., theta_n):
// theta_i in (0, pi) for i < n and theta_n in (-pi, pi); for n = 1 the single
// angle ranges over (-pi, pi).
ChartManifold round_sphere_chart(int n);
// The matching embedding angles -> R^{n+1}.
SmoothMap round_sphere_embedding(int n);

// Flat torus R^n / 2 pi Z^n with the unit metric, chart (0, 2 pi)^n shifted
// to (-pi, pi)^n.
ChartManifold flat_torus_chart(int n);

// Stereographic chart of the unit S^n centred at `center`: u in R^n maps to
// ((1 - |u|^2) center + 2 E u) / (1 + |u|^2), where the columns of E are an
// orthonormal basis of the tangent space at center. Metric 4/(1+|u|^2)^2 I.
struct StereographicChart {
  Eigen::VectorXd center;
  Eigen::MatrixXd basis;  // (n+1) x n

  static StereographicChart centered_at(const Eigen::VectorXd& center);

  int dim() const { return static_cast<int>(basis.cols()); }
  ChartManifold chart() const;
  // u -> point of R^{n+1}
  SmoothMap embedding() const;
  // (n+1) x n Jacobian of the embedding, row-major, as a map of u.
  SmoothMap embedding_jacobian() const;
  // point of R^{n+1} (on the sphere) -> u
  SmoothMap coordinates() const;
};

// Orthonormal completion: columns spanning the orthogonal complement of v.
Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& v);

}  // namespace conelift
