#pragma once

// Contact metric and Sasaki structures on embedded carriers.
//
// The standard structure on S^{2m+1} in C^{m+1} = R^{2m+2} uses the block
// rotation J0 (x, y) -> (-y, x) on each complex pair (coordinates 2k, 2k+1):
//   xi(p) = -J0 p,   eta(X) = <X, xi>,   J X = J0 X - eta(X) p.
// With dη(X,Y) = 1/2 (X η(Y) - Y η(X) - η([X,Y])) this satisfies all contact
// metric axioms and the Sasaki condition; with xi = +J0 p the contact
// condition dη(X,Y) = h(X, JY) fails by a sign.

#include <Eigen/Dense>
#include <array>
#include <string>

#include "conelift/immersion.hpp"

namespace conelift {

enum class CarrierKind { UnitSphere, Euclidean };

struct ContactMetricStructure {
  std::string name;
  CarrierKind carrier = CarrierKind::UnitSphere;
  int ambient = 0;  // ambient coordinate count
  SmoothMap J;      // ambient -> ambient^2, row-major
  SmoothMap xi;     // ambient -> ambient
  SmoothMap eta;    // ambient -> ambient (covector components)

  int carrier_dim() const { return carrier == CarrierKind::UnitSphere ? ambient - 1 : ambient; }
  int m() const { return (carrier_dim() - 1) / 2; }

  void check_point(const Eigen::VectorXd& p) const;
  // Orthonormal basis of the carrier tangent space at p (columns).
  Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& p) const;
  Eigen::MatrixXd tangent_projector(const Eigen::VectorXd& p) const;
  Eigen::MatrixXd J_at(const Eigen::VectorXd& p) const;
  Eigen::VectorXd xi_at(const Eigen::VectorXd& p) const;
  Eigen::VectorXd eta_at(const Eigen::VectorXd& p) const;
};

// Ambient block rotation on C^{m+1}.
Eigen::MatrixXd complex_rotation(int m);

ContactMetricStructure build_sasaki_sphere(int m);
// Same structure with xi (and eta) multiplied by `factor`.
ContactMetricStructure with_scaled_reeb(const ContactMetricStructure& S, double factor);
// Same structure with J replaced by -J.
ContactMetricStructure with_flipped_J(const ContactMetricStructure& S);
// R^n with J, xi, eta identically zero.
ContactMetricStructure degenerate_euclidean(int n);

struct AxiomResiduals {
  static constexpr std::array<const char*, 7> kNames = {"J^2",         "eta(xi)",     "J xi",        "eta o J",
                                                        "h(JX,JY)",    "eta=h(.,xi)", "d eta=h(.,J.)"};
  std::array<double, 7> values{};
  double max() const;
};

// Residuals of the seven contact metric axioms at p, maximized over the
// orthonormal tangent basis (and pairs of it).
AxiomResiduals axiom_residuals(const ContactMetricStructure& S, const Eigen::VectorXd& p,
                               const DifferentiationConfig& cfg);

// Which extension of Y off p is used for (nabla_X J)(Y): 0 projects constant
// ambient components, 1 adds a fixed linear term before projecting.
Eigen::VectorXd sasaki_condition_vector(const ContactMetricStructure& S, const Eigen::VectorXd& X,
                                        const Eigen::VectorXd& Y, const Eigen::VectorXd& p,
                                        const DifferentiationConfig& cfg, int extension = 0);
double sasaki_condition_residual(const ContactMetricStructure& S, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                 const Eigen::VectorXd& p, const DifferentiationConfig& cfg, int extension = 0);

// max_i |eta(dphi e_i)| over the orthonormal source frame; dim M may be
// smaller than m (integral submanifolds of the contact distribution).
double legendrian_residual(const Immersion& phi, const ContactMetricStructure& S, const Point& x,
                           const DifferentiationConfig& cfg);
double legendrian_residual(const LocalImmersion& L, const ContactMetricStructure& S);

// Curvature of a Sasaki space form of J-sectional curvature eps, evaluated
// term by term.
Eigen::VectorXd space_form_curvature(double eps, const ContactMetricStructure& S, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Y, const Eigen::VectorXd& Z, const Eigen::VectorXd& p);

// Eigenvalue c(eps, m) = (eps (m + 3) + 3 (m - 1)) / 4.
double spaceform_coefficient(double eps, int m);

inline constexpr double kLegendrianGate = 1e-8;

// Left-hand sides of the Legendrian biharmonic system (tangential, normal);
// throws NotLegendrian above the gate.
SplitResiduals legendrian_biharmonic_residuals(const LocalImmersion& L, const ContactMetricStructure& S);
SplitResiduals legendrian_biharmonic_residuals(const Immersion& phi, const ContactMetricStructure& S, const Point& x,
                                               const DifferentiationConfig& cfg);

struct SpaceFormResiduals {
  Eigen::VectorXd eigen;  // rough Laplacian of H minus c H
  SplitResiduals split;
};
SpaceFormResiduals spaceform_biharmonic_residual(const LocalImmersion& L, const ContactMetricStructure& S, double eps);
SpaceFormResiduals spaceform_biharmonic_residual(const Immersion& phi, const ContactMetricStructure& S, double eps,
                                                 const Point& x, const DifferentiationConfig& cfg);

}  // namespace conelift
