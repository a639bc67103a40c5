#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelift/catalog.hpp"
#include "conelift/charts.hpp"
#include "conelift/errors.hpp"
#include "conelift/sasaki.hpp"

using namespace conelift;

namespace {

const auto kJet = DifferentiationConfig::jet();
const auto kFd = DifferentiationConfig::central();

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<> nd;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v.normalized();
}

Eigen::VectorXd random_tangent(const Eigen::VectorXd& p, std::mt19937_64& rng) {
  Eigen::VectorXd v = random_unit(static_cast<int>(p.size()), rng);
  return v - v.dot(p) * p;
}

Point pt(std::initializer_list<double> v) {
  Point p(v.size());
  int i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

}  // namespace

TEST(SasakiSphere, BasePointValues) {
  const auto S = build_sasaki_sphere(1);
  const Eigen::Vector4d p(1, 0, 0, 0);
  EXPECT_LT((S.xi_at(p) - Eigen::Vector4d(0, -1, 0, 0)).norm(), 1e-15);
  EXPECT_NEAR(S.eta_at(p).dot(S.xi_at(p)), 1.0, 1e-15);
  const Eigen::Vector4d X(0, 0, 1, 0);
  const Eigen::VectorXd JX = S.J_at(p) * X;
  EXPECT_LT((JX - Eigen::Vector4d(0, 0, 0, 1)).norm(), 1e-15);
  EXPECT_LT((S.J_at(p) * JX + X).norm(), 1e-15);
}

TEST(SasakiSphere, MetricCompatibilityM2) {
  std::mt19937_64 rng(1);
  const auto S = build_sasaki_sphere(2);
  for (int s = 0; s < 20; ++s) {
    const Eigen::VectorXd p = random_unit(6, rng);
    const Eigen::VectorXd X = random_tangent(p, rng), Y = random_tangent(p, rng);
    const Eigen::MatrixXd J = S.J_at(p);
    const Eigen::VectorXd eta = S.eta_at(p);
    EXPECT_NEAR((J * X).dot(J * Y) - X.dot(Y) + eta.dot(X) * eta.dot(Y), 0.0, 1e-10);
  }
}

TEST(Axioms, HoldOnSasakiSpheres) {
  std::mt19937_64 rng(2);
  for (int m : {1, 2}) {
    const auto S = build_sasaki_sphere(m);
    for (int s = 0; s < 100; ++s) {
      const auto r = axiom_residuals(S, random_unit(2 * m + 2, rng), kJet);
      for (std::size_t i = 0; i < r.values.size(); ++i) ASSERT_LT(r.values[i], 1e-9) << r.kNames[i];
    }
  }
}

TEST(Axioms, CentralDifferenceBackend) {
  std::mt19937_64 rng(3);
  const auto S = build_sasaki_sphere(1);
  for (int s = 0; s < 10; ++s) EXPECT_LT(axiom_residuals(S, random_unit(4, rng), kFd).max(), 1e-8);
}

TEST(Axioms, ScaledReebBreaksNormalization) {
  std::mt19937_64 rng(4);
  const auto S = with_scaled_reeb(build_sasaki_sphere(1), 2.0);
  const auto r = axiom_residuals(S, random_unit(4, rng), kJet);
  EXPECT_NEAR(r.values[1], 1.0, 1e-12);
}

TEST(Axioms, DegenerateEuclideanDetected) {
  const auto r = axiom_residuals(degenerate_euclidean(3), Eigen::Vector3d(0.1, 0.2, 0.3), kJet);
  EXPECT_NEAR(r.values[1], 1.0, 1e-15);
}

TEST(Axioms, OppositeReebFailsContactCondition) {
  // xi = +J0 p with the same J: everything but the contact condition survives.
  auto S2 = with_scaled_reeb(build_sasaki_sphere(1), -1.0);
  S2.eta = S2.xi;
  std::mt19937_64 rng(5);
  const Eigen::VectorXd p = random_unit(4, rng);
  const auto r = axiom_residuals(S2, p, kJet);
  for (int i = 0; i < 6; ++i) EXPECT_LT(r.values[i], 1e-12) << r.kNames[i];
  // d eta' = -h(., J .), so the residual is twice the largest |h(e_i, J e_j)|.
  const Eigen::MatrixXd E = S2.tangent_basis(p);
  const double hJ = (E.transpose() * S2.J_at(p) * E).cwiseAbs().maxCoeff();
  EXPECT_GT(hJ, 0.5);
  EXPECT_NEAR(r.values[6], 2.0 * hJ, 1e-12);
}

TEST(SasakiCondition, HoldsAndIsExtensionIndependent) {
  std::mt19937_64 rng(6);
  for (int m : {1, 2}) {
    const auto S = build_sasaki_sphere(m);
    for (int s = 0; s < 30; ++s) {
      const Eigen::VectorXd p = random_unit(2 * m + 2, rng);
      const Eigen::VectorXd X = random_tangent(p, rng), Y = random_tangent(p, rng);
      EXPECT_LT(sasaki_condition_residual(S, X, Y, p, kJet, 0), 1e-8);
      EXPECT_LT(sasaki_condition_residual(S, X, Y, p, kJet, 1), 1e-8);
      const auto v0 = sasaki_condition_vector(S, X, Y, p, kJet, 0);
      const auto v1 = sasaki_condition_vector(S, X, Y, p, kJet, 1);
      EXPECT_LT((v0 - v1).norm(), 1e-10);
    }
  }
}

TEST(SasakiCondition, ReebAlongReeb) {
  const auto S = build_sasaki_sphere(1);
  std::mt19937_64 rng(7);
  const Eigen::VectorXd p = random_unit(4, rng);
  const Eigen::VectorXd xi = S.xi_at(p);
  EXPECT_LT(sasaki_condition_residual(S, xi, xi, p, kJet), 1e-8);
}

TEST(SasakiCondition, FlippedJDoublesTheRightHandSide) {
  const auto S = build_sasaki_sphere(1);
  const auto F = with_flipped_J(S);
  std::mt19937_64 rng(8);
  for (int s = 0; s < 10; ++s) {
    const Eigen::VectorXd p = random_unit(4, rng);
    const Eigen::VectorXd X = random_tangent(p, rng), Y = random_tangent(p, rng);
    const double rhs = (X.dot(Y) * S.xi_at(p) - S.eta_at(p).dot(Y) * X).norm();
    ASSERT_GT(rhs, 1e-3);
    EXPECT_NEAR(sasaki_condition_residual(F, X, Y, p, kJet), 2.0 * rhs, 1e-8);
  }
}

TEST(Legendrian, ResidualsOfCatalogCurves) {
  const auto S3 = build_sasaki_sphere(1);
  for (double t : {-1.0, 0.3, 2.0}) {
    EXPECT_LT(legendrian_residual(great_legendrian_circle(), S3, pt({t}), kJet), 1e-12);
    EXPECT_NEAR(legendrian_residual(biharmonic_small_circle(), S3, pt({t}), kJet), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_LT(legendrian_residual(legendrian_torus_curve(0.9), S3, pt({t}), kJet), 1e-12);
  }
  const auto S5 = build_sasaki_sphere(2);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 10; ++s) {
    const Point x = pt({std::uniform_real_distribution<>(-3, 3)(rng), std::uniform_real_distribution<>(-3, 3)(rng)});
    EXPECT_LT(legendrian_residual(legendrian_clifford_torus(), S5, x, kJet), 1e-10);
  }
}

TEST(Legendrian, DimensionMismatch) {
  EXPECT_THROW(legendrian_residual(latitude_circle(1.0), build_sasaki_sphere(1), pt({0.1}), kJet), DimensionMismatch);
  EXPECT_THROW(legendrian_residual(great_legendrian_circle(), build_sasaki_sphere(2), pt({0.1}), kJet),
               DimensionMismatch);
}

TEST(SpaceForm, EpsilonOneIsUnitCurvature) {
  std::mt19937_64 rng(10);
  const auto S = build_sasaki_sphere(1);
  for (int s = 0; s < 20; ++s) {
    const Eigen::VectorXd p = random_unit(4, rng);
    const Eigen::VectorXd X = random_tangent(p, rng), Y = random_tangent(p, rng), Z = random_tangent(p, rng);
    const Eigen::VectorXd R = space_form_curvature(1.0, S, X, Y, Z, p);
    EXPECT_LT((R - (Y.dot(Z) * X - Z.dot(X) * Y)).norm(), 1e-14);
  }
}

TEST(SpaceForm, EpsilonOneMatchesNumericRoundCurvature) {
  std::mt19937_64 rng(11);
  const auto S = build_sasaki_sphere(1);
  for (int s = 0; s < 50; ++s) {
    const Eigen::VectorXd p = random_unit(4, rng);
    const auto st = StereographicChart::centered_at(p);
    const auto R = riemann_and_ricci(st.chart(), Eigen::VectorXd::Zero(3), kJet).riemann;
    const Eigen::VectorXd X = random_tangent(p, rng), Y = random_tangent(p, rng), Z = random_tangent(p, rng);
    // d sigma(0) = 2 E
    const Eigen::VectorXd x = st.basis.transpose() * X / 2, y = st.basis.transpose() * Y / 2,
                          z = st.basis.transpose() * Z / 2;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(3);
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) r[l] += R.at({l, i, j, k}) * x[i] * y[j] * z[k];
    const Eigen::VectorXd numeric = 2.0 * st.basis * r;
    EXPECT_LT((space_form_curvature(1.0, S, X, Y, Z, p) - numeric).norm(), 1e-8);
  }
}

TEST(SpaceForm, ReebSectionalCurvatureIsEpsilonIndependent) {
  std::mt19937_64 rng(12);
  const auto S = build_sasaki_sphere(1);
  const Eigen::VectorXd p = random_unit(4, rng);
  const Eigen::VectorXd xi = S.xi_at(p);
  Eigen::VectorXd Y = random_tangent(p, rng);
  Y -= Y.dot(xi) * xi;
  for (double eps : {-3.0, 0.0, 1.0, 4.5}) EXPECT_LT((space_form_curvature(eps, S, xi, Y, xi, p) + Y).norm(), 1e-14);
}

TEST(SpaceForm, Coefficient) {
  EXPECT_DOUBLE_EQ(spaceform_coefficient(1.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(spaceform_coefficient(1.0, 2), 2.0);
  EXPECT_DOUBLE_EQ(spaceform_coefficient(-1.0, 1), -1.0);
}

TEST(LegendrianBiharmonic, MinimalExamplesVanish) {
  const auto S3 = build_sasaki_sphere(1);
  const auto S5 = build_sasaki_sphere(2);
  const auto a = legendrian_biharmonic_residuals(great_legendrian_circle(), S3, pt({0.4}), kJet);
  EXPECT_LT(a.tangential.norm() + a.normal.norm(), 1e-12);
  for (const auto& x : {pt({0.3, -0.5}), pt({2.0, 1.1})}) {
    const auto b = legendrian_biharmonic_residuals(legendrian_clifford_torus(), S5, x, kJet);
    EXPECT_LT(b.tangential.norm() + b.normal.norm(), 1e-10);
    const auto c = spaceform_biharmonic_residual(legendrian_clifford_torus(), S5, 1.0, x, kJet);
    EXPECT_LT(c.eigen.norm() + c.split.tangential.norm() + c.split.normal.norm(), 1e-10);
  }
  const auto d = legendrian_biharmonic_residuals(totally_geodesic_real_sphere(), S5, pt({1.0, 0.5}), kJet);
  EXPECT_LT(d.tangential.norm() + d.normal.norm(), 1e-10);
}

TEST(LegendrianBiharmonic, NonLegendrianIsRejected) {
  const auto S3 = build_sasaki_sphere(1);
  EXPECT_THROW(legendrian_biharmonic_residuals(biharmonic_small_circle(), S3, pt({0.2}), kJet), NotLegendrian);
  EXPECT_THROW(spaceform_biharmonic_residual(biharmonic_small_circle(), S3, 1.0, pt({0.2}), kJet), NotLegendrian);
}

TEST(LegendrianBiharmonic, PerturbedCurveFailsEveryForm) {
  const auto S3 = build_sasaki_sphere(1);
  const auto e = catalog_entry("perturbed-circle");
  for (double t : {-1.0, 0.5}) {
    const LocalImmersion L(e.immersion, pt({t}), kJet);
    const auto a = legendrian_biharmonic_residuals(L, S3);
    const auto b = spaceform_biharmonic_residual(L, S3, 1.0);
    EXPECT_GT(a.tangential.norm() + a.normal.norm(), 1e-2);
    EXPECT_GT(b.eigen.norm(), 1e-2);
    EXPECT_GT(b.split.tangential.norm() + b.split.normal.norm(), 1e-2);
  }
}

TEST(LegendrianBiharmonic, EigenResidualIsBitensionOverM) {
  // On the unit sphere c(1, m) = m and R(H) = m H, so the eigen residual is tau2 / m.
  std::mt19937_64 rng(13);
  const auto S3 = build_sasaki_sphere(1);
  for (int s = 0; s < 10; ++s) {
    const double t = std::uniform_real_distribution<>(-3, 3)(rng);
    const LocalImmersion L(legendrian_torus_curve(0.5 + 0.05 * s), pt({t}), kJet);
    const auto b = spaceform_biharmonic_residual(L, S3, 1.0);
    EXPECT_LT((b.eigen - L.bitension()).norm(), 1e-9);
  }
}
