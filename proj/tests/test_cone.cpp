#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelift/catalog.hpp"
#include "conelift/charts.hpp"
#include "conelift/cone.hpp"
#include "conelift/errors.hpp"
#include "conelift/sasaki.hpp"

using namespace conelift;

namespace {

constexpr double kPi = std::numbers::pi;
const auto kJet = DifferentiationConfig::jet();
const std::vector<double> kRadii = {0.5, 1.0, 2.0, 5.0};

Point pt(std::initializer_list<double> v) {
  Point p(v.size());
  int i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

Point random_point(const Box& box, std::mt19937_64& rng, double margin = 0.0) {
  Point p(box.dim());
  for (int i = 0; i < box.dim(); ++i)
    p[i] = std::uniform_real_distribution<>(box.lower[i] + margin, box.upper[i] - margin)(rng);
  return p;
}

Point with_r(double r, const Point& x) {
  Point rx(x.size() + 1);
  rx << r, x;
  return rx;
}

// Torus of revolution, g = diag(1, (2 + cos u)^2).
ChartManifold revolution_torus() {
  return ChartManifold("T_rev", 2, Box{{-kPi, -kPi}, {kPi, kPi}}, make_map(2, 4, [](auto x) {
                         using T = std::decay_t<decltype(x[0])>;
                         const T w = 2.0 + cos(x[0]);
                         return std::vector<T>{T(1.0), T(0.0), T(0.0), w * w};
                       }));
}

double max_diff(const TensorValue& a, const TensorValue& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

SmoothMap scalar(std::function<Jet(std::span<const Jet>)> fj, std::function<double(std::span<const double>)> fd,
                 int in) {
  return SmoothMap(
      in, 1, [fd](std::span<const double> x) { return std::vector<double>{fd(x)}; },
      [fj](std::span<const Jet> x) { return std::vector<Jet>{fj(x)}; });
}

SmoothMap zero_section(int in, int out) {
  return make_map(in, out, [out](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>(out, T(0.0));
  });
}

Immersion small_circle() { return biharmonic_small_circle(); }

// V - <V, phi> phi, so that V is tangent to the target sphere.
SmoothMap tangent_to_sphere(const Immersion& phi, const SmoothMap& V) {
  const SmoothMap f = phi.map;
  return make_map(V.in_dim(), V.out_dim(), [f, V](auto rx) {
    using T = std::decay_t<decltype(rx[0])>;
    const auto p = f(rx.subspan(1));
    auto v = V(rx);
    T d(0.0);
    for (std::size_t a = 0; a < v.size(); ++a) d = d + v[a] * p[a];
    for (std::size_t a = 0; a < v.size(); ++a) v[a] = v[a] - d * p[a];
    return v;
  });
}

// A smooth section along a lifted curve in S^3, (r, t) -> R^4.
SmoothMap curve_section(const Immersion& phi) {
  return tangent_to_sphere(phi, make_map(2, 4, [](auto rt) {
                             using T = std::decay_t<decltype(rt[0])>;
                             const T r = rt[0], t = rt[1];
                             return std::vector<T>{0.3 * sin(t) * r, T(0.7), r * r * cos(2.0 * t), 0.2 * t - 0.1 * r};
                           }));
}

// Terms of the generic rough Laplacian of W = V + B d_r on a lift that the
// printed closed form leaves out:
//   (1/r^2)(V^T - m V) + (m B / r^2) d_r
//   + (1/r) (2 sum h(e_a, nabla-bar_{e_a} V) + h(tau, V)) d_r
//   - ((m + 2) / r) d_r V - d_r^2 V
ConeVector omitted_laplacian_terms(const Immersion& phi, const ConeSection& W, double r, const Point& x) {
  const int m = phi.m();
  const LocalImmersion L(phi, x, kJet, 2);
  const Point rx = with_r(r, x);
  const auto Vj = taylor_model(W.V, std::span<const double>(rx.data(), rx.size()), 2, kJet);
  Eigen::VectorXd V(Vj.size()), Vr(Vj.size()), Vrr(Vj.size());
  for (std::size_t a = 0; a < Vj.size(); ++a) {
    V[a] = Vj[a].value();
    Vr[a] = Vj[a].derivative(0).value();
    Vrr[a] = Vj[a].derivative(0).derivative(0).value();
  }
  const double B = W.B(std::span<const double>(rx.data(), rx.size()))[0];
  auto Vx = SmoothMap(
      m, V.size(),
      [&W, r, m](std::span<const double> y) {
        std::vector<double> z{r};
        for (int i = 0; i < m; ++i) z.push_back(y[i]);
        return W.V(std::span<const double>(z));
      },
      [&W, r, m](std::span<const Jet> y) {
        std::vector<Jet> z{Jet(r)};
        for (int i = 0; i < m; ++i) z.push_back(y[i]);
        return W.V(std::span<const Jet>(z));
      });
  const Section s = L.section_model(Vx, 1);
  double trace = 0.0;
  for (int a = 0; a < m; ++a) {
    const Eigen::VectorXd e = L.frame().col(a);
    trace += L.inner(L.push(e), L.covariant_along(s, e));
  }
  ConeVector out;
  out.base = (L.tangent_value(V) - m * V) / (r * r) - ((m + 2) / r) * Vr - Vrr;
  out.radial = m * B / (r * r) + (2.0 * trace + L.inner(L.tension(), V)) / r;
  return out;
}

double cone_diff(const ConeVector& a, const ConeVector& b) {
  return std::max(std::abs(a.radial - b.radial), (a.base - b.base).cwiseAbs().maxCoeff());
}

}  // namespace

TEST(ConeMetric, FlatLine) {
  const auto C = cone_metric(euclidean_chart(1));
  const Eigen::MatrixXd g = C.metric_at(std::vector<double>{2.0, 0.3});
  EXPECT_NEAR(g(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(g(1, 1), 4.0, 1e-15);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-15);
  EXPECT_EQ(C.dim(), 2);
  EXPECT_THROW(C.check_point(std::vector<double>{0.0, 0.3}), DomainError);
}

TEST(ConeMetric, ConeOverCircleIsFlat) {
  const auto C = cone_metric(round_sphere_chart(1));
  for (double r : kRadii) EXPECT_LT(riemann_and_ricci(C, pt({r, 0.7}), kJet).riemann.max_abs(), 1e-12);
}

TEST(ConeMetric, ConeOverS3IsFlatR4InPolarCoordinates) {
  const auto C = cone_metric(round_sphere_chart(3));
  const SmoothMap emb = round_sphere_embedding(3);
  auto polar = make_map(4, 4, [emb](auto rx) {
    using T = std::decay_t<decltype(rx[0])>;
    auto p = emb(rx.subspan(1));
    for (T& v : p) v = rx[0] * v;
    return p;
  });
  std::mt19937_64 rng(7);
  for (int s = 0; s < 20; ++s) {
    const Point rx = with_r(std::uniform_real_distribution<>(0.5, 5.0)(rng),
                            random_point(Box{{0.2, 0.2, -3.0}, {2.9, 2.9, 3.0}}, rng));
    const auto model = taylor_model(polar, std::span<const double>(rx.data(), 4), 1, kJet);
    Eigen::MatrixXd D(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i) D(a, i) = model[a].derivative(i).value();
    const Eigen::MatrixXd g = C.metric_at(std::span<const double>(rx.data(), 4));
    EXPECT_LT((D.transpose() * D - g).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ConeMetric, LiouvilleNorm) {
  const auto C = cone_metric(round_sphere_chart(2));
  for (double r : kRadii) {
    const Point rx = pt({r, 1.0, 0.3});
    const Eigen::VectorXd psi = liouville_field(rx);
    EXPECT_NEAR(psi.dot(C.metric_at(std::span<const double>(rx.data(), 3)) * psi), r * r, 1e-13);
  }
}

TEST(ConeConnection, PrintedExamples) {
  const auto S1 = round_sphere_chart(1);
  const Point rx = pt({3.0, 0.4});
  const Eigen::Vector2d dr(1, 0), dt(0, 1);
  EXPECT_LT(cone_connection_closed(S1, rx, dr, dr, kJet).norm(), 1e-15);
  EXPECT_LT((cone_connection_closed(S1, rx, dt, dt, kJet) - Eigen::Vector2d(-3.0, 0.0)).norm(), 1e-14);
  const Point rx2 = pt({2.0, 0.4});
  EXPECT_LT((cone_connection_closed(S1, rx2, dt, dr, kJet) - Eigen::Vector2d(0.0, 0.5)).norm(), 1e-14);
  const auto S2 = round_sphere_chart(2);
  const Eigen::VectorXd e1 = Eigen::Vector3d(0, 1, 0);
  EXPECT_LT((cone_connection_closed(S2, pt({2.0, 1.0, 0.2}), e1, Eigen::Vector3d(1, 0, 0), kJet) - e1 / 2).norm(),
            1e-14);
}

TEST(ConeConnection, ClosedFormMatchesGenericChristoffel) {
  std::mt19937_64 rng(21);
  const std::vector<ChartManifold> bases = {euclidean_chart(1), round_sphere_chart(1), round_sphere_chart(2),
                                            round_sphere_chart(3), revolution_torus()};
  int count = 0;
  for (const auto& base : bases) {
    const auto C = cone_metric(base);
    for (int s = 0; s < 40; ++s, ++count) {
      const Point rx = with_r(kRadii[s % 4], random_point(base.domain(), rng, 0.2));
      const auto closed = cone_christoffel_closed(base, rx, kJet);
      const auto generic = christoffel(C, rx, kJet);
      EXPECT_LT(max_diff(closed, generic), 1e-8) << base.name();
    }
  }
  EXPECT_GE(count, 200);
}

TEST(ConeCurvature, ConeOverRoundSphereIsFlat) {
  std::mt19937_64 rng(4);
  for (int n : {2, 3}) {
    const auto base = round_sphere_chart(n);
    for (int s = 0; s < 8; ++s) {
      const Point rx = with_r(kRadii[s % 4], random_point(base.domain(), rng, 0.2));
      EXPECT_LT(cone_riemann_closed(base, rx, kJet).max_abs(), 1e-10);
      EXPECT_LT(riemann_and_ricci(cone_metric(base), rx, kJet).riemann.max_abs(), 1e-9);
    }
  }
}

TEST(ConeCurvature, RadialSlotsVanish) {
  const auto base = revolution_torus();
  const Point rx = pt({2.0, 0.3, -0.4});
  const Eigen::Vector3d dr(1, 0, 0), X(0, 0.6, -1.2), Y(0, 1.1, 0.3);
  EXPECT_LT(cone_curvature_closed(base, rx, X, dr, dr, kJet).norm(), 1e-15);
  EXPECT_LT(cone_curvature_closed(base, rx, dr, X, Y, kJet).norm(), 1e-15);
}

TEST(ConeCurvature, FlatTorusConeIsCurved) {
  const auto base = flat_torus_chart(2);
  const Point rx = pt({2.0, 0.5, -1.0});
  const Eigen::Vector3d X(0, 1, 0), Y(0, 0, 1);
  // -g(Y,Y) X + g(X,Y) Y = -X
  EXPECT_LT((cone_curvature_closed(base, rx, X, Y, Y, kJet) + X).norm(), 1e-14);
  std::mt19937_64 rng(9);
  for (const auto& b : {flat_torus_chart(2), revolution_torus()}) {
    for (int s = 0; s < 12; ++s) {
      const Point p = with_r(kRadii[s % 4], random_point(b.domain(), rng, 0.2));
      const auto closed = cone_riemann_closed(b, p, kJet);
      const auto generic = riemann_and_ricci(cone_metric(b), p, kJet).riemann;
      EXPECT_GT(closed.max_abs(), 0.1);
      EXPECT_LT(max_diff(closed, generic), 1e-7) << b.name();
    }
  }
}

TEST(ConeLift, IdentityLiftsToIdentity) {
  Immersion id{euclidean_chart(2), TargetGeometry::chart(euclidean_chart(2)), make_map(2, 2, [](auto x) {
                 using T = std::decay_t<decltype(x[0])>;
                 return std::vector<T>(x.begin(), x.end());
               }),
               "identity"};
  const auto L = lift(id, pt({0.3, 0.1}));
  const auto y = L.lifted.map(std::vector<double>{1.5, 0.3, 0.1});
  EXPECT_EQ(y, (std::vector<double>{1.5, 0.3, 0.1}));
  const LocalImmersion Lb(L.lifted, L.at(1.5), kJet, 2);
  EXPECT_LT((Lb.differential() - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
}

TEST(ConeLift, GreatCirclePullbackIsConeMetric) {
  const auto L = lift(great_legendrian_circle(), pt({0.7}));
  const LocalImmersion Lb(L.lifted, L.at(2.0), kJet, 2);
  EXPECT_LT((Lb.metric() - Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix()).norm(), 1e-12);
}

TEST(ConeLift, IsometricOverCatalog) {
  std::mt19937_64 rng(13);
  for (const auto& e : catalog()) {
    for (int s = 0; s < 4; ++s) {
      const Point x = random_point(e.sample_box, rng);
      const auto L = lift(e.immersion, x);
      const LocalImmersion base(e.immersion, x, kJet, 2);
      const double r = kRadii[s];
      const LocalImmersion Lb(L.lifted, L.at(r), kJet, 2);
      Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(L.m() + 1, L.m() + 1);
      expect(0, 0) = 1.0;
      expect.bottomRightCorner(L.m(), L.m()) = r * r * base.metric();
      EXPECT_LT((Lb.metric() - expect).cwiseAbs().maxCoeff(), 1e-9) << e.name;
    }
  }
}

TEST(ConePullbackConnection, RadialFieldAlongBase) {
  const auto phi = great_legendrian_circle();
  const Point x = pt({0.4});
  const auto L = lift(phi, x);
  const ConeSection W{zero_section(2, 4), scalar([](auto) { return Jet(1.0); }, [](auto) { return 1.0; }, 2)};
  const Eigen::Vector2d X(0, 1);
  for (double r : kRadii) {
    const auto c = cone_pullback_connection_closed(phi, W, X, r, x, kJet);
    const auto g = cone_pullback_connection_generic(L, W, X, r, kJet);
    const Eigen::VectorXd expect = LocalImmersion(phi, x, kJet, 2).push(Eigen::VectorXd::Ones(1)) / r;
    EXPECT_LT((c.base - expect).norm(), 1e-13);
    EXPECT_NEAR(c.radial, 0.0, 1e-14);
    EXPECT_LT(cone_diff(c, g), 1e-10);
  }
}

TEST(ConePullbackConnection, RadialDirectionWithoutB) {
  const auto phi = great_legendrian_circle();
  const Point x = pt({0.4});
  const ConeSection W{zero_section(2, 4), scalar([](auto) { return Jet(0.0); }, [](auto) { return 0.0; }, 2)};
  const auto c = cone_pullback_connection_closed(phi, W, Eigen::Vector2d(1, 0), 2.0, x, kJet);
  EXPECT_LT(c.base.norm(), 1e-15);
  EXPECT_EQ(c.radial, 0.0);
  EXPECT_LT(cone_diff(c, cone_pullback_connection_generic(lift(phi, x), W, Eigen::Vector2d(1, 0), 2.0, kJet)), 1e-12);
}

// With V along the normal bundle and independent of r, the printed form is
// exact in base directions.
TEST(ConePullbackConnection, AgreesForNormalRadiusIndependentV) {
  const auto phi = great_legendrian_circle();
  auto V = make_map(2, 4, [](auto rt) {
    using T = std::decay_t<decltype(rt[0])>;
    return std::vector<T>{T(0.0), 0.5 + 0.2 * sin(rt[1]), T(0.0), cos(rt[1])};
  });
  auto B = scalar([](std::span<const Jet> y) { return y[0] * sin(y[1]); },
                  [](std::span<const double> y) { return y[0] * std::sin(y[1]); }, 2);
  const ConeSection W{V, B};
  std::mt19937_64 rng(2);
  for (int s = 0; s < 6; ++s) {
    const Point x = random_point(Box{{-3.0}, {3.0}}, rng);
    const auto L = lift(phi, x);
    const auto c = cone_pullback_connection_closed(phi, W, Eigen::Vector2d(0, 1.3), 2.0, x, kJet);
    const auto g = cone_pullback_connection_generic(L, W, Eigen::Vector2d(0, 1.3), 2.0, kJet);
    EXPECT_LT(cone_diff(c, g), 1e-8);
  }
}

// For a general W the generic derivative carries -r h(X, V) d_r in base
// directions and V/r + d_r V in the radial direction, both absent from the
// printed form.
TEST(ConePullbackConnection, GeneralSectionDiffersByOmittedTerms) {
  const auto phi = great_legendrian_circle();
  auto B = scalar([](std::span<const Jet> y) { return y[0] * y[0] + cos(y[1]); },
                  [](std::span<const double> y) { return y[0] * y[0] + std::cos(y[1]); }, 2);
  const ConeSection W{curve_section(phi), B};
  std::mt19937_64 rng(8);
  for (int s = 0; s < 6; ++s) {
    const Point x = random_point(Box{{-3.0}, {3.0}}, rng);
    const double r = 2.0;
    const auto L = lift(phi, x);
    const LocalImmersion Lx(phi, x, kJet, 2);
    const Point rx = with_r(r, x);
    const auto Vj = taylor_model(W.V, std::span<const double>(rx.data(), 2), 1, kJet);
    Eigen::VectorXd V(4), Vr(4);
    for (int a = 0; a < 4; ++a) V[a] = Vj[a].value(), Vr[a] = Vj[a].derivative(0).value();
    const Eigen::Vector2d dir(0.7, -1.1);
    const auto c = cone_pullback_connection_closed(phi, W, dir, r, x, kJet);
    const auto g = cone_pullback_connection_generic(L, W, dir, r, kJet);
    ConeVector omitted{-r * Lx.inner(Lx.push(dir.tail(1)), V), dir[0] * (V / r + Vr)};
    EXPECT_GT(cone_diff(c, g), 1e-3);
    EXPECT_LT(cone_diff(c + omitted, g), 1e-8);
  }
}

TEST(ConeLaplacian, GreatCircleTensionSectionVanishes) {
  const auto phi = great_legendrian_circle();
  const Point x = pt({1.1});
  const ConeSection W{zero_section(2, 4), scalar([](auto) { return Jet(0.0); }, [](auto) { return 0.0; }, 2)};
  for (double r : kRadii) {
    const auto c = cone_laplacian_and_jacobi_closed(phi, W, r, x, kJet);
    EXPECT_LT(cone_diff(c.laplacian, {0.0, Eigen::VectorXd::Zero(4)}), 1e-14);
    EXPECT_LT(cone_diff(c.jacobi, {0.0, Eigen::VectorXd::Zero(4)}), 1e-14);
  }
}

TEST(ConeLaplacian, RadialQuadraticOnLiftedCircle) {
  const auto phi = great_legendrian_circle();
  const Point x = pt({0.2});
  const ConeSection W{zero_section(2, 4), scalar([](std::span<const Jet> y) { return y[0] * y[0]; },
                                                 [](std::span<const double> y) { return y[0] * y[0]; }, 2)};
  const auto c = cone_laplacian_and_jacobi_closed(phi, W, 1.0, x, kJet);
  EXPECT_NEAR(c.laplacian.radial, -4.0, 1e-12);
  // The rough Laplacian of r^2 d_r on the flat plane (the cone over a great
  // circle) is -(B'' + B'/r - B/r^2) = -3.
  const auto g = cone_laplacian_and_jacobi_generic(lift(phi, x), W, 1.0, kJet);
  EXPECT_NEAR(g.laplacian.radial, -3.0, 1e-10);
  EXPECT_LT(g.laplacian.base.norm(), 1e-10);
}

TEST(ConeLaplacian, GenericEqualsPrintedPlusOmittedTerms) {
  struct Case {
    Immersion phi;
    ConeSection W;
    Box box;
  };
  auto torus_V = make_map(3, 6, [](auto y) {
    using T = std::decay_t<decltype(y[0])>;
    const T r = y[0], a = y[1], b = y[2];
    return std::vector<T>{sin(a) * r, cos(b), T(0.3), a * b, r * r * 0.1, cos(a + b)};
  });
  auto torus_B = scalar([](std::span<const Jet> y) { return y[0] * y[0] * sin(y[1]) + cos(y[2]); },
                        [](std::span<const double> y) { return y[0] * y[0] * std::sin(y[1]) + std::cos(y[2]); }, 3);
  auto curve_B = scalar([](std::span<const Jet> y) { return y[0] * cos(y[1]); },
                        [](std::span<const double> y) { return y[0] * std::cos(y[1]); }, 2);
  const std::vector<Case> cases = {
      {legendrian_clifford_torus(), {tangent_to_sphere(legendrian_clifford_torus(), torus_V), torus_B}, Box{{-2.5, -2.5}, {2.5, 2.5}}},
      {great_legendrian_circle(), {curve_section(great_legendrian_circle()), curve_B}, Box{{-3.0}, {3.0}}},
      {legendrian_torus_curve(kPi / 4 + 0.1),
       {curve_section(legendrian_torus_curve(kPi / 4 + 0.1)), curve_B},
       Box{{-3.0}, {3.0}}},
  };
  std::mt19937_64 rng(17);
  for (const auto& cs : cases) {
    for (int s = 0; s < 4; ++s) {
      const Point x = random_point(cs.box, rng);
      const double r = kRadii[s];
      const auto L = lift(cs.phi, x);
      const auto c = cone_laplacian_and_jacobi_closed(cs.phi, cs.W, r, x, kJet);
      const auto g = cone_laplacian_and_jacobi_generic(L, cs.W, r, kJet);
      const auto omitted = omitted_laplacian_terms(cs.phi, cs.W, r, x);
      EXPECT_GT(cone_diff(c.laplacian, g.laplacian), 1e-3) << cs.phi.label;
      EXPECT_LT(cone_diff(c.laplacian + omitted, g.laplacian), 1e-7) << cs.phi.label;
      EXPECT_LT(cone_diff(c.jacobi + omitted, g.jacobi), 1e-7) << cs.phi.label;
      EXPECT_LT((c.tangential - g.tangential).norm(), 1e-12);
    }
  }
}

TEST(ConeComplexStructure, AlgebraicIdentities) {
  std::mt19937_64 rng(23);
  std::normal_distribution<> nd;
  for (int m : {1, 2}) {
    const auto S = build_sasaki_sphere(m);
    const int N = S.ambient;
    for (int s = 0; s < 20; ++s) {
      Eigen::VectorXd p(N);
      for (int a = 0; a < N; ++a) p[a] = nd(rng);
      p.normalize();
      const double r = kRadii[s % 4];
      const Eigen::MatrixXd E = S.tangent_basis(p);
      auto random_vec = [&] {
        Eigen::VectorXd c(E.cols());
        for (int i = 0; i < c.size(); ++i) c[i] = nd(rng);
        return ConeVector{nd(rng), E * c};
      };
      const ConeVector u = random_vec(), v = random_vec();
      const ConeVector Iu = cone_complex_structure(S, p, r, u);
      const ConeVector IIu = cone_complex_structure(S, p, r, Iu);
      EXPECT_LT(cone_diff(IIu, u * -1.0), 1e-9);
      EXPECT_NEAR(cone_inner(r, Iu, cone_complex_structure(S, p, r, v)), cone_inner(r, u, v), 1e-9);
      const ConeVector psi{r, Eigen::VectorXd::Zero(N)};
      const ConeVector xi{0.0, S.xi_at(p)};
      EXPECT_LT(cone_diff(cone_complex_structure(S, p, r, psi), xi * -1.0), 1e-12);
      EXPECT_LT(cone_diff(cone_complex_structure(S, p, r, xi), psi), 1e-12);
    }
  }
}

TEST(KaehlerForm, LegendrianCircleLiftIsLagrangian) {
  const auto S = build_sasaki_sphere(1);
  std::mt19937_64 rng(31);
  for (int s = 0; s < 10; ++s) {
    const Point x = random_point(Box{{-3.0}, {3.0}}, rng);
    const LocalImmersion L(great_legendrian_circle(), x, kJet, 2);
    const double r = std::uniform_real_distribution<>(0.5, 5.0)(rng);
    EXPECT_LT(lagrangian_residual(S, L.phi_value(), r, lifted_tangent_basis(L, r), kJet), 1e-10);
  }
}

TEST(KaehlerForm, NonLegendrianCircleResidualScalesLikeRSquared) {
  const auto S = build_sasaki_sphere(1);
  const LocalImmersion L(small_circle(), pt({0.9}), kJet, 2);
  for (double r : kRadii)
    EXPECT_NEAR(lagrangian_residual(S, L.phi_value(), r, lifted_tangent_basis(L, r), kJet), r * r / std::sqrt(2.0),
                1e-12);
}

TEST(KaehlerForm, AntisymmetricAndClosed) {
  const auto S = build_sasaki_sphere(1);
  const Eigen::Vector4d p = Eigen::Vector4d(0.3, -0.5, 0.7, 0.2).normalized();
  const ConeVector psi{2.0, Eigen::VectorXd::Zero(4)};
  EXPECT_EQ(kaehler_form(S, p, 2.0, psi, psi, kJet), 0.0);
  const Eigen::MatrixXd E = S.tangent_basis(p);
  const ConeVector u{0.4, E.col(0)}, v{-1.0, E.col(1) + E.col(2)};
  EXPECT_NEAR(kaehler_form(S, p, 2.0, u, v, kJet), -kaehler_form(S, p, 2.0, v, u, kJet), 1e-14);
  for (double r : kRadii) {
    EXPECT_LT(kaehler_closure_residual(S, r * p, kJet), 1e-8);
    EXPECT_LT(kaehler_closure_residual(build_sasaki_sphere(2), r * Eigen::VectorXd::Unit(6, 3), kJet), 1e-8);
  }
}

TEST(KaehlerForm, WrongBasisSize) {
  const auto S = build_sasaki_sphere(2);
  const LocalImmersion L(great_legendrian_circle(), pt({0.1}), kJet, 2);
  EXPECT_THROW(lagrangian_residual(build_sasaki_sphere(1), L.phi_value(), 1.0, {}, kJet), DimensionMismatch);
  (void)S;
}

TEST(KaehlerForm, LegendrianIffLagrangianOverCatalog) {
  std::mt19937_64 rng(41);
  for (const auto& e : catalog()) {
    if (e.sasaki_m < 1) continue;
    const auto S = build_sasaki_sphere(e.sasaki_m);
    for (int s = 0; s < 6; ++s) {
      const Point x = random_point(e.sample_box, rng);
      const LocalImmersion L(e.immersion, x, kJet, 2);
      const double r = kRadii[s % 4];
      const bool legendrian = legendrian_residual(L, S) < 1e-8;
      const bool lagrangian = lagrangian_residual(S, L.phi_value(), r, lifted_tangent_basis(L, r), kJet) < 1e-8;
      EXPECT_EQ(legendrian, lagrangian) << e.name;
      EXPECT_EQ(legendrian, e.expected.legendrian) << e.name;
    }
  }
}
