#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelift/catalog.hpp"
#include "conelift/errors.hpp"
#include "conelift/immersion.hpp"
#include "conelift/variational.hpp"
#include "conelift/verifier.hpp"

using namespace conelift;

namespace {

constexpr double pi = std::numbers::pi;

DiscreteCurve great_circle(int K, int n = 4, bool legendrian = true) {
  DiscreteCurve c;
  c.period = 2.0 * pi;
  c.points = Eigen::MatrixXd::Zero(K, n);
  for (int k = 0; k < K; ++k) {
    const double t = c.t(k);
    c.points(k, 0) = std::cos(t);
    c.points(k, legendrian ? 2 : 1) = std::sin(t);
  }
  return c;
}

DiscreteCurve small_circle(int K) {
  return DiscreteCurve::sample(biharmonic_small_circle().map, K, pi * std::sqrt(2.0));
}

Eigen::MatrixXd tangent_field(const DiscreteCurve& c, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd V(c.K(), c.ambient());
  for (int k = 0; k < c.K(); ++k) {
    for (int i = 0; i < c.ambient(); ++i) V(k, i) = N(rng);
    const Eigen::RowVectorXd p = c.points.row(k);
    V.row(k) -= V.row(k).dot(p) * p;
  }
  return V;
}

// E and E2 of a smooth closed curve by the periodic trapezoid rule, with
// the arc-length tension from the immersion calculus.
std::pair<double, double> continuum_functionals(const SmoothMap& map, double period, int n) {
  const Immersion phi = sphere_curve(map, period, "curve");
  double E = 0.0, E2 = 0.0;
  const double dt = period / n;
  for (int k = 0; k < n; ++k) {
    LocalImmersion L(phi, Point::Constant(1, k * dt), DifferentiationConfig::jet(), 2);
    const double speed2 = L.metric()(0, 0);
    E += 0.5 * speed2 * dt;
    E2 += 0.5 * L.tension().squaredNorm() * std::sqrt(speed2) * dt;
  }
  return {E, E2};
}

// Great circle in span(e0, e2) plus odd Fourier modes 3 and 5, so that
// p(t + pi) = -p(t).
DiscreteCurve antipodal_perturbation(int K, double amplitude, std::uint64_t seed) {
  DiscreteCurve c = great_circle(K);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd A(4, 4);
  for (int i = 0; i < A.size(); ++i) A.data()[i] = N(rng);
  for (int k = 0; k < K; ++k) {
    const double t = c.t(k);
    c.points.row(k) += amplitude * (std::cos(3 * t) * A.row(0) + std::sin(3 * t) * A.row(1) +
                                    std::cos(5 * t) * A.row(2) + std::sin(5 * t) * A.row(3));
  }
  c.normalize();
  return c;
}

FlowConfig energy_flow() {
  FlowConfig cfg;
  cfg.functional = Functional::Energy;
  cfg.step = 0.05;
  cfg.tolerance = 1e-6;
  cfg.max_iterations = 5000;
  return cfg;
}

}  // namespace

TEST(Functionals, GreatCircle) {
  const auto f = discrete_functionals(great_circle(64));
  const double th = 2.0 * pi / 64;
  EXPECT_NEAR(f.energy, pi * std::pow(std::sin(th) / th, 2), 1e-12);
  EXPECT_LT(std::abs(f.energy - pi) / pi, th * th / 3.0);
  EXPECT_LT(f.bienergy, 1e-6);
  EXPECT_LT(f.penalty, 1e-8);
  EXPECT_LT(f.spacing, 1e-20);
}

TEST(Functionals, PenaltyDependsOnOrientation) {
  // span(e0, e1) is a complex line, so the circle there is a Hopf fibre
  const auto f = discrete_functionals(great_circle(64, 4, false));
  EXPECT_GT(f.penalty, 1.0);
}

TEST(Functionals, DegenerateCurveThrows) {
  DiscreteCurve c = great_circle(16);
  c.points.row(1) = c.points.row(0);
  EXPECT_THROW(discrete_functionals(c), DegenerateCurve);
  EXPECT_THROW(c.validate(), DegenerateCurve);
}

TEST(Functionals, ValidateRejectsBadCurves) {
  DiscreteCurve c = great_circle(15);
  EXPECT_THROW(c.validate(), ConfigError);
  c = great_circle(16);
  c.points(0, 0) = 1.1;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Functionals, UniformCircleEnergy) {
  const auto c = perturbed_legendrian_circle(2, 128, 1.0 / std::sqrt(2.0), 0.0, 1);
  EXPECT_NEAR(discrete_functionals(c).energy, uniform_circle_energy(128, 1.0 / std::sqrt(2.0)), 1e-12);
}

TEST(Gradients, MatchDirectionalDerivatives) {
  const auto c = perturbed_legendrian_circle(2, 32, 0.8, 0.1, 3);
  const auto g = discrete_gradients(c);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd V(c.K(), c.ambient());
    for (int k = 0; k < V.size(); ++k) V.data()[k] = N(rng);
    DiscreteCurve p = c, m = c;
    p.points += h * V;
    m.points -= h * V;
    const auto fp = discrete_functionals(p), fm = discrete_functionals(m);
    auto check = [&](double num, const Eigen::MatrixXd& G) {
      const double an = (G.array() * V.array()).sum();
      EXPECT_LE(std::abs(num - an), 1e-6 * std::max({1.0, std::abs(num), std::abs(an)}));
    };
    check((fp.energy - fm.energy) / (2 * h), g.energy);
    check((fp.bienergy - fm.bienergy) / (2 * h), g.bienergy);
    check((fp.penalty - fm.penalty) / (2 * h), g.penalty);
    check((fp.spacing - fm.spacing) / (2 * h), g.spacing);
  }
}

TEST(Gradients, SpacingVanishesOnUniformCurves) {
  const auto g = discrete_gradients(perturbed_legendrian_circle(2, 64, 0.6, 0.0, 1));
  EXPECT_LT(g.values.spacing, 1e-25);
  EXPECT_LT(g.spacing.norm(), 1e-10);
}

TEST(MeshConvergence, SmallCircleSecondOrder) {
  const double L = pi * std::sqrt(2.0);
  const double E = 0.5 * L, E2 = 0.5 * L;  // unit speed, |tau| = 1
  std::vector<double> eE, eE2;
  for (int K : {32, 64, 128}) {
    const auto f = discrete_functionals(small_circle(K));
    eE.push_back(std::abs(f.energy - E));
    eE2.push_back(std::abs(f.bienergy - E2));
  }
  for (int i = 0; i < 2; ++i) {
    EXPECT_GE(eE[i] / eE[i + 1], 3.5);
    EXPECT_LE(eE[i] / eE[i + 1], 4.5);
    EXPECT_GE(eE2[i] / eE2[i + 1], 3.5);
    EXPECT_LE(eE2[i] / eE2[i + 1], 4.5);
  }
  EXPECT_LT(eE2.back() / E2, 1e-2);
}

TEST(MeshConvergence, NonUniformCurveAgainstImmersionCalculus) {
  // a smooth curve with non-constant speed: interpolant of a coarse perturbed circle
  const auto coarse = perturbed_legendrian_circle(1, 16, 1.0, 0.1, 5);
  const SmoothMap curve = fourier_interpolant(coarse);
  const auto [E, E2] = continuum_functionals(curve, coarse.period, 256);
  std::vector<double> f1, f2;
  for (int K : {64, 128, 256, 512}) {
    const auto f = discrete_functionals(DiscreteCurve::sample(curve, K, coarse.period));
    f1.push_back(f.energy);
    f2.push_back(f.bienergy);
  }
  for (int i = 0; i < 2; ++i) {
    const double rE = (f1[i] - f1[i + 1]) / (f1[i + 1] - f1[i + 2]);
    const double rE2 = (f2[i] - f2[i + 1]) / (f2[i + 1] - f2[i + 2]);
    EXPECT_GE(rE, 3.5);
    EXPECT_LE(rE, 4.5);
    EXPECT_GE(rE2, 3.5);
    EXPECT_LE(rE2, 4.5);
  }
  EXPECT_LT(std::abs(f1.back() - E) / E, 1e-3);
  EXPECT_LT(std::abs(f2.back() - E2) / E2, 1e-3);
}

TEST(Variation, FirstVariationVanishesAtGeodesic) {
  const auto c = great_circle(64);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    const auto r = first_variation_check(c, tangent_field(c, rng));
    EXPECT_LT(std::abs(r.numeric), 1e-6);
    EXPECT_LT(std::abs(r.formula), 1e-6);
  }
}

TEST(Variation, FirstVariationLatitudeCircle) {
  const auto c = DiscreteCurve::sample(latitude_circle(pi / 3).map, 64, 2.0 * pi);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const Eigen::MatrixXd V = tangent_field(c, rng);
    const auto r = first_variation_check(c, V);
    const double gradE = discrete_gradients(c).energy.norm();
    EXPECT_LT(r.residual, 1e-4 * (1.0 + gradE));
  }
}

TEST(Variation, SecondVariationAtGeodesic) {
  const auto c = great_circle(64);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(64, 4);
  for (int k = 0; k < 64; ++k) {
    V(k, 1) = std::sin(2.0 * c.t(k));
    V(k, 3) = 0.5 * std::cos(3.0 * c.t(k));
  }
  const auto r = second_variation_check(c, V);
  EXPECT_GT(r.numeric, 0.0);
  EXPECT_LT(r.residual, 1e-3 * std::abs(r.formula));
}

TEST(FlowConfigTest, Validation) {
  FlowConfig cfg;
  cfg.step = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.tolerance = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.penalty_weight = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_NO_THROW(FlowConfig{}.validate());
}

TEST(FlowConfigTest, HashFollowsContent) {
  FlowConfig a, b;
  EXPECT_EQ(a.hash(), b.hash());
  b.penalty_weight = 1.0;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(FlowJobTest, ParsesAndRejects) {
  const auto job = FlowJob::from_json(R"({"functional": "energy", "K": 32, "m": 1, "seed": 4, "newton_steps": 1})");
  EXPECT_EQ(job.flow.functional, Functional::Energy);
  EXPECT_EQ(job.K, 32);
  EXPECT_EQ(job.flow.seed, 4u);
  EXPECT_EQ(job.initial().K(), 32);
  EXPECT_THROW(FlowJob::from_json(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(FlowJob::from_json(R"({"K": 15})"), ConfigError);
  EXPECT_THROW(FlowJob::from_json(R"({"step": "big"})"), ConfigError);
  EXPECT_THROW(FlowJob::from_json("not json"), ConfigError);
  EXPECT_EQ(job.hash_hex().size(), 16u);
  EXPECT_NE(job.hash_hex(), FlowJob::from_json(R"({"K": 34})").hash_hex());
}

TEST(Flow, EnergyFlowShrinksGenericPerturbation) {
  // the great circle is unstable for E: tilting its plane lowers the length
  const auto res = flow(perturbed_legendrian_circle(1, 64, 1.0, 0.05, 7), energy_flow());
  EXPECT_LT(discrete_functionals(res.curve).energy, 1e-10);
  for (std::size_t i = 1; i < res.log.size(); ++i) EXPECT_LE(res.log[i].objective, res.log[i - 1].objective);
}

TEST(Flow, EnergyFlowReachesGeodesic) {
  const auto c0 = antipodal_perturbation(64, 0.05, 7);
  const auto res = flow(c0, energy_flow());
  EXPECT_TRUE(res.converged);
  const double th = 2.0 * pi / 64;
  EXPECT_NEAR(discrete_functionals(res.curve).energy, pi * std::pow(std::sin(th) / th, 2), 1e-9);
  // the centred-difference E couples p_k only to p_{k +- 2}: each parity class
  // is a uniform geodesic polygon, the two need not coincide
  for (int parity : {0, 1}) {
    DiscreteCurve sub;
    sub.period = res.curve.period;
    sub.points.resize(32, 4);
    for (int k = 0; k < 32; ++k) sub.points.row(k) = res.curve.points.row(2 * k + parity);
    EXPECT_LT(discrete_functionals(sub).bienergy, 1e-8);
  }
  const Immersion phi = sphere_curve(fourier_interpolant(res.curve), res.curve.period, "flow result");
  for (int k = 0; k < 8; ++k) {
    LocalImmersion L(phi, Point::Constant(1, k * 0.7), DifferentiationConfig::jet(), 2);
    EXPECT_LT(L.tension().norm(), 1e-2);
  }
}

TEST(Flow, DescentIsMonotone) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto c0 = perturbed_legendrian_circle(2, 32, 0.8, 0.1, seed);
    FlowConfig cfg;
    cfg.functional = Functional::Bienergy;
    cfg.fix_energy = true;
    cfg.penalty_weight = 10.0;
    cfg.spacing_weight = 0.1;
    cfg.sobolev_alpha = 10.0;
    cfg.sobolev_power = 2;
    cfg.max_iterations = 200;
    cfg.tolerance = 1e-9;
    const auto res = flow(c0, cfg);
    for (std::size_t i = 1; i < res.log.size(); ++i) EXPECT_LE(res.log[i].objective, res.log[i - 1].objective);
    EXPECT_NEAR(res.log.back().energy, res.log.front().energy, 1e-9);
  }
}

TEST(Flow, CriticalInputIsUnchanged) {
  const auto c0 = great_circle(32);
  const auto res = flow(c0, energy_flow());
  EXPECT_EQ(res.accepted, 0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.curve.points, c0.points);
}

TEST(Flow, RerunIsBitForBit) {
  const auto c0 = perturbed_legendrian_circle(2, 32, 0.8, 0.1, 9);
  FlowConfig cfg;
  cfg.fix_energy = true;
  cfg.penalty_weight = 10.0;
  cfg.max_iterations = 50;
  cfg.newton_steps = 1;
  const auto a = flow(c0, cfg), b = flow(c0, cfg);
  EXPECT_EQ(a.curve.points, b.curve.points);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) EXPECT_EQ(a.log[i].objective, b.log[i].objective);
}

TEST(Fixture, RoundTrip) {
  const auto c = perturbed_legendrian_circle(2, 32, 0.8, 0.1, 9);
  const std::string path = ::testing::TempDir() + "/fixture_roundtrip.txt";
  write_fixture(path, {c, 2, "abc", "round trip"});
  const auto f = read_fixture(path);
  EXPECT_EQ(f.curve.points, c.points);
  EXPECT_EQ(f.curve.period, c.period);
  EXPECT_EQ(f.m, 2);
  EXPECT_EQ(f.config_hash, "abc");
  EXPECT_EQ(f.provenance, "round trip");
}

TEST(Fixture, ShippedFixtureIsProperBiharmonicLegendrian) {
  const auto e = catalog_entry("legendrian-flow-fixture");
  VerifierConfig cfg;
  const auto c = classify(e, cfg);
  EXPECT_EQ(c.verdict, Classification::ProperBiharmonic);
  EXPECT_GT(c.max_tau, 0.1);
  const auto f = read_fixture(fixture_path());
  const auto fn = discrete_functionals(f.curve);
  EXPECT_LT(fn.penalty, 1e-6);
  const auto job = FlowJob::load(std::string(CONELIFT_SOURCE_DIR) + "/data/flow_fixture.json");
  EXPECT_EQ(f.config_hash, job.hash_hex());
}

TEST(Fixture, RegeneratedFixtureMatchesShipped) {
  const auto job = FlowJob::load(std::string(CONELIFT_SOURCE_DIR) + "/data/flow_fixture.json");
  const auto res = flow(job.initial(), job.effective_config());
  const auto shipped = read_fixture(fixture_path());
  EXPECT_EQ(res.curve.points, shipped.curve.points);
  ASSERT_FALSE(res.newton.residuals.empty());
  EXPECT_LT(res.newton.residuals.back(), 1e-8);
}
