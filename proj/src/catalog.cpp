#include "conelift/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "conelift/charts.hpp"
#include "conelift/errors.hpp"
#include "conelift/variational.hpp"

#ifndef CONELIFT_DATA_DIR
#define CONELIFT_DATA_DIR "data"
#endif

namespace conelift {

namespace {

constexpr double kPi = 3.14159265358979323846;

Box interval(double lo, double hi) { return Box{{lo}, {hi}}; }

ChartManifold line_chart(const std::string& name, double lo, double hi, double speed_sq) {
  return ChartManifold(name, 1, interval(lo, hi), make_map(1, 1, [speed_sq](auto x) {
                         using T = std::decay_t<decltype(x[0])>;
                         return std::vector<T>{T(speed_sq)};
                       }));
}

// g_ij = sum_a d_i f^a d_j f^a computed from Taylor models of f.
SmoothMap induced_metric(const SmoothMap& f) {
  const int m = f.in_dim();
  const int n = f.out_dim();
  const auto cfg = DifferentiationConfig::jet(2);
  auto at = [f, m, n, cfg](std::span<const double> x0, int order) {
    const auto model = taylor_model(f, x0, order + 1, cfg);
    std::vector<Jet> g(m * m, Jet(0.0));
    for (int a = 0; a < n; ++a) {
      std::vector<Jet> d;
      for (int i = 0; i < m; ++i) d.push_back(model[a].derivative(i));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g[i * m + j] += d[i] * d[j];
    }
    return g;
  };
  auto fd = [at](std::span<const double> x) {
    auto g = at(x, 0);
    std::vector<double> out;
    for (const Jet& j : g) out.push_back(j.value());
    return out;
  };
  auto fj = [at, m](std::span<const Jet> x) {
    int order = 0;
    for (const Jet& j : x)
      if (!j.is_constant()) order = std::max(order, j.order());
    const auto x0 = values_of(x);
    auto g = at(x0, order);
    if (order == 0) {
      std::vector<Jet> out;
      for (const Jet& j : g) out.emplace_back(j.value());
      return out;
    }
    std::vector<Jet> inc;
    for (const Jet& j : x) inc.push_back(j.increment());
    const Composer composer(std::move(inc), order);
    std::vector<Jet> out;
    for (const Jet& j : g) out.push_back(composer.compose(j));
    (void)m;
    return out;
  };
  return SmoothMap(m, m * m, fd, fj);
}

CatalogEntry make_entry(std::string name, Immersion imm, int sasaki_m, ExpectedFlags flags, std::string provenance,
                        Box box) {
  CatalogEntry e;
  e.name = std::move(name);
  e.immersion = std::move(imm);
  e.sasaki_m = sasaki_m;
  e.expected = flags;
  e.provenance = std::move(provenance);
  e.sample_box = std::move(box);
  return e;
}

CatalogEntry fixture_entry() {
  const std::string path = fixture_path();
  if (!std::filesystem::exists(path)) throw ConfigError("fixture file not found: " + path);
  const CurveFixture fx = read_fixture(path);
  const double L = fx.curve.period;
  return make_entry("legendrian-flow-fixture", sphere_curve(fourier_interpolant(fx.curve), L, "legendrian flow fixture"),
                    fx.m, {true, false, true},
                    "solver-derived: " + fx.provenance + " (config " + fx.config_hash + ")", interval(0.0, L));
}

}  // namespace

Immersion sphere_curve(SmoothMap map, double period, const std::string& label) {
  if (map.in_dim() != 1) throw DimensionMismatch("sphere_curve needs a one-parameter map");
  ChartManifold source("R", 1, interval(-2.0 * period, 2.0 * period), induced_metric(map));
  const int n = map.out_dim();
  return Immersion{std::move(source), TargetGeometry::sphere(n - 1), std::move(map), label};
}

Immersion great_legendrian_circle() {
  auto map = make_map(1, 4, [](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{cos(x[0]), T(0.0), sin(x[0]), T(0.0)};
  });
  return Immersion{line_chart("R", -10.0, 10.0, 1.0), TargetGeometry::sphere(3), std::move(map),
                   "great Legendrian circle"};
}

Immersion latitude_circle(double rho) {
  const double s = std::sin(rho), c = std::cos(rho);
  auto map = make_map(1, 3, [s, c](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{s * cos(x[0]), s * sin(x[0]), T(c)};
  });
  return Immersion{line_chart("R", -10.0, 10.0, s * s), TargetGeometry::sphere(2), std::move(map),
                   "latitude circle"};
}

Immersion biharmonic_small_circle() {
  const double r = std::sqrt(2.0);
  auto map = make_map(1, 4, [r](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{cos(r * x[0]) / r, sin(r * x[0]) / r, T(0.5), T(0.5)};
  });
  return Immersion{line_chart("R", -10.0, 10.0, 1.0), TargetGeometry::sphere(3), std::move(map),
                   "biharmonic small circle"};
}

Immersion legendrian_clifford_torus() {
  const double k = 1.0 / std::sqrt(3.0);
  auto map = make_map(2, 6, [k](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    const T w = x[0] + x[1];
    return std::vector<T>{k * cos(x[0]), k * sin(x[0]), k * cos(x[1]), k * sin(x[1]), k * cos(w), -k * sin(w)};
  });
  auto metric = make_map(2, 4, [](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{T(2.0 / 3.0), T(1.0 / 3.0), T(1.0 / 3.0), T(2.0 / 3.0)};
  });
  ChartManifold source("T^2", 2, Box{{-kPi, -kPi}, {kPi, kPi}}, std::move(metric));
  return Immersion{std::move(source), TargetGeometry::sphere(5), std::move(map), "Legendrian Clifford torus"};
}

Immersion totally_geodesic_real_sphere() {
  auto map = make_map(2, 6, [](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    const T s = sin(x[0]);
    return std::vector<T>{s * cos(x[1]), T(0.0), s * sin(x[1]), T(0.0), cos(x[0]), T(0.0)};
  });
  auto metric = make_map(2, 4, [](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    const T s = sin(x[0]);
    return std::vector<T>{T(1.0), T(0.0), T(0.0), s * s};
  });
  ChartManifold source("S^2", 2, Box{{0.0, -kPi}, {kPi, kPi}}, std::move(metric));
  return Immersion{std::move(source), TargetGeometry::sphere(5), std::move(map), "totally geodesic real sphere"};
}

Immersion legendrian_torus_curve(double a) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double s = sa * sa, c = ca * ca;
  auto map = make_map(1, 4, [ca, sa, s, c](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{ca * cos(s * x[0]), ca * sin(s * x[0]), sa * cos(c * x[0]), -sa * sin(c * x[0])};
  });
  return Immersion{line_chart("R", -10.0, 10.0, s * c), TargetGeometry::sphere(3), std::move(map),
                   "Legendrian torus curve"};
}

std::string fixture_path() {
  if (const char* env = std::getenv("CONELIFT_FIXTURE"); env && *env) return env;
  return std::string(CONELIFT_DATA_DIR) + "/legendrian_flow_fixture.txt";
}

std::vector<std::string> catalog_names() {
  return {"great-legendrian-circle", "latitude-circle-pi3",       "latitude-circle-pi4",
          "equator",                 "biharmonic-small-circle",   "legendrian-clifford-torus",
          "totally-geodesic-real-sphere", "perturbed-circle",     "legendrian-flow-fixture"};
}

CatalogEntry catalog_entry(const std::string& name) {
  const Box curve_box = interval(-3.0, 3.0);
  if (name == "great-legendrian-circle")
    return make_entry(name, great_legendrian_circle(), 1, {true, true, false}, "closed form, geodesic", curve_box);
  if (name == "latitude-circle-pi3")
    return make_entry(name, latitude_circle(kPi / 3), 0, {false, false, false},
                      "closed form, non-minimal control on S^2", curve_box);
  if (name == "latitude-circle-pi4")
    return make_entry(name, latitude_circle(kPi / 4), 0, {false, false, true},
                      "closed form, radius 1/sqrt2 circle on S^2", curve_box);
  if (name == "equator")
    return make_entry(name, latitude_circle(kPi / 2), 0, {false, true, false}, "closed form, geodesic of S^2",
                      curve_box);
  if (name == "biharmonic-small-circle")
    return make_entry(name, biharmonic_small_circle(), 1, {false, false, true},
                      "closed form, non-Legendrian; exercises bitension only", curve_box);
  if (name == "legendrian-clifford-torus")
    return make_entry(name, legendrian_clifford_torus(), 2, {true, true, false}, "closed form, minimal Legendrian",
                      Box{{-2.5, -2.5}, {2.5, 2.5}});
  if (name == "totally-geodesic-real-sphere")
    return make_entry(name, totally_geodesic_real_sphere(), 2, {true, true, false},
                      "closed form, totally geodesic Legendrian", Box{{0.3, -2.5}, {2.8, 2.5}});
  if (name == "perturbed-circle")
    return make_entry(name, legendrian_torus_curve(kPi / 4 + 0.1), 1, {true, false, false},
                      "closed form, Legendrian but neither harmonic nor biharmonic", curve_box);
  if (name == "legendrian-flow-fixture") return fixture_entry();
  throw ConfigError("unknown catalog entry: " + name);
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& n : catalog_names()) {
    if (n == "legendrian-flow-fixture" && !std::filesystem::exists(fixture_path())) continue;
    out.push_back(catalog_entry(n));
  }
  return out;
}

}  // namespace conelift
