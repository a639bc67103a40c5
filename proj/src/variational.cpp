#include "conelift/variational.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "conelift/errors.hpp"

namespace conelift {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinSegment = 1e-10;

int wrap(int k, int K) { return ((k % K) + K) % K; }

// Per-stencil contributions (E, E2, pen, spacing) from p_{k-1}, p_k, p_{k+1}.
template <class T>
std::array<T, 4> stencil_terms(const T* a, const T* b, const T* c, int n, double dt) {
  std::vector<T> D(n), D2(n);
  T s2(0.0), dd(0.0);
  for (int i = 0; i < n; ++i) {
    D[i] = (c[i] - a[i]) / (2.0 * dt);
    D2[i] = (c[i] - 2.0 * b[i] + a[i]) / (dt * dt);
    s2 += D[i] * D[i];
    dd += D2[i] * D[i];
  }
  if (value_of(s2) < 1e-24) throw DegenerateCurve("vanishing discrete speed");
  const T sigma = sqrt(s2);
  std::vector<T> w(n);
  T wb(0.0);
  for (int i = 0; i < n; ++i) {
    w[i] = D2[i] - (dd / s2) * D[i];
    wb += w[i] * b[i];
  }
  T t2(0.0);
  for (int i = 0; i < n; ++i) {
    const T ti = (w[i] - wb * b[i]) / s2;
    t2 += ti * ti;
  }
  T q(0.0);
  if (n % 2 == 0) {
    T dj(0.0);
    for (int i = 0; i < n; i += 2) dj += D[i + 1] * b[i] - D[i] * b[i + 1];
    q = dj * dj * dt;
  }
  T l0(0.0), l1(0.0);
  for (int i = 0; i < n; ++i) {
    l0 += (b[i] - a[i]) * (b[i] - a[i]);
    l1 += (c[i] - b[i]) * (c[i] - b[i]);
  }
  const T dl = sqrt(l1) - sqrt(l0);
  return {0.5 * s2 * dt, 0.5 * t2 * sigma * dt, q, dl * dl / (dt * dt * dt)};
}

double min_segment(const DiscreteCurve& c) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < c.K(); ++k) m = std::min(m, (c.points.row(wrap(k + 1, c.K())) - c.points.row(k)).norm());
  return m;
}

void tangent_project_rows(const Eigen::MatrixXd& P, Eigen::MatrixXd& G) {
  for (int k = 0; k < G.rows(); ++k) {
    const Eigen::RowVectorXd p = P.row(k);
    G.row(k) -= G.row(k).dot(p) * p;
  }
}

// dE/dp_k = (D p_{k-1} - D p_{k+1}) / 2
Eigen::MatrixXd energy_gradient(const DiscreteCurve& c) {
  const int K = c.K();
  const double dt = c.dt();
  Eigen::MatrixXd D(K, c.ambient());
  for (int k = 0; k < K; ++k) D.row(k) = (c.points.row(wrap(k + 1, K)) - c.points.row(wrap(k - 1, K))) / (2.0 * dt);
  Eigen::MatrixXd G(K, c.ambient());
  for (int k = 0; k < K; ++k) G.row(k) = 0.5 * (D.row(wrap(k - 1, K)) - D.row(wrap(k + 1, K)));
  return G;
}

double energy_only(const Eigen::MatrixXd& P, double dt) {
  const int K = static_cast<int>(P.rows());
  double e = 0.0;
  for (int k = 0; k < K; ++k) e += (P.row(wrap(k + 1, K)) - P.row(wrap(k - 1, K))).squaredNorm();
  return 0.5 * e / (4.0 * dt * dt) * dt;
}

void normalize_rows(Eigen::MatrixXd& P) {
  for (int k = 0; k < P.rows(); ++k) P.row(k).normalize();
}

// Newton steps along the energy gradient back onto {E = E0}.
void restore_energy(DiscreteCurve& c, double E0) {
  for (int it = 0; it < 12; ++it) {
    const double diff = energy_only(c.points, c.dt()) - E0;
    if (std::abs(diff) <= 1e-14 * E0) return;
    Eigen::MatrixXd G = energy_gradient(c);
    tangent_project_rows(c.points, G);
    const double gg = G.squaredNorm();
    if (gg == 0.0) return;
    c.points -= (diff / gg) * G;
    normalize_rows(c.points);
  }
}

}  // namespace

void DiscreteCurve::validate() const {
  if (K() < 16 || K() % 2 != 0) throw ConfigError("curve needs an even number K >= 16 of samples");
  if (ambient() < 2) throw DimensionMismatch("curve ambient dimension must be >= 2");
  if (!(period > 0.0)) throw ConfigError("curve period must be positive");
  for (int k = 0; k < K(); ++k)
    if (std::abs(points.row(k).norm() - 1.0) > 1e-12) throw DomainError("curve sample off the unit sphere");
  if (min_segment(*this) < kMinSegment) throw DegenerateCurve("segment shorter than 1e-10");
}

void DiscreteCurve::normalize() { normalize_rows(points); }

DiscreteCurve DiscreteCurve::sample(const SmoothMap& curve, int K, double period) {
  if (curve.in_dim() != 1) throw DimensionMismatch("curve must have one parameter");
  DiscreteCurve c;
  c.period = period;
  c.points.resize(K, curve.out_dim());
  for (int k = 0; k < K; ++k) {
    const double t = k * period / K;
    const auto v = curve(std::span<const double>(&t, 1));
    for (int i = 0; i < curve.out_dim(); ++i) c.points(k, i) = v[i];
  }
  c.normalize();
  return c;
}

Functionals discrete_functionals(const DiscreteCurve& c) {
  Functionals f;
  f.min_segment = min_segment(c);
  if (f.min_segment < kMinSegment) throw DegenerateCurve("segment shorter than 1e-10");
  const int K = c.K(), n = c.ambient();
  const double dt = c.dt();
  for (int k = 0; k < K; ++k) {
    const Eigen::RowVectorXd a = c.points.row(wrap(k - 1, K)), b = c.points.row(k), d = c.points.row(wrap(k + 1, K));
    const auto t = stencil_terms(a.data(), b.data(), d.data(), n, dt);
    f.energy += t[0];
    f.bienergy += t[1];
    f.penalty += t[2];
    f.spacing += t[3];
    f.length += (d - a).norm() / 2.0;
  }
  return f;
}

FunctionalGradients discrete_gradients(const DiscreteCurve& c) {
  FunctionalGradients out;
  out.values.min_segment = min_segment(c);
  if (out.values.min_segment < kMinSegment) throw DegenerateCurve("segment shorter than 1e-10");
  const int K = c.K(), n = c.ambient();
  const double dt = c.dt();
  out.energy = Eigen::MatrixXd::Zero(K, n);
  out.bienergy = Eigen::MatrixXd::Zero(K, n);
  out.penalty = Eigen::MatrixXd::Zero(K, n);
  out.spacing = Eigen::MatrixXd::Zero(K, n);
  const auto layout = JetLayout::get(3 * n, 1);
  std::vector<double> x0(3 * n);
  for (int k = 0; k < K; ++k) {
    const int idx[3] = {wrap(k - 1, K), k, wrap(k + 1, K)};
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < n; ++i) x0[s * n + i] = c.points(idx[s], i);
    const auto v = seed_variables(layout, x0);
    const auto t = stencil_terms(v.data(), v.data() + n, v.data() + 2 * n, n, dt);
    out.values.energy += t[0].value();
    out.values.bienergy += t[1].value();
    out.values.penalty += t[2].value();
    out.values.spacing += t[3].value();
    out.values.length += (c.points.row(idx[2]) - c.points.row(idx[0])).norm() / 2.0;
    Eigen::MatrixXd* targets[4] = {&out.energy, &out.bienergy, &out.penalty, &out.spacing};
    for (int f = 0; f < 4; ++f) {
      if (t[f].is_constant()) continue;
      for (int s = 0; s < 3; ++s)
        for (int i = 0; i < n; ++i) (*targets[f])(idx[s], i) += t[f].coeff(1 + s * n + i);
    }
  }
  return out;
}

Eigen::MatrixXd discrete_tension(const DiscreteCurve& c) {
  const int K = c.K(), n = c.ambient();
  const double dt = c.dt();
  Eigen::MatrixXd tau(K, n);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd a = c.points.row(wrap(k - 1, K)).transpose(), b = c.points.row(k).transpose(),
                          d = c.points.row(wrap(k + 1, K)).transpose();
    const Eigen::VectorXd D = (d - a) / (2.0 * dt);
    const Eigen::VectorXd D2 = (d - 2.0 * b + a) / (dt * dt);
    const double s2 = D.squaredNorm();
    if (s2 < 1e-24) throw DegenerateCurve("vanishing discrete speed");
    Eigen::VectorXd w = D2 - (D2.dot(D) / s2) * D;
    w -= w.dot(b) * b;
    tau.row(k) = (w / s2).transpose();
  }
  return tau;
}

void FlowConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("flow step must be positive");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (penalty_weight < 0.0) throw ConfigError("penalty_weight must be >= 0");
  if (spacing_weight < 0.0) throw ConfigError("spacing_weight must be >= 0");
  if (sobolev_alpha < 0.0) throw ConfigError("sobolev_alpha must be >= 0");
  if (sobolev_power < 0 || sobolev_power > 2) throw ConfigError("sobolev_power must be 0, 1 or 2");
  if (energy_level < 0.0) throw ConfigError("energy_level must be >= 0");
  if (newton_steps < 0) throw ConfigError("newton_steps must be >= 0");
}

std::string FlowConfig::to_json() const {
  nlohmann::ordered_json j;
  j["functional"] = functional == Functional::Energy ? "energy" : "bienergy";
  j["step"] = step;
  j["max_iterations"] = max_iterations;
  j["tolerance"] = tolerance;
  j["penalty_weight"] = penalty_weight;
  j["fix_energy"] = fix_energy;
  j["energy_level"] = energy_level;
  j["sobolev_alpha"] = sobolev_alpha;
  j["sobolev_power"] = sobolev_power;
  j["spacing_weight"] = spacing_weight;
  j["newton_steps"] = newton_steps;
  j["seed"] = seed;
  return j.dump();
}

std::uint64_t FlowConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}


double flow_objective(const Functionals& f, const FlowConfig& cfg) {
  const double base = cfg.functional == Functional::Energy ? f.energy : f.bienergy;
  return base + cfg.penalty_weight * f.penalty + cfg.spacing_weight * f.spacing;
}

namespace {

Eigen::MatrixXd objective_gradient(const FunctionalGradients& g, const FlowConfig& cfg) {
  return (cfg.functional == Functional::Energy ? g.energy : g.bienergy) + cfg.penalty_weight * g.penalty +
         cfg.spacing_weight * g.spacing;
}

// Orthonormal basis of the tangent space of the unit sphere at p (columns).
Eigen::MatrixXd sphere_tangent_basis(const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - p * p.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(n - 1);
}

struct LagrangeSystem {
  const DiscreteCurve& base;
  const FlowConfig& cfg;
  double E0;
  std::vector<Eigen::MatrixXd> bases;

  int K() const { return base.K(); }
  int n() const { return base.ambient(); }
  int unknowns() const { return K() * (n() - 1); }

  DiscreteCurve moved(const Eigen::VectorXd& v) const {
    DiscreteCurve c = base;
    for (int k = 0; k < K(); ++k)
      c.points.row(k) += (bases[k] * v.segment(k * (n() - 1), n() - 1)).transpose();
    c.normalize();
    return c;
  }

  // Tangential Lagrange residual in base coordinates plus the energy defect.
  Eigen::VectorXd residual(const DiscreteCurve& c, double mu) const {
    const auto g = discrete_gradients(c);
    const Eigen::MatrixXd G = objective_gradient(g, cfg) - mu * g.energy;
    Eigen::VectorXd r(unknowns() + (cfg.fix_energy ? 1 : 0));
    for (int k = 0; k < K(); ++k) {
      const Eigen::VectorXd p = c.points.row(k).transpose();
      Eigen::VectorXd gk = G.row(k).transpose();
      gk -= gk.dot(p) * p;
      r.segment(k * (n() - 1), n() - 1) = bases[k].transpose() * gk;
    }
    if (cfg.fix_energy) r[unknowns()] = g.values.energy - E0;
    return r;
  }
};

double lagrange_multiplier(const DiscreteCurve& c, const FlowConfig& cfg) {
  if (!cfg.fix_energy) return 0.0;
  const auto g = discrete_gradients(c);
  Eigen::MatrixXd G = objective_gradient(g, cfg), GE = g.energy;
  tangent_project_rows(c.points, G);
  tangent_project_rows(c.points, GE);
  const double den = GE.squaredNorm();
  return den > 0.0 ? (G.array() * GE.array()).sum() / den : 0.0;
}

}  // namespace

NewtonReport newton_refine(DiscreteCurve& c, const FlowConfig& cfg, double E0) {
  NewtonReport rep;
  double mu = lagrange_multiplier(c, cfg);
  const double h = 1e-7;
  for (int step = 0; step <= cfg.newton_steps; ++step) {
    LagrangeSystem sys{c, cfg, E0, {}};
    for (int k = 0; k < c.K(); ++k) sys.bases.push_back(sphere_tangent_basis(c.points.row(k).transpose()));
    const Eigen::VectorXd r0 = sys.residual(c, mu);
    rep.residuals.push_back(r0.norm());
    if (step == cfg.newton_steps) break;
    const int N = sys.unknowns();
    const int rows = static_cast<int>(r0.size());
    Eigen::MatrixXd Jm(rows, N + (cfg.fix_energy ? 1 : 0));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    for (int j = 0; j < N; ++j) {
      v[j] = h;
      const Eigen::VectorXd rp = sys.residual(sys.moved(v), mu);
      v[j] = -h;
      const Eigen::VectorXd rm = sys.residual(sys.moved(v), mu);
      v[j] = 0.0;
      Jm.col(j) = (rp - rm) / (2.0 * h);
    }
    if (cfg.fix_energy) {
      // d r / d mu = -B^T P grad E, and the energy defect does not depend on mu
      Jm.col(N) = sys.residual(c, mu + 1.0) - r0;
      Jm(rows - 1, N) = 0.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Jm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    const Eigen::VectorXd dz = svd.solve(-r0);
    DiscreteCurve next = sys.moved(dz.head(N));
    const double next_mu = cfg.fix_energy ? mu + dz[N] : mu;
    LagrangeSystem check{next, cfg, E0, {}};
    for (int k = 0; k < next.K(); ++k) check.bases.push_back(sphere_tangent_basis(next.points.row(k).transpose()));
    if (!(check.residual(next, next_mu).norm() < r0.norm())) break;
    c = std::move(next);
    mu = next_mu;
    ++rep.accepted;
  }
  rep.multiplier = mu;
  return rep;
}

FlowResult flow(const DiscreteCurve& c0, const FlowConfig& cfg) {
  cfg.validate();
  c0.validate();
  const int K = c0.K();
  const double dt = c0.dt();

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    L(k, k) += 2.0;
    L(k, wrap(k - 1, K)) -= 1.0;
    L(k, wrap(k + 1, K)) -= 1.0;
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(K, K);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(K, K) + cfg.sobolev_alpha * L;
  for (int p = 0; p < cfg.sobolev_power; ++p) M = M * A;
  const Eigen::LDLT<Eigen::MatrixXd> precond(M);

  FlowResult res;
  res.curve = c0;
  const double E0 = cfg.energy_level > 0.0 ? cfg.energy_level : discrete_functionals(c0).energy;
  if (cfg.fix_energy && cfg.energy_level > 0.0) {
    restore_energy(res.curve, E0);
    res.curve.validate();
  }
  double step = cfg.step;

  for (int it = 0;; ++it) {
    const auto grads = discrete_gradients(res.curve);
    const double F = flow_objective(grads.values, cfg);
    Eigen::MatrixXd G = (cfg.functional == Functional::Energy ? grads.energy : grads.bienergy) +
                        cfg.penalty_weight * grads.penalty + cfg.spacing_weight * grads.spacing;
    G /= dt;
    tangent_project_rows(res.curve.points, G);
    Eigen::MatrixXd d = precond.solve(G);
    tangent_project_rows(res.curve.points, d);
    if (cfg.fix_energy) {
      Eigen::MatrixXd GE = grads.energy / dt;
      tangent_project_rows(res.curve.points, GE);
      Eigen::MatrixXd nE = precond.solve(GE);
      tangent_project_rows(res.curve.points, nE);
      const double den = (GE.array() * nE.array()).sum();
      if (den > 0.0) d -= ((G.array() * nE.array()).sum() / den) * nE;
    }
    d = -d;
    const double gnorm = std::sqrt(d.squaredNorm() * dt);
    res.log.push_back({it, F, gnorm, grads.values.min_segment, step, grads.values.energy});
    if (gnorm < cfg.tolerance) {
      res.converged = true;
      break;
    }
    if (it >= cfg.max_iterations) break;

    bool accepted = false;
    double s = step;
    for (int h = 0; h <= 60; ++h, s *= 0.5) {
      DiscreteCurve trial = res.curve;
      trial.points += s * d;
      trial.normalize();
      if (cfg.fix_energy) restore_energy(trial, E0);
      Functionals ft;
      try {
        ft = discrete_functionals(trial);
      } catch (const DegenerateCurve&) {
        continue;
      }
      const double Ft = flow_objective(ft, cfg);
      if (std::isfinite(Ft) && Ft <= F) {
        res.curve = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NoDescentStep("no decrease after 60 step halvings at iteration " + std::to_string(it));
    ++res.accepted;
    step = std::min(2.0 * s, 1e3 * cfg.step);
  }
  if (cfg.newton_steps > 0) res.newton = newton_refine(res.curve, cfg, E0);
  return res;
}

VariationCheck first_variation_check(const DiscreteCurve& c, const Eigen::MatrixXd& V) {
  c.validate();
  const int K = c.K();
  const double dt = c.dt();
  const double h = 1e-4;
  DiscreteCurve plus = c, minus = c;
  plus.points += h * V;
  minus.points -= h * V;
  VariationCheck out;
  out.numeric = (energy_only(plus.points, dt) - energy_only(minus.points, dt)) / (2.0 * h);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    const Eigen::RowVectorXd p = c.points.row(k);
    Eigen::RowVectorXd t =
        (c.points.row(wrap(k + 2, K)) - 2.0 * p + c.points.row(wrap(k - 2, K))) / (4.0 * dt * dt);
    t -= t.dot(p) * p;
    sum += t.dot(V.row(k));
  }
  out.formula = -sum * dt;
  out.residual = std::abs(out.numeric - out.formula);
  return out;
}

VariationCheck second_variation_check(const DiscreteCurve& c, const Eigen::MatrixXd& V) {
  c.validate();
  const int K = c.K();
  const double dt = c.dt();
  const double h = 1e-3;
  auto E = [&](double s) {
    Eigen::MatrixXd P = c.points + s * V;
    normalize_rows(P);
    return energy_only(P, dt);
  };
  VariationCheck out;
  out.numeric = (E(h) - 2.0 * E(0.0) + E(-h)) / (h * h);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    const Eigen::RowVectorXd DV = (V.row(wrap(k + 1, K)) - V.row(wrap(k - 1, K))) / (2.0 * dt);
    const Eigen::RowVectorXd Dp = (c.points.row(wrap(k + 1, K)) - c.points.row(wrap(k - 1, K))) / (2.0 * dt);
    sum += DV.squaredNorm() - Dp.squaredNorm() * V.row(k).squaredNorm();
  }
  out.formula = sum * dt;
  out.residual = std::abs(out.numeric - out.formula);
  return out;
}

DiscreteCurve perturbed_legendrian_circle(int m, int K, double radius, double amplitude, std::uint64_t seed,
                                          double period) {
  if (m < 1) throw DimensionMismatch("perturbed_legendrian_circle: m >= 1");
  if (!(radius > 0.0 && radius <= 1.0)) throw DomainError("circle radius must lie in (0, 1]");
  const int n = 2 * m + 2;
  const int e1 = 0, e2 = 2, e3 = m >= 2 ? 4 : 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd A(3, n), B(3, n);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < n; ++i) A(j, i) = N(rng), B(j, i) = N(rng);
  DiscreteCurve c;
  c.period = period;
  c.points = Eigen::MatrixXd::Zero(K, n);
  const double w = 2.0 * kPi / period;
  const double h = std::sqrt(std::max(0.0, 1.0 - radius * radius));
  for (int k = 0; k < K; ++k) {
    const double t = k * period / K;
    Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(n);
    p[e1] = radius * std::cos(w * t);
    p[e2] = radius * std::sin(w * t);
    if (m >= 2 || h > 0.0) p[e3] += h;
    for (int j = 0; j < 3; ++j)
      p += amplitude * (std::cos((j + 2) * w * t) * A.row(j) + std::sin((j + 2) * w * t) * B.row(j)) / std::sqrt(n);
    c.points.row(k) = p;
  }
  c.normalize();
  c.validate();
  return c;
}

SmoothMap fourier_interpolant(const DiscreteCurve& c) {
  const int K = c.K(), n = c.ambient(), H = K / 2;
  const double w = 2.0 * kPi / c.period;
  Eigen::MatrixXd ca = Eigen::MatrixXd::Zero(H + 1, n), sb = Eigen::MatrixXd::Zero(H + 1, n);
  for (int j = 0; j <= H; ++j) {
    const double scale = (j == 0 || j == H) ? 1.0 / K : 2.0 / K;
    for (int k = 0; k < K; ++k) {
      const double th = 2.0 * kPi * j * k / K;
      ca.row(j) += scale * std::cos(th) * c.points.row(k);
      if (j != 0 && j != H) sb.row(j) += scale * std::sin(th) * c.points.row(k);
    }
  }
  return make_map(1, n, [ca, sb, w, n, H](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    const T C1 = cos(w * x[0]), S1 = sin(w * x[0]);
    std::vector<T> q(n, T(0.0));
    T Cj(1.0), Sj(0.0);
    for (int j = 0; j <= H; ++j) {
      for (int i = 0; i < n; ++i) q[i] += ca(j, i) * Cj + sb(j, i) * Sj;
      const T Cn = Cj * C1 - Sj * S1;
      Sj = Sj * C1 + Cj * S1;
      Cj = Cn;
    }
    T s2(0.0);
    for (int i = 0; i < n; ++i) s2 += q[i] * q[i];
    const T inv = 1.0 / sqrt(s2);
    for (int i = 0; i < n; ++i) q[i] = q[i] * inv;
    return q;
  });
}

void write_fixture(const std::string& path, const CurveFixture& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write fixture: " + path);
  char buf[64];
  os << "# conelift curve fixture\n";
  os << "# K " << f.curve.K() << "\n";
  os << "# m " << f.m << "\n";
  os << "# ambient " << f.curve.ambient() << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", f.curve.period);
  os << "# period " << buf << "\n";
  os << "# config_hash " << f.config_hash << "\n";
  os << "# provenance " << f.provenance << "\n";
  for (int k = 0; k < f.curve.K(); ++k) {
    for (int i = 0; i < f.curve.ambient(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", f.curve.points(k, i));
      os << (i ? " " : "") << buf;
    }
    os << "\n";
  }
}

CurveFixture read_fixture(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read fixture: " + path);
  CurveFixture f;
  int K = -1, n = -1;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls >> std::ws, rest);
      if (key == "K") K = std::stoi(rest);
      else if (key == "m") f.m = std::stoi(rest);
      else if (key == "ambient") n = std::stoi(rest);
      else if (key == "period") f.curve.period = std::stod(rest);
      else if (key == "config_hash") f.config_hash = rest;
      else if (key == "provenance") f.provenance = rest;
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> r;
    double v;
    while (ls >> v) r.push_back(v);
    rows.push_back(std::move(r));
  }
  if (K < 0 || n < 0 || static_cast<int>(rows.size()) != K) throw ConfigError("malformed fixture header: " + path);
  f.curve.points.resize(K, n);
  for (int k = 0; k < K; ++k) {
    if (static_cast<int>(rows[k].size()) != n) throw ConfigError("malformed fixture row in " + path);
    for (int i = 0; i < n; ++i) f.curve.points(k, i) = rows[k][i];
  }
  f.curve.validate();
  return f;
}

double uniform_circle_energy(int K, double radius, double period) {
  const double th = 2.0 * std::numbers::pi / K;
  const double sinc = std::sin(th) / th;
  return 0.5 * radius * radius * std::pow(2.0 * std::numbers::pi / period, 2) * period * sinc * sinc;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

FlowJob FlowJob::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("flow config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("flow config must be a JSON object");
  FlowJob job;
  FlowConfig& f = job.flow;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "functional") {
        const std::string s = v.get<std::string>();
        if (s == "energy") f.functional = Functional::Energy;
        else if (s == "bienergy") f.functional = Functional::Bienergy;
        else throw ConfigError("functional must be energy or bienergy");
      } else if (key == "step") f.step = v.get<double>();
      else if (key == "max_iterations") f.max_iterations = v.get<int>();
      else if (key == "tolerance") f.tolerance = v.get<double>();
      else if (key == "penalty_weight") f.penalty_weight = v.get<double>();
      else if (key == "fix_energy") f.fix_energy = v.get<bool>();
      else if (key == "energy_level") f.energy_level = v.get<double>();
      else if (key == "sobolev_alpha") f.sobolev_alpha = v.get<double>();
      else if (key == "sobolev_power") f.sobolev_power = v.get<int>();
      else if (key == "spacing_weight") f.spacing_weight = v.get<double>();
      else if (key == "newton_steps") f.newton_steps = v.get<int>();
      else if (key == "seed") f.seed = v.get<std::uint64_t>();
      else if (key == "m") job.m = v.get<int>();
      else if (key == "K") job.K = v.get<int>();
      else if (key == "radius") job.radius = v.get<double>();
      else if (key == "amplitude") job.amplitude = v.get<double>();
      else if (key == "target_radius") job.target_radius = v.get<double>();
      else if (key == "output") job.output = v.get<std::string>();
      else throw ConfigError("unknown flow config key: " + key);
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(std::string("flow config has a field of the wrong type: ") + e.what());
  }
  if (job.m < 1) throw ConfigError("m must be >= 1");
  if (job.K < 16 || job.K % 2) throw ConfigError("K must be even and >= 16");
  if (!(job.radius > 0.0 && job.radius <= 1.0)) throw ConfigError("radius must lie in (0, 1]");
  if (job.amplitude < 0.0) throw ConfigError("amplitude must be >= 0");
  if (job.target_radius < 0.0 || job.target_radius > 1.0) throw ConfigError("target_radius must lie in [0, 1]");
  job.effective_config().validate();
  return job;
}

FlowJob FlowJob::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read flow config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

std::string FlowJob::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(flow.to_json());
  j["m"] = m;
  j["K"] = K;
  j["radius"] = radius;
  j["amplitude"] = amplitude;
  j["target_radius"] = target_radius;
  return j.dump();
}

std::string FlowJob::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json())));
  return buf;
}

DiscreteCurve FlowJob::initial() const { return perturbed_legendrian_circle(m, K, radius, amplitude, flow.seed); }

FlowConfig FlowJob::effective_config() const {
  FlowConfig c = flow;
  if (target_radius > 0.0) c.energy_level = uniform_circle_energy(K, target_radius);
  return c;
}

std::string FlowJob::provenance() const {
  std::ostringstream os;
  os << (flow.functional == Functional::Energy ? "energy" : "bienergy") << " flow from a perturbed Legendrian circle (m "
     << m << ", K " << K << ", radius " << radius << ", amplitude " << amplitude << ", seed " << flow.seed << ")";
  return os.str();
}

}  // namespace conelift
