#include "conelift/sasaki.hpp"

#include <algorithm>
#include <cmath>

#include "conelift/charts.hpp"
#include "conelift/errors.hpp"

namespace conelift {

Eigen::MatrixXd complex_rotation(int m) {
  const int N = 2 * m + 2;
  Eigen::MatrixXd J0 = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k <= m; ++k) {
    J0(2 * k, 2 * k + 1) = -1.0;
    J0(2 * k + 1, 2 * k) = 1.0;
  }
  return J0;
}

ContactMetricStructure build_sasaki_sphere(int m) {
  if (m < 1) throw DimensionMismatch("build_sasaki_sphere: m >= 1");
  const int N = 2 * m + 2;
  const Eigen::MatrixXd J0 = complex_rotation(m);
  ContactMetricStructure S;
  S.name = "S^" + std::to_string(2 * m + 1);
  S.carrier = CarrierKind::UnitSphere;
  S.ambient = N;
  S.xi = make_map(N, N, [J0, N](auto p) {
    using T = std::decay_t<decltype(p[0])>;
    std::vector<T> v(N, T(0.0));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (J0(a, b) != 0.0) v[a] = v[a] - J0(a, b) * p[b];
    return v;
  });
  S.eta = S.xi;
  // J = J0 + p (J0 p)^T, i.e. J X = J0 X - eta(X) p
  S.J = make_map(N, N * N, [J0, N](auto p) {
    using T = std::decay_t<decltype(p[0])>;
    std::vector<T> J0p(N, T(0.0));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (J0(a, b) != 0.0) J0p[a] = J0p[a] + J0(a, b) * p[b];
    std::vector<T> out(N * N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) out[a * N + b] = J0(a, b) + p[a] * J0p[b];
    return out;
  });
  return S;
}

namespace {

SmoothMap scaled(const SmoothMap& f, double s) {
  return SmoothMap(
      f.in_dim(), f.out_dim(),
      [f, s](std::span<const double> x) {
        auto v = f(x);
        for (double& c : v) c *= s;
        return v;
      },
      [f, s](std::span<const Jet> x) {
        auto v = f(x);
        for (Jet& c : v) c *= s;
        return v;
      });
}

}  // namespace

ContactMetricStructure with_scaled_reeb(const ContactMetricStructure& S, double factor) {
  ContactMetricStructure out = S;
  out.name = S.name + " (xi scaled)";
  out.xi = scaled(S.xi, factor);
  return out;
}

ContactMetricStructure with_flipped_J(const ContactMetricStructure& S) {
  ContactMetricStructure out = S;
  out.name = S.name + " (J flipped)";
  out.J = scaled(S.J, -1.0);
  return out;
}

ContactMetricStructure degenerate_euclidean(int n) {
  ContactMetricStructure S;
  S.name = "R^" + std::to_string(n) + " (zero structure)";
  S.carrier = CarrierKind::Euclidean;
  S.ambient = n;
  auto zero = [](int in, int out) {
    return make_map(in, out, [out](auto x) {
      using T = std::decay_t<decltype(x[0])>;
      return std::vector<T>(out, T(0.0));
    });
  };
  S.J = zero(n, n * n);
  S.xi = zero(n, n);
  S.eta = zero(n, n);
  return S;
}

void ContactMetricStructure::check_point(const Eigen::VectorXd& p) const {
  if (p.size() != ambient) throw DimensionMismatch(name + ": point has wrong dimension");
  if (carrier == CarrierKind::UnitSphere && std::abs(p.norm() - 1.0) > 1e-8)
    throw DomainError(name + ": point is off the unit sphere");
}

Eigen::MatrixXd ContactMetricStructure::tangent_basis(const Eigen::VectorXd& p) const {
  if (carrier == CarrierKind::Euclidean) return Eigen::MatrixXd::Identity(ambient, ambient);
  return orthonormal_complement(p);
}

Eigen::MatrixXd ContactMetricStructure::tangent_projector(const Eigen::VectorXd& p) const {
  if (carrier == CarrierKind::Euclidean) return Eigen::MatrixXd::Identity(ambient, ambient);
  return Eigen::MatrixXd::Identity(ambient, ambient) - p * p.transpose();
}

Eigen::MatrixXd ContactMetricStructure::J_at(const Eigen::VectorXd& p) const {
  const auto v = J(std::span<const double>(p.data(), p.size()));
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), ambient, ambient).transpose();
}

Eigen::VectorXd ContactMetricStructure::xi_at(const Eigen::VectorXd& p) const {
  const auto v = xi(std::span<const double>(p.data(), p.size()));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), ambient);
}

Eigen::VectorXd ContactMetricStructure::eta_at(const Eigen::VectorXd& p) const {
  const auto v = eta(std::span<const double>(p.data(), p.size()));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), ambient);
}

double AxiomResiduals::max() const { return *std::max_element(values.begin(), values.end()); }

AxiomResiduals axiom_residuals(const ContactMetricStructure& S, const Eigen::VectorXd& p,
                               const DifferentiationConfig& cfg) {
  S.check_point(p);
  const Eigen::MatrixXd E = S.tangent_basis(p);
  const Eigen::MatrixXd J = S.J_at(p);
  const Eigen::VectorXd xi = S.xi_at(p);
  const Eigen::VectorXd eta = S.eta_at(p);
  // d eta with the 1/2 convention: 1/2 (d_a eta_b - d_b eta_a) X^a Y^b
  const auto model = taylor_model(S.eta, std::span<const double>(p.data(), p.size()), 1, cfg);
  Eigen::MatrixXd deta(S.ambient, S.ambient);
  for (int b = 0; b < S.ambient; ++b)
    for (int a = 0; a < S.ambient; ++a) deta(a, b) = model[b].derivative(a).value();
  const Eigen::MatrixXd dEta = 0.5 * (deta - deta.transpose());

  AxiomResiduals r;
  auto& v = r.values;
  v[1] = std::abs(eta.dot(xi) - 1.0);
  v[2] = (J * xi).norm();
  for (int i = 0; i < E.cols(); ++i) {
    const Eigen::VectorXd X = E.col(i);
    v[0] = std::max(v[0], (J * (J * X) + X - eta.dot(X) * xi).norm());
    v[3] = std::max(v[3], std::abs(eta.dot(J * X)));
    v[5] = std::max(v[5], std::abs(eta.dot(X) - X.dot(xi)));
    for (int j = 0; j < E.cols(); ++j) {
      const Eigen::VectorXd Y = E.col(j);
      v[4] = std::max(v[4], std::abs((J * X).dot(J * Y) - X.dot(Y) + eta.dot(X) * eta.dot(Y)));
      v[6] = std::max(v[6], std::abs(X.dot(dEta * Y) - X.dot(J * Y)));
    }
  }
  return r;
}

Eigen::VectorXd sasaki_condition_vector(const ContactMetricStructure& S, const Eigen::VectorXd& X,
                                        const Eigen::VectorXd& Y, const Eigen::VectorXd& p,
                                        const DifferentiationConfig& cfg, int extension) {
  S.check_point(p);
  const int N = S.ambient;
  const bool sphere = S.carrier == CarrierKind::UnitSphere;
  const Eigen::VectorXd Y0 = Y;
  const Eigen::VectorXd p0 = p;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  if (extension == 1)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) A(a, b) = std::sin(1.0 + a + 2.0 * b);
  // q -> (Y(q), J(q) Y(q)) with Y(q) = P(q) (Y0 + A (q - p))
  const SmoothMap Jmap = S.J;
  auto F = make_map(N, 2 * N, [=](auto q) {
    using T = std::decay_t<decltype(q[0])>;
    std::vector<T> w(N);
    for (int a = 0; a < N; ++a) {
      T acc(Y0[a]);
      for (int b = 0; b < N; ++b)
        if (A(a, b) != 0.0) acc = acc + A(a, b) * (q[b] - p0[b]);
      w[a] = acc;
    }
    std::vector<T> Yq(w);
    if (sphere) {
      T qw(0.0);
      for (int a = 0; a < N; ++a) qw = qw + q[a] * w[a];
      for (int a = 0; a < N; ++a) Yq[a] = w[a] - q[a] * qw;
    }
    const auto Jq = Jmap(q);
    std::vector<T> out(2 * N, T(0.0));
    for (int a = 0; a < N; ++a) {
      out[a] = Yq[a];
      for (int b = 0; b < N; ++b) out[N + a] = out[N + a] + Jq[a * N + b] * Yq[b];
    }
    return out;
  });
  const auto model = taylor_model(F, std::span<const double>(p.data(), p.size()), 1, cfg);
  Eigen::VectorXd DY = Eigen::VectorXd::Zero(N), DJY = Eigen::VectorXd::Zero(N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      DY[a] += X[b] * model[a].derivative(b).value();
      DJY[a] += X[b] * model[N + a].derivative(b).value();
    }
  const Eigen::MatrixXd P = S.tangent_projector(p);
  const Eigen::MatrixXd J = S.J_at(p);
  const Eigen::VectorXd nablaJ = P * DJY - J * (P * DY);
  return nablaJ - X.dot(Y) * S.xi_at(p) + S.eta_at(p).dot(Y) * X;
}

double sasaki_condition_residual(const ContactMetricStructure& S, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                 const Eigen::VectorXd& p, const DifferentiationConfig& cfg, int extension) {
  return sasaki_condition_vector(S, X, Y, p, cfg, extension).norm();
}

namespace {

void check_legendrian_shape(const LocalImmersion& L, const ContactMetricStructure& S) {
  if (L.coords() != S.ambient) throw DimensionMismatch("immersion target does not match the contact carrier");
  if (L.m() > S.m()) throw DimensionMismatch("Legendrian test needs dim M <= m for a (2m+1)-dimensional carrier");
}

Eigen::VectorXd apply_J(const ContactMetricStructure& S, const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
  return S.J_at(p) * v;
}

}  // namespace

double legendrian_residual(const LocalImmersion& L, const ContactMetricStructure& S) {
  check_legendrian_shape(L, S);
  const Eigen::VectorXd p = L.phi_value();
  const Eigen::VectorXd eta = S.eta_at(p);
  const Eigen::MatrixXd E = L.differential() * L.frame();
  double r = 0.0;
  for (int i = 0; i < L.m(); ++i) r = std::max(r, std::abs(eta.dot(E.col(i))));
  return r;
}

double legendrian_residual(const Immersion& phi, const ContactMetricStructure& S, const Point& x,
                           const DifferentiationConfig& cfg) {
  if (phi.target.coords() != S.ambient) throw DimensionMismatch("immersion target does not match the contact carrier");
  if (phi.m() > S.m()) throw DimensionMismatch("Legendrian test needs dim M <= m for a (2m+1)-dimensional carrier");
  return legendrian_residual(LocalImmersion(phi, x, cfg, 2), S);
}

Eigen::VectorXd space_form_curvature(double eps, const ContactMetricStructure& S, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Y, const Eigen::VectorXd& Z, const Eigen::VectorXd& p) {
  const Eigen::VectorXd xi = S.xi_at(p);
  const Eigen::VectorXd eta = S.eta_at(p);
  const Eigen::MatrixXd J = S.J_at(p);
  const double a = (eps + 3.0) / 4.0;
  const double b = (eps - 1.0) / 4.0;
  const double eX = eta.dot(X), eY = eta.dot(Y), eZ = eta.dot(Z);
  const Eigen::VectorXd JX = J * X, JY = J * Y, JZ = J * Z;
  Eigen::VectorXd R = a * (Y.dot(Z) * X - Z.dot(X) * Y);
  R += b * (eX * eZ * Y - eY * eZ * X + X.dot(Z) * eY * xi - Y.dot(Z) * eX * xi + Z.dot(JY) * JX - Z.dot(JX) * JY +
            2.0 * X.dot(JY) * JZ);
  return R;
}

double spaceform_coefficient(double eps, int m) { return (eps * (m + 3) + 3.0 * (m - 1)) / 4.0; }

namespace {

void legendrian_gate(const LocalImmersion& L, const ContactMetricStructure& S) {
  const double r = legendrian_residual(L, S);
  if (r > kLegendrianGate) throw NotLegendrian("Legendrian residual " + std::to_string(r) + " exceeds the gate");
}

}  // namespace

SplitResiduals legendrian_biharmonic_residuals(const LocalImmersion& L, const ContactMetricStructure& S) {
  legendrian_gate(L, S);
  const int m = L.m();
  const int nc = L.coords();
  const Eigen::VectorXd p = L.phi_value();
  const Eigen::MatrixXd e = L.frame();
  const Eigen::MatrixXd dphi = L.differential();
  const Eigen::MatrixXd E = dphi * e;  // dphi e_j, target components
  const Eigen::VectorXd H = L.mean_curvature();

  // (nabla-perp_{e_j} B)(e_i, e_k)
  std::vector<Eigen::VectorXd> dB(m * m * m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dB[(k * m + i) * m + j] = L.normal_derivative_of_B(k, i, j);
  auto dBframe = [&](int a, int b, int c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nc);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) v += e(k, a) * e(i, b) * e(j, c) * dB[(k * m + i) * m + j];
    return v;
  };

  SplitResiduals r;
  r.tangential = L.divergence_of_shape_H() + L.shape_of_normal_derivative_H();
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      r.tangential -= L.inner(dBframe(j, i, i) - dBframe(i, j, i), H) * E.col(j);

  const Eigen::VectorXd JH = apply_J(S, p, H);
  const Eigen::VectorXd v = L.pull(JH);  // J H as a source vector
  const TensorValue& RN = L.target_model().riemann;
  const Eigen::MatrixXd basis = S.tangent_basis(p);
  auto curvature = [&](const Eigen::VectorXd& X, const Eigen::VectorXd& Y, const Eigen::VectorXd& Z) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nc);
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b)
        for (int c = 0; c < nc; ++c)
          for (int d = 0; d < nc; ++d) out[a] += RN.at({a, b, c, d}) * X[b] * Y[c] * Z[d];
    return out;
  };
  auto ricN = [&](const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    double s = 0.0;
    for (int b = 0; b < basis.cols(); ++b) s += L.inner(curvature(basis.col(b), X, Y), basis.col(b));
    return s;
  };
  const TensorValue ricM = ricci_from_riemann(L.source_metric().riemann(), L.metric());
  Eigen::MatrixXd RicM(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) RicM(a, b) = ricM.at({a, b});

  Section Hs(nc);
  for (int a = 0; a < nc; ++a) Hs[a] = L.tension_section()[a] / m;
  r.normal = L.normal_laplacian(Hs) + L.second_fundamental_of_shape_H();
  for (int j = 0; j < m; ++j) {
    const Eigen::VectorXd JE = apply_J(S, p, E.col(j));
    r.normal += ricN(JH, E.col(j)) * JE;
    r.normal -= v.dot(RicM * e.col(j)) * JE;
  }
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd Bv = Eigen::VectorXd::Zero(nc);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) Bv += v[k] * e(l, i) * values(L.second_fundamental(k, l));
    r.normal -= apply_J(S, p, L.push(L.shape_operator(Bv) * e.col(i)));
  }
  r.normal += m * apply_J(S, p, L.push(L.shape_operator(H) * v));
  r.normal += H;
  return r;
}

SplitResiduals legendrian_biharmonic_residuals(const Immersion& phi, const ContactMetricStructure& S, const Point& x,
                                               const DifferentiationConfig& cfg) {
  return legendrian_biharmonic_residuals(LocalImmersion(phi, x, cfg), S);
}

SpaceFormResiduals spaceform_biharmonic_residual(const LocalImmersion& L, const ContactMetricStructure& S, double eps) {
  legendrian_gate(L, S);
  const int m = L.m();
  const double c = spaceform_coefficient(eps, m);
  Section Hs(L.coords());
  for (int a = 0; a < L.coords(); ++a) Hs[a] = L.tension_section()[a] / m;
  const Eigen::VectorXd H = values(Hs);
  SpaceFormResiduals r;
  r.eigen = L.rough_laplacian(Hs) - c * H;
  r.split.tangential = L.divergence_of_shape_H() + L.shape_of_normal_derivative_H();
  r.split.normal = L.normal_laplacian(Hs) + L.second_fundamental_of_shape_H() - c * H;
  return r;
}

SpaceFormResiduals spaceform_biharmonic_residual(const Immersion& phi, const ContactMetricStructure& S, double eps,
                                                 const Point& x, const DifferentiationConfig& cfg) {
  return spaceform_biharmonic_residual(LocalImmersion(phi, x, cfg), S, eps);
}

}  // namespace conelift
