#include "conelift/cone.hpp"

#include <cmath>

#include "conelift/errors.hpp"

namespace conelift {

namespace {

Eigen::VectorXd base_part(const Eigen::VectorXd& v) { return v.tail(v.size() - 1); }

template <class T>
std::span<const T> tail_span(std::span<const T> x) {
  return x.subspan(1);
}

struct ScalarJet {
  double value, dr, drr;
  Eigen::VectorXd dx;
  Eigen::MatrixXd dxx;
};

// B and its partials at (r, x); index 0 is r.
ScalarJet scalar_partials(const SmoothMap& B, double r, const Point& x, int order, const DifferentiationConfig& cfg) {
  if (B.out_dim() != 1 || B.in_dim() != x.size() + 1) throw DimensionMismatch("cone section: B must map (r, x) -> R");
  Point rx(x.size() + 1);
  rx << r, x;
  const Jet J = taylor_model(B, std::span<const double>(rx.data(), rx.size()), order, cfg)[0];
  const int m = static_cast<int>(x.size());
  ScalarJet s{J.value(), 0.0, 0.0, Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m)};
  if (order >= 1) {
    s.dr = J.derivative(0).value();
    for (int i = 0; i < m; ++i) s.dx[i] = J.derivative(i + 1).value();
  }
  if (order >= 2) {
    s.drr = J.derivative(0).derivative(0).value();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s.dxx(i, j) = J.derivative(j + 1).derivative(i + 1).value();
  }
  return s;
}

// x -> V(r, x) at fixed r.
SmoothMap at_radius(const SmoothMap& V, double r) {
  const int m = V.in_dim() - 1;
  return SmoothMap(
      m, V.out_dim(),
      [V, r, m](std::span<const double> x) {
        std::vector<double> y(m + 1);
        y[0] = r;
        for (int i = 0; i < m; ++i) y[i + 1] = x[i];
        return V(std::span<const double>(y));
      },
      [V, r, m](std::span<const Jet> x) {
        std::vector<Jet> y(m + 1);
        y[0] = Jet(r);
        for (int i = 0; i < m; ++i) y[i + 1] = x[i];
        return V(std::span<const Jet>(y));
      });
}

Point with_radius(double r, const Point& x) {
  Point rx(x.size() + 1);
  rx << r, x;
  return rx;
}

Eigen::MatrixXd deta_matrix(const ContactMetricStructure& S, const Eigen::VectorXd& p,
                            const DifferentiationConfig& cfg) {
  const auto model = taylor_model(S.eta, std::span<const double>(p.data(), p.size()), 1, cfg);
  Eigen::MatrixXd d(S.ambient, S.ambient);
  for (int b = 0; b < S.ambient; ++b)
    for (int a = 0; a < S.ambient; ++a) d(a, b) = model[b].derivative(a).value();
  return 0.5 * (d - d.transpose());
}

}  // namespace

double cone_norm(const ConeVector& v, const Eigen::MatrixXd& h) {
  return std::sqrt(v.radial * v.radial + std::max(0.0, v.base.dot(h * v.base)));
}

ChartManifold cone_metric(const ChartManifold& base, double r_max) {
  const int m = base.dim();
  Box box;
  box.lower.push_back(0.0);
  box.upper.push_back(r_max);
  for (int i = 0; i < m; ++i) {
    box.lower.push_back(base.domain().lower[i]);
    box.upper.push_back(base.domain().upper[i]);
  }
  const SmoothMap g = base.metric();
  auto metric = make_map(m + 1, (m + 1) * (m + 1), [g, m](auto rx) {
    using T = std::decay_t<decltype(rx[0])>;
    const auto gx = g(tail_span(rx));
    const T r2 = rx[0] * rx[0];
    std::vector<T> out((m + 1) * (m + 1), T(0.0));
    out[0] = T(1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[(i + 1) * (m + 1) + j + 1] = r2 * gx[i * m + j];
    return out;
  });
  return ChartManifold("C(" + base.name() + ")", m + 1, std::move(box), std::move(metric));
}

Eigen::VectorXd liouville_field(const Point& rx) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(rx.size());
  psi[0] = rx[0];
  return psi;
}

Eigen::VectorXd cone_connection_closed(const ChartManifold& base, const Point& rx, const Eigen::VectorXd& U,
                                       const Eigen::VectorXd& W, const DifferentiationConfig& cfg) {
  const int m = base.dim();
  if (U.size() != m + 1 || W.size() != m + 1 || rx.size() != m + 1)
    throw DimensionMismatch("cone connection: vectors must have dim + 1 components");
  const double r = rx[0];
  const Point x = base_part(rx);
  const TensorValue G = christoffel(base, x, cfg);
  const Eigen::MatrixXd g = base.metric_at(std::span<const double>(x.data(), x.size()));
  const double a = U[0], b = W[0];
  const Eigen::VectorXd X = base_part(U), Y = base_part(W);
  Eigen::VectorXd nablaXY = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) nablaXY[k] += G.at({k, i, j}) * X[i] * Y[j];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
  // nabla_X Y = nabla^M_X Y - r g(X, Y) d_r
  out.tail(m) += nablaXY;
  out[0] -= r * X.dot(g * Y);
  // nabla_X d_r = X / r
  out.tail(m) += b * X / r;
  // nabla_d_r Y = Y / r
  out.tail(m) += a * Y / r;
  // nabla_d_r d_r = 0
  return out;
}

TensorValue cone_christoffel_closed(const ChartManifold& base, const Point& rx, const DifferentiationConfig& cfg) {
  const int n = base.dim() + 1;
  TensorValue G({n, n, n}, "^__");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd v =
          cone_connection_closed(base, rx, Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j), cfg);
      for (int k = 0; k < n; ++k) G.at({k, i, j}) = v[k];
    }
  return G;
}

Eigen::VectorXd cone_curvature_closed(const ChartManifold& base, const Point& rx, const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                                      const DifferentiationConfig& cfg) {
  const int m = base.dim();
  const Point x = base_part(rx);
  const TensorValue R = riemann_and_ricci(base, x, cfg).riemann;
  const Eigen::MatrixXd g = base.metric_at(std::span<const double>(x.data(), x.size()));
  const Eigen::VectorXd Xb = base_part(X), Yb = base_part(Y), Zb = base_part(Z);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) out[l + 1] += R.at({l, i, j, k}) * Xb[i] * Yb[j] * Zb[k];
  out.tail(m) += -Yb.dot(g * Zb) * Xb + Xb.dot(g * Zb) * Yb;
  return out;
}

TensorValue cone_riemann_closed(const ChartManifold& base, const Point& rx, const DifferentiationConfig& cfg) {
  const int n = base.dim() + 1;
  TensorValue R({n, n, n, n}, "^___");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Eigen::VectorXd v = cone_curvature_closed(base, rx, Eigen::VectorXd::Unit(n, i),
                                                        Eigen::VectorXd::Unit(n, j), Eigen::VectorXd::Unit(n, k), cfg);
        for (int l = 0; l < n; ++l) R.at({l, i, j, k}) = v[l];
      }
  return R;
}

Point ConeLift::at(double r) const { return with_radius(r, x0); }

ConeVector ConeLift::to_cone(const Eigen::VectorXd& chart) const {
  if (chart.size() != lifted.target.coords()) throw DimensionMismatch("ConeLift::to_cone: wrong component count");
  ConeVector v{chart[0], base_part(chart)};
  if (stereo) v.base = 2.0 * stereo->basis * v.base;
  return v;
}

Eigen::VectorXd ConeLift::to_chart(const ConeVector& v) const {
  const int n = lifted.target.coords();
  Eigen::VectorXd out(n);
  out[0] = v.radial;
  out.tail(n - 1) = stereo ? Eigen::VectorXd(0.5 * stereo->basis.transpose() * v.base) : v.base;
  return out;
}

SmoothMap ConeLift::chart_section(const SmoothMap& V, const SmoothMap& B) const {
  const int m = base.m();
  const int nb = base.target.coords();
  if (V.in_dim() != m + 1 || V.out_dim() != nb) throw DimensionMismatch("cone section: V must map (r, x) -> base target");
  if (B.in_dim() != m + 1 || B.out_dim() != 1) throw DimensionMismatch("cone section: B must map (r, x) -> R");
  const int nc = lifted.target.coords();
  if (!stereo) {
    return make_map(m + 1, nc, [V, B](auto rx) {
      using T = std::decay_t<decltype(rx[0])>;
      const auto v = V(rx);
      std::vector<T> out{B(rx)[0]};
      out.insert(out.end(), v.begin(), v.end());
      return out;
    });
  }
  const SmoothMap phi = base.map;
  const SmoothMap coords = stereo->coordinates();
  const SmoothMap jac = stereo->embedding_jacobian();
  const int n = nc - 1;
  return make_map(m + 1, nc, [V, B, phi, coords, jac, n](auto rx) {
    using T = std::decay_t<decltype(rx[0])>;
    const auto p = phi(tail_span(rx));
    const auto u = coords(std::span<const T>(p));
    const auto D = jac(std::span<const T>(u));
    T s(0.0);
    for (const T& ui : u) s = s + ui * ui;
    const T w = 0.25 * (1.0 + s) * (1.0 + s);
    const auto v = V(rx);
    std::vector<T> out(n + 1, T(0.0));
    out[0] = B(rx)[0];
    for (int i = 0; i < n; ++i) {
      T acc(0.0);
      for (int a = 0; a <= n; ++a) acc = acc + D[a * n + i] * v[a];
      out[i + 1] = w * acc;
    }
    return out;
  });
}

ConeLift lift(const Immersion& phi, const Point& x0) {
  phi.validate();
  const int m = phi.m();
  ConeLift L{phi, {}, x0, std::nullopt};
  const SmoothMap f = phi.map;
  if (phi.target.kind() == TargetKind::Chart) {
    const int n = phi.target.coords();
    auto map = make_map(m + 1, n + 1, [f](auto rx) {
      using T = std::decay_t<decltype(rx[0])>;
      const auto y = f(tail_span(rx));
      std::vector<T> out{rx[0]};
      out.insert(out.end(), y.begin(), y.end());
      return out;
    });
    L.lifted = Immersion{cone_metric(phi.source), TargetGeometry::chart(cone_metric(phi.target.chart_manifold())),
                         std::move(map), "cone lift of " + phi.label};
    return L;
  }
  const auto p0 = f(std::span<const double>(x0.data(), x0.size()));
  L.stereo = StereographicChart::centered_at(Eigen::Map<const Eigen::VectorXd>(p0.data(), p0.size()));
  const SmoothMap coords = L.stereo->coordinates();
  const int n = L.stereo->dim();
  auto map = make_map(m + 1, n + 1, [f, coords](auto rx) {
    using T = std::decay_t<decltype(rx[0])>;
    const auto p = f(tail_span(rx));
    const auto u = coords(std::span<const T>(p));
    std::vector<T> out{rx[0]};
    out.insert(out.end(), u.begin(), u.end());
    return out;
  });
  L.lifted = Immersion{cone_metric(phi.source), TargetGeometry::chart(cone_metric(L.stereo->chart())), std::move(map),
                       "cone lift of " + phi.label};
  return L;
}

ConeVector cone_pullback_connection_closed(const Immersion& phi, const ConeSection& W, const Eigen::VectorXd& direction,
                                           double r, const Point& x, const DifferentiationConfig& cfg) {
  const int m = phi.m();
  if (direction.size() != m + 1) throw DimensionMismatch("cone connection: direction needs dim + 1 components");
  const LocalImmersion L(phi, x, cfg, 2);
  const Eigen::VectorXd X = base_part(direction);
  const ScalarJet B = scalar_partials(W.B, r, x, 1, cfg);
  ConeVector out;
  out.base = L.covariant_along(L.section_model(at_radius(W.V, r), 1), X) + (B.value / r) * L.push(X);
  out.radial = B.dx.dot(X) + direction[0] * B.dr;
  return out;
}

ConeVector cone_pullback_connection_generic(const ConeLift& L, const ConeSection& W, const Eigen::VectorXd& direction,
                                            double r, const DifferentiationConfig& cfg) {
  const LocalImmersion Lbar(L.lifted, L.at(r), cfg, 2);
  const Section s = Lbar.section_model(L.chart_section(W.V, W.B), 1);
  return L.to_cone(Lbar.covariant_along(s, direction));
}

ConeLaplacian cone_laplacian_and_jacobi_closed(const Immersion& phi, const ConeSection& W, double r, const Point& x,
                                               const DifferentiationConfig& cfg) {
  const int m = phi.m();
  const LocalImmersion L(phi, x, cfg, 3);
  const SmoothMap Vr = at_radius(W.V, r);
  const Section Vs = L.section_model(Vr, 2);
  const Eigen::VectorXd V = values(Vs);
  const ScalarJet B = scalar_partials(W.B, r, x, 2, cfg);
  const auto& sm = L.source_metric();
  const Eigen::VectorXd gradB = sm.inverse_value() * B.dx;
  Eigen::MatrixXd hess = B.dxx;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) hess(i, j) -= sm.christoffel(k, i, j).value() * B.dx[k];
  const double lapB = -frame_trace(L.frame(), hess);
  const Eigen::VectorXd tau = L.tension();
  const double r2 = r * r, r3 = r2 * r;
  const Eigen::VectorXd common = -(B.value / r3) * tau - (2.0 / r3) * L.push(gradB);
  const double radial = lapB / r2 - B.drr - (m / r) * B.dr;

  ConeLaplacian out;
  out.tangential = L.tangent_value(V);
  out.laplacian = {radial, L.rough_laplacian(Vs) / r2 + common};
  out.jacobi = {radial, L.jacobi(Vs) / r2 + (m / r2) * V - out.tangential / r2 + common};
  return out;
}

ConeLaplacian cone_laplacian_and_jacobi_generic(const ConeLift& L, const ConeSection& W, double r,
                                                const DifferentiationConfig& cfg) {
  const LocalImmersion Lbar(L.lifted, L.at(r), cfg, 3);
  const Section s = Lbar.section_model(L.chart_section(W.V, W.B), 2);
  ConeLaplacian out;
  out.laplacian = L.to_cone(Lbar.rough_laplacian(s));
  out.jacobi = L.to_cone(Lbar.jacobi(s));
  const LocalImmersion Lb(L.base, L.x0, cfg, 2);
  const auto v = W.V(std::span<const double>(L.at(r).data(), L.at(r).size()));
  out.tangential = Lb.tangent_value(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  return out;
}

ConeVector cone_complex_structure(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r,
                                  const ConeVector& v) {
  if (v.base.size() != S.ambient) throw DimensionMismatch("cone complex structure: wrong base component count");
  ConeVector out;
  out.base = S.J_at(p) * v.base - (v.radial / r) * S.xi_at(p);
  out.radial = r * S.eta_at(p).dot(v.base);
  return out;
}

double cone_inner(double r, const ConeVector& u, const ConeVector& v) {
  return u.radial * v.radial + r * r * u.base.dot(v.base);
}

double kaehler_form(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r, const ConeVector& u,
                    const ConeVector& v, const DifferentiationConfig& cfg) {
  const Eigen::VectorXd eta = S.eta_at(p);
  const double dr_eta = 0.5 * (u.radial * eta.dot(v.base) - v.radial * eta.dot(u.base));
  return 2.0 * r * dr_eta + r * r * u.base.dot(deta_matrix(S, p, cfg) * v.base);
}

double lagrangian_residual(const ContactMetricStructure& S, const Eigen::VectorXd& p, double r,
                           const std::vector<ConeVector>& basis, const DifferentiationConfig& cfg) {
  if (basis.empty() || static_cast<int>(basis.size()) > S.m() + 1)
    throw DimensionMismatch("lagrangian_residual: need between 1 and m + 1 basis vectors");
  double res = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      res = std::max(res, std::abs(kaehler_form(S, p, r, basis[i], basis[j], cfg)));
  return res;
}

std::vector<ConeVector> lifted_tangent_basis(const LocalImmersion& L, double r) {
  std::vector<ConeVector> out;
  out.push_back({r, Eigen::VectorXd::Zero(L.coords())});
  for (int i = 0; i < L.m(); ++i) out.push_back({0.0, L.push(L.frame().col(i))});
  return out;
}

double kaehler_closure_residual(const ContactMetricStructure& S, const Eigen::VectorXd& z,
                                const DifferentiationConfig& cfg) {
  const int n = S.ambient;
  if (z.size() != n) throw DimensionMismatch("kaehler_closure_residual: wrong point dimension");
  auto omega = [&](const Eigen::VectorXd& q) {
    const double r = q.norm();
    const Eigen::VectorXd p = q / r;
    std::vector<ConeVector> e(n);
    for (int a = 0; a < n; ++a) {
      const Eigen::VectorXd ua = Eigen::VectorXd::Unit(n, a);
      e[a] = {p[a], (ua - p[a] * p) / r};
    }
    Eigen::MatrixXd O(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) O(a, b) = kaehler_form(S, p, r, e[a], e[b], cfg);
    return O;
  };
  const double h = 1e-5 * std::max(1.0, z.norm());
  std::vector<Eigen::MatrixXd> dO(n);
  for (int c = 0; c < n; ++c) {
    const Eigen::VectorXd dz = h * Eigen::VectorXd::Unit(n, c);
    dO[c] = (omega(z + dz) - omega(z - dz)) / (2.0 * h);
  }
  double res = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) res = std::max(res, std::abs(dO[a](b, c) + dO[b](c, a) + dO[c](a, b)));
  return res;
}

Section cone_complex_structure_section(const ConeLift& L, const LocalImmersion& Lbar, const ContactMetricStructure& S,
                                       const Section& W) {
  if (!L.stereo) throw NotSphereAmbient("cone complex structure needs a sphere target");
  const int n = L.stereo->dim();
  if (S.ambient != n + 1) throw DimensionMismatch("cone complex structure: structure and target differ");
  if (static_cast<int>(W.size()) != n + 1) throw DimensionMismatch("cone complex structure: wrong section size");
  const auto& y = Lbar.phi();
  const Jet& r = y[0];
  const std::vector<Jet> u(y.begin() + 1, y.end());
  const auto amb = L.stereo->embedding()(std::span<const Jet>(u));
  const auto D = L.stereo->embedding_jacobian()(std::span<const Jet>(u));
  const auto J = S.J(std::span<const Jet>(amb));
  const auto xi = S.xi(std::span<const Jet>(amb));
  const auto eta = S.eta(std::span<const Jet>(amb));
  Jet s(0.0);
  for (const Jet& ui : u) s += ui * ui;
  const Jet w = 0.25 * (1.0 + s) * (1.0 + s);
  const int N = n + 1;
  std::vector<Jet> V(N, Jet(0.0));
  for (int a = 0; a < N; ++a)
    for (int i = 0; i < n; ++i) V[a] += D[a * n + i] * W[i + 1];
  Jet etaV(0.0);
  for (int a = 0; a < N; ++a) etaV += eta[a] * V[a];
  std::vector<Jet> IV(N);
  for (int a = 0; a < N; ++a) {
    Jet acc = -(W[0] / r) * xi[a];
    for (int b = 0; b < N; ++b) acc += J[a * N + b] * V[b];
    IV[a] = acc;
  }
  Section out(N);
  out[0] = r * etaV;
  for (int i = 0; i < n; ++i) {
    Jet acc(0.0);
    for (int a = 0; a < N; ++a) acc += D[a * n + i] * IV[a];
    out[i + 1] = w * acc;
  }
  return out;
}

}  // namespace conelift
