#include "conelift/immersion.hpp"

#include <cmath>

#include "conelift/errors.hpp"

namespace conelift {

Eigen::VectorXd values(const Section& s) {
  Eigen::VectorXd v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i].value();
  return v;
}

TargetGeometry TargetGeometry::chart(ChartManifold N) {
  TargetGeometry t;
  t.kind_ = TargetKind::Chart;
  t.dim_ = N.dim();
  t.chart_ = std::move(N);
  return t;
}

TargetGeometry TargetGeometry::sphere(int n) {
  if (n < 1) throw DimensionMismatch("sphere target: n >= 1");
  TargetGeometry t;
  t.kind_ = TargetKind::Sphere;
  t.dim_ = n;
  return t;
}

std::string TargetGeometry::name() const {
  return kind_ == TargetKind::Chart ? chart_->name() : "S^" + std::to_string(dim_) + " in R^" + std::to_string(dim_ + 1);
}

const ChartManifold& TargetGeometry::chart_manifold() const {
  if (!chart_) throw NotSphereAmbient("target has no chart presentation");
  return *chart_;
}

void TargetGeometry::check_point(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != coords()) throw DimensionMismatch(name() + ": wrong coordinate count");
  if (kind_ == TargetKind::Chart) {
    chart_->check_point(y);
    return;
  }
  double s = 0.0;
  for (double v : y) s += v * v;
  if (std::abs(std::sqrt(s) - 1.0) > 1e-8) throw DomainError(name() + ": point is off the unit sphere");
}

Eigen::MatrixXd TargetGeometry::metric_at(std::span<const double> y) const {
  if (kind_ == TargetKind::Chart) return chart_->metric_at(y);
  return Eigen::MatrixXd::Identity(coords(), coords());
}

Eigen::MatrixXd TargetGeometry::tangent_projector(std::span<const double> y) const {
  const int n = coords();
  if (kind_ == TargetKind::Chart) return Eigen::MatrixXd::Identity(n, n);
  const Eigen::Map<const Eigen::VectorXd> p(y.data(), n);
  return Eigen::MatrixXd::Identity(n, n) - p * p.transpose();
}

TargetModel TargetGeometry::model_along(std::span<const Jet> phi, int order, const DifferentiationConfig& cfg) const {
  const int n = coords();
  const auto y0 = values_of(phi);
  TargetModel t;
  t.h.assign(n * n, Jet(0.0));
  t.gamma.assign(n * n * n, Jet(0.0));
  t.projector.assign(n * n, Jet(0.0));
  if (kind_ == TargetKind::Sphere) {
    for (int a = 0; a < n; ++a) t.h[a * n + a] = Jet(1.0);
    for (int a = 0; a < n; ++a) {
      const Jet pa = phi[a].truncated(order - 1);
      for (int b = 0; b < n; ++b) t.gamma[(a * n + b) * n + b] = pa;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t.projector[a * n + b] = Jet(a == b ? 1.0 : 0.0) - phi[a] * phi[b];
    t.riemann = TensorValue({n, n, n, n}, "^___");
    // R(X,Y)Z = <Y,Z> X - <X,Z> Y
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        t.riemann.at({a, a, c, c}) += 1.0;
        t.riemann.at({a, c, a, c}) -= 1.0;
      }
    t.h0 = Eigen::MatrixXd::Identity(n, n);
    return t;
  }
  const LocalMetric lm = local_metric(*chart_, y0, order, cfg);
  std::vector<Jet> increments;
  for (const Jet& j : phi) increments.push_back(j.increment());
  const Composer comp(std::move(increments), order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      t.h[a * n + b] = comp.compose(lm.g(a, b));
      t.projector[a * n + b] = Jet(a == b ? 1.0 : 0.0);
      for (int c = 0; c < n; ++c) t.gamma[(a * n + b) * n + c] = comp.compose(lm.christoffel(a, b, c));
    }
  t.riemann = order >= 2 ? lm.riemann() : riemann_and_ricci(*chart_, Eigen::Map<const Eigen::VectorXd>(y0.data(), n), cfg).riemann;
  t.h0 = lm.metric_value();
  return t;
}

void Immersion::validate() const {
  if (map.in_dim() != source.dim()) throw DimensionMismatch(label + ": map input does not match source dimension");
  if (map.out_dim() != target.coords()) throw DimensionMismatch(label + ": map output does not match target coordinates");
  if (source.dim() > target.dim()) throw DimensionMismatch(label + ": source dimension exceeds target dimension");
}

LocalImmersion::LocalImmersion(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg, int order)
    : phi_map_(phi), x_(x), cfg_(cfg), order_(order > 0 ? order : cfg.jet_order), m_(phi.m()), nc_(phi.target.coords()) {
  cfg.validate();
  phi.validate();
  if (order_ < 2) throw DerivativeError("LocalImmersion: order must be >= 2");
  const std::span<const double> xs(x.data(), x.size());
  phi.source.check_point(xs);
  phi_ = taylor_model(phi.map, xs, order_, cfg);
  const auto y0 = values_of(phi_);
  phi.target.check_point(y0);
  dphi_.resize(nc_ * m_);
  for (int a = 0; a < nc_; ++a)
    for (int i = 0; i < m_; ++i) dphi_[a * m_ + i] = phi_[a].derivative(i);
  target_ = phi.target.model_along(phi_, order_ - 1, cfg);

  std::vector<Jet> g(m_ * m_, Jet(0.0));
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) {
      Jet acc(0.0);
      for (int a = 0; a < nc_; ++a) {
        Jet ha(0.0);
        for (int b = 0; b < nc_; ++b) ha += target_.h[a * nc_ + b] * dphi(b, j);
        acc += dphi(a, i) * ha;
      }
      g[i * m_ + j] = acc;
      g[j * m_ + i] = acc;
    }
  Eigen::MatrixXd g0(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) g0(i, j) = g[i * m_ + j].value();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g0, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff())))
    throw RankDeficient(phi.label + ": differential is rank deficient");
  source_.emplace(m_, std::move(g));
  frame_ = gram_schmidt_frame(g0);

  B_.resize(m_ * m_);
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) {
      Section b(nc_);
      for (int a = 0; a < nc_; ++a) {
        Jet v = dphi(a, j).derivative(i);
        for (int k = 0; k < m_; ++k) v -= source_->christoffel(k, i, j) * dphi(a, k);
        for (int c = 0; c < nc_; ++c) {
          Jet w(0.0);
          for (int d = 0; d < nc_; ++d) w += target_.gamma[(a * nc_ + c) * nc_ + d] * dphi(d, j);
          v += w * dphi(c, i);
        }
        b[a] = v;
      }
      B_[i * m_ + j] = b;
      B_[j * m_ + i] = std::move(b);
    }
  tau_.assign(nc_, Jet(0.0));
  for (int a = 0; a < nc_; ++a)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) tau_[a] += source_->inverse(i, j) * B_[i * m_ + j][a];
}

Eigen::VectorXd LocalImmersion::phi_value() const { return values(phi_); }

Eigen::MatrixXd LocalImmersion::differential() const {
  Eigen::MatrixXd d(nc_, m_);
  for (int a = 0; a < nc_; ++a)
    for (int i = 0; i < m_; ++i) d(a, i) = dphi(a, i).value();
  return d;
}

Eigen::MatrixXd LocalImmersion::metric() const { return source_->metric_value(); }

void LocalImmersion::set_frame(const Eigen::MatrixXd& frame) {
  const Eigen::MatrixXd I = frame.transpose() * metric() * frame;
  if ((I - Eigen::MatrixXd::Identity(m_, m_)).cwiseAbs().maxCoeff() > 1e-10)
    throw SingularMetric("set_frame: frame is not orthonormal");
  frame_ = frame;
}

double LocalImmersion::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(target_.h0 * b);
}

double LocalImmersion::norm(const Eigen::VectorXd& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

Eigen::VectorXd LocalImmersion::push(const Eigen::VectorXd& v) const { return differential() * v; }

Eigen::VectorXd LocalImmersion::pull(const Eigen::VectorXd& V) const {
  const Eigen::MatrixXd d = differential();
  return source_->inverse_value() * (d.transpose() * (target_.h0 * V));
}

double LocalImmersion::frame_trace(const std::function<double(int, int)>& t) const {
  double s = 0.0;
  for (int a = 0; a < m_; ++a)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) s += frame_(i, a) * frame_(j, a) * t(i, j);
  return s;
}

Eigen::VectorXd LocalImmersion::frame_trace_vec(const std::function<Eigen::VectorXd(int, int)>& t) const {
  Eigen::VectorXd s;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      double q = 0.0;
      for (int a = 0; a < m_; ++a) q += frame_(i, a) * frame_(j, a);
      if (q == 0.0) continue;
      const Eigen::VectorXd v = t(i, j);
      if (s.size() == 0) s = Eigen::VectorXd::Zero(v.size());
      s += q * v;
    }
  if (s.size() == 0) s = Eigen::VectorXd::Zero(nc_);
  return s;
}

SecondFundamentalData LocalImmersion::second_fundamental_data() const {
  SecondFundamentalData d;
  d.x = x_;
  for (const Section& b : B_) d.B.push_back(values(b));
  d.tension = tension();
  d.mean_curvature = d.tension / m_;
  return d;
}

Eigen::VectorXd LocalImmersion::tension() const {
  return frame_trace_vec([&](int i, int j) { return values(B_[i * m_ + j]); });
}

Eigen::VectorXd LocalImmersion::mean_curvature() const { return tension() / m_; }

Section LocalImmersion::section_model(const SmoothMap& V, int order) const {
  if (V.in_dim() != m_ || V.out_dim() != nc_) throw DimensionMismatch("section must map source -> target components");
  return taylor_model(V, std::span<const double>(x_.data(), x_.size()), order, cfg_);
}

Section LocalImmersion::constant_section(const Eigen::VectorXd& v) const {
  Section s(v.size());
  for (int a = 0; a < v.size(); ++a) s[a] = Jet(v[a]);
  return s;
}

Section LocalImmersion::covariant(const Section& V, int i) const {
  Section out(nc_);
  for (int a = 0; a < nc_; ++a) {
    Jet v = V[a].derivative(i);
    for (int b = 0; b < nc_; ++b) {
      Jet w(0.0);
      for (int c = 0; c < nc_; ++c) {
        const Jet& G = target_.gamma[(a * nc_ + b) * nc_ + c];
        if (G.is_constant() && G.value() == 0.0) continue;
        w += G * V[c];
      }
      v += w * dphi(b, i);
    }
    out[a] = v;
  }
  return out;
}

Eigen::VectorXd LocalImmersion::covariant_along(const Section& V, const Eigen::VectorXd& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nc_);
  for (int i = 0; i < m_; ++i) out += X[i] * values(covariant(V, i));
  return out;
}

Eigen::VectorXd LocalImmersion::rough_laplacian(const Section& V) const {
  std::vector<Section> W(m_);
  for (int j = 0; j < m_; ++j) W[j] = covariant(V, j);
  return -frame_trace_vec([&](int i, int j) {
    Eigen::VectorXd v = values(covariant(W[j], i));
    for (int k = 0; k < m_; ++k) v -= source_->christoffel(k, i, j).value() * values(W[k]);
    return v;
  });
}

Eigen::VectorXd LocalImmersion::curvature_term(const Eigen::VectorXd& V) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nc_);
  const Eigen::MatrixXd E = differential() * frame_;
  const auto& R = target_.riemann;
  for (int e = 0; e < m_; ++e)
    for (int a = 0; a < nc_; ++a)
      for (int b = 0; b < nc_; ++b) {
        if (V[b] == 0.0) continue;
        for (int c = 0; c < nc_; ++c)
          for (int d = 0; d < nc_; ++d) out[a] += R.at({a, b, c, d}) * V[b] * E(c, e) * E(d, e);
      }
  return out;
}

Eigen::VectorXd LocalImmersion::jacobi(const Section& V) const {
  return rough_laplacian(V) - curvature_term(values(V));
}

Eigen::VectorXd LocalImmersion::bitension() const {
  if (order_ < 4) throw DerivativeError("bitension needs a Taylor model of order >= 4");
  return jacobi(tau_);
}

Section LocalImmersion::tangent_part(const Section& V) const {
  Section PV(nc_, Jet(0.0));
  for (int a = 0; a < nc_; ++a)
    for (int b = 0; b < nc_; ++b) PV[a] += target_.projector[a * nc_ + b] * V[b];
  // X^k = g^{kl} h(dphi_l, PV)
  std::vector<Jet> c(m_, Jet(0.0));
  for (int l = 0; l < m_; ++l)
    for (int a = 0; a < nc_; ++a) {
      Jet hv(0.0);
      for (int b = 0; b < nc_; ++b) hv += target_.h[a * nc_ + b] * PV[b];
      c[l] += dphi(a, l) * hv;
    }
  Section T(nc_, Jet(0.0));
  for (int k = 0; k < m_; ++k) {
    Jet X(0.0);
    for (int l = 0; l < m_; ++l) X += source_->inverse(k, l) * c[l];
    for (int a = 0; a < nc_; ++a) T[a] += dphi(a, k) * X;
  }
  return T;
}

Section LocalImmersion::normal_part(const Section& V) const {
  const Section T = tangent_part(V);
  Section N(nc_, Jet(0.0));
  for (int a = 0; a < nc_; ++a) {
    for (int b = 0; b < nc_; ++b) N[a] += target_.projector[a * nc_ + b] * V[b];
    N[a] -= T[a];
  }
  return N;
}

Eigen::VectorXd LocalImmersion::tangent_value(const Eigen::VectorXd& V) const { return push(pull(V)); }

Eigen::VectorXd LocalImmersion::normal_value(const Eigen::VectorXd& V) const {
  Eigen::MatrixXd P(nc_, nc_);
  for (int a = 0; a < nc_; ++a)
    for (int b = 0; b < nc_; ++b) P(a, b) = target_.projector[a * nc_ + b].value();
  const Eigen::VectorXd PV = P * V;
  return PV - tangent_value(PV);
}

Eigen::MatrixXd LocalImmersion::shape_operator(const Eigen::VectorXd& zeta) const {
  const double scale = std::max(1.0, norm(zeta));
  if ((zeta - normal_value(zeta)).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NotNormal(phi_map_.label + ": section is not normal to the immersion");
  Eigen::MatrixXd hb(m_, m_);
  for (int l = 0; l < m_; ++l)
    for (int i = 0; i < m_; ++i) hb(l, i) = inner(values(B_[l * m_ + i]), zeta);
  return source_->inverse_value() * hb;
}

Section LocalImmersion::normal_covariant(const Section& zeta, int i) const {
  return normal_part(covariant(zeta, i));
}

Eigen::VectorXd LocalImmersion::normal_laplacian(const Section& zeta) const {
  std::vector<Section> W(m_);
  for (int j = 0; j < m_; ++j) W[j] = normal_covariant(zeta, j);
  return -frame_trace_vec([&](int i, int j) {
    Eigen::VectorXd v = values(normal_covariant(W[j], i));
    for (int k = 0; k < m_; ++k) v -= source_->christoffel(k, i, j).value() * values(W[k]);
    return v;
  });
}

Eigen::VectorXd LocalImmersion::normal_derivative_of_B(int k, int i, int j) const {
  Eigen::VectorXd v = values(normal_part(covariant(B_[i * m_ + j], k)));
  for (int l = 0; l < m_; ++l) {
    v -= source_->christoffel(l, k, i).value() * values(B_[l * m_ + j]);
    v -= source_->christoffel(l, k, j).value() * values(B_[i * m_ + l]);
  }
  return v;
}

std::vector<Jet> LocalImmersion::shape_H_jets() const {
  std::vector<Jet> hbH(m_ * m_, Jet(0.0));
  for (int l = 0; l < m_; ++l)
    for (int i = 0; i < m_; ++i) {
      Jet s(0.0);
      for (int a = 0; a < nc_; ++a) {
        Jet hv(0.0);
        for (int b = 0; b < nc_; ++b) hv += target_.h[a * nc_ + b] * tau_[b];
        s += B_[l * m_ + i][a] * hv;
      }
      hbH[l * m_ + i] = s / m_;
    }
  std::vector<Jet> A(m_ * m_, Jet(0.0));
  for (int k = 0; k < m_; ++k)
    for (int i = 0; i < m_; ++i)
      for (int l = 0; l < m_; ++l) A[k * m_ + i] += source_->inverse(k, l) * hbH[l * m_ + i];
  return A;
}

Eigen::VectorXd LocalImmersion::divergence_of_shape_H() const {
  const auto A = shape_H_jets();
  // (nabla_i A)^k_j = d_i A^k_j + Gamma^k_il A^l_j - Gamma^l_ij A^k_l
  Eigen::VectorXd div = Eigen::VectorXd::Zero(m_);
  for (int k = 0; k < m_; ++k)
    div[k] = frame_trace([&](int i, int j) {
      double v = A[k * m_ + j].derivative(i).value();
      for (int l = 0; l < m_; ++l) {
        v += source_->christoffel(k, i, l).value() * A[l * m_ + j].value();
        v -= source_->christoffel(l, i, j).value() * A[k * m_ + l].value();
      }
      return v;
    });
  return push(div);
}

Eigen::VectorXd LocalImmersion::shape_of_normal_derivative_H() const {
  Section H(nc_);
  for (int a = 0; a < nc_; ++a) H[a] = tau_[a] / m_;
  std::vector<Eigen::VectorXd> DH(m_);
  for (int i = 0; i < m_; ++i) DH[i] = values(normal_covariant(H, i));
  const Eigen::MatrixXd ginv = source_->inverse_value();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (int a = 0; a < m_; ++a) {
    Eigen::VectorXd N = Eigen::VectorXd::Zero(nc_);
    for (int i = 0; i < m_; ++i) N += frame_(i, a) * DH[i];
    Eigen::MatrixXd hb(m_, m_);
    for (int l = 0; l < m_; ++l)
      for (int i = 0; i < m_; ++i) hb(l, i) = inner(values(B_[l * m_ + i]), N);
    out += ginv * hb * frame_.col(a);
  }
  return push(out);
}

Eigen::VectorXd LocalImmersion::second_fundamental_of_shape_H() const {
  const auto A = shape_H_jets();
  Eigen::MatrixXd A0(m_, m_);
  for (int k = 0; k < m_; ++k)
    for (int i = 0; i < m_; ++i) A0(k, i) = A[k * m_ + i].value();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nc_);
  for (int a = 0; a < m_; ++a) {
    const Eigen::VectorXd Ae = A0 * frame_.col(a);
    for (int k = 0; k < m_; ++k)
      for (int j = 0; j < m_; ++j) out += Ae[k] * frame_(j, a) * values(B_[k * m_ + j]);
  }
  return out;
}

SplitResiduals LocalImmersion::biharmonic_split() const {
  if (order_ < 4) throw DerivativeError("biharmonic splitting needs a Taylor model of order >= 4");
  Section H(nc_);
  for (int a = 0; a < nc_; ++a) H[a] = tau_[a] / m_;
  const Eigen::VectorXd RH = curvature_term(values(H));
  SplitResiduals r;
  r.tangential = divergence_of_shape_H() + shape_of_normal_derivative_H() - tangent_value(RH);
  r.normal = normal_laplacian(H) + second_fundamental_of_shape_H() - normal_value(RH);
  return r;
}

double LocalImmersion::tangent_divergence(const Section& W) const {
  if (static_cast<int>(W.size()) != nc_) throw DimensionMismatch("tangent_divergence: wrong section size");
  // X^k = g^kl h(dphi_l, W)
  std::vector<Jet> X(m_, Jet(0.0));
  for (int l = 0; l < m_; ++l) {
    Jet s(0.0);
    for (int a = 0; a < nc_; ++a)
      for (int b = 0; b < nc_; ++b) s += dphi(a, l) * target_.h[a * nc_ + b] * W[b];
    for (int k = 0; k < m_; ++k) X[k] += source_->inverse(k, l) * s;
  }
  double div = 0.0;
  for (int k = 0; k < m_; ++k) {
    if (!X[k].is_constant()) div += X[k].derivative(k).value();
    for (int l = 0; l < m_; ++l) div += source_->christoffel(k, k, l).value() * X[l].value();
  }
  return div;
}

Eigen::VectorXd LocalImmersion::coordinate_laplacians() const {
  Eigen::VectorXd out(nc_);
  for (int a = 0; a < nc_; ++a)
    out[a] = -frame_trace([&](int i, int j) {
      double v = dphi(a, j).derivative(i).value();
      for (int k = 0; k < m_; ++k) v -= source_->christoffel(k, i, j).value() * dphi(a, k).value();
      return v;
    });
  return out;
}

PullbackData pullback_metric_and_differential(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 2);
  return {L.metric(), L.differential()};
}

SecondFundamentalData second_fundamental_form(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 2);
  auto d = L.second_fundamental_data();
  const int m = L.m();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Eigen::VectorXd t = L.push(Eigen::VectorXd::Unit(m, k));
        const double scale = std::max(1.0, L.norm(d.b(i, j, m)) * L.norm(t));
        if (std::abs(L.inner(d.b(i, j, m), t)) > 1e-8 * scale)
          throw DerivativeError(phi.label + ": second fundamental form is not normal (non-isometric data?)");
      }
  return d;
}

Eigen::VectorXd pullback_connection(const Immersion& phi, const SmoothMap& V, const Eigen::VectorXd& X,
                                    const Point& x, const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 2);
  return L.covariant_along(L.section_model(V, 1), X);
}

Eigen::VectorXd rough_laplacian(const Immersion& phi, const SmoothMap& V, const Point& x,
                                const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 3);
  return L.rough_laplacian(L.section_model(V, 2));
}

CurvatureAndJacobi curvature_operator_and_jacobi(const Immersion& phi, const SmoothMap& V, const Point& x,
                                                 const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 3);
  const Section s = L.section_model(V, 2);
  const Eigen::VectorXd R = L.curvature_term(values(s));
  return {R, L.rough_laplacian(s) - R};
}

Eigen::VectorXd bitension(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg) {
  return LocalImmersion(phi, x, cfg).bitension();
}

ShapeAndNormal shape_and_normal_calculus(const Immersion& phi, const SmoothMap& zeta, const Eigen::VectorXd& X,
                                         const Point& x, const DifferentiationConfig& cfg) {
  const LocalImmersion L(phi, x, cfg, 3);
  const Section z = L.section_model(zeta, 2);
  ShapeAndNormal out;
  out.shape = L.shape_operator(values(z)) * X;
  out.normal_derivative = Eigen::VectorXd::Zero(L.coords());
  for (int i = 0; i < L.m(); ++i) out.normal_derivative += X[i] * values(L.normal_covariant(z, i));
  out.normal_laplacian = L.normal_laplacian(z);
  return out;
}

SplitResiduals biharmonic_split_residuals(const Immersion& phi, const Point& x, const DifferentiationConfig& cfg) {
  return LocalImmersion(phi, x, cfg).biharmonic_split();
}

}  // namespace conelift
