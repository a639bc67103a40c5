#include "conelift/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "conelift/errors.hpp"

namespace conelift {

double Box::clearance(std::span<const double> x) const {
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim(); ++i) c = std::min({c, x[i] - lower[i], upper[i] - x[i]});
  return c;
}

Point Box::center() const {
  Point c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
  return c;
}

ChartManifold::ChartManifold(std::string name, int dim, Box domain, SmoothMap metric)
    : name_(std::move(name)), dim_(dim), domain_(std::move(domain)), metric_(std::move(metric)) {
  if (dim_ < 1) throw DimensionMismatch("ChartManifold: dimension must be >= 1");
  if (domain_.dim() != dim_) throw DimensionMismatch("ChartManifold: domain box dimension");
  if (metric_.in_dim() != dim_ || metric_.out_dim() != dim_ * dim_)
    throw DimensionMismatch("ChartManifold: metric callable must map dim -> dim*dim");
}

void ChartManifold::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch(name_ + ": point has wrong dimension");
  if (domain_.clearance(x) < kDomainMargin) {
    std::ostringstream os;
    os << name_ << ": point within " << kDomainMargin << " of the chart boundary";
    throw DomainError(os.str());
  }
}

Eigen::MatrixXd ChartManifold::metric_at(std::span<const double> x) const {
  const auto v = metric_(x);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), dim_, dim_).transpose();
}

TensorValue::TensorValue(std::vector<int> shp, std::string var) : shape(std::move(shp)), variance(std::move(var)) {
  std::size_t n = 1;
  for (int s : shape) n *= s;
  data.assign(n, 0.0);
}

namespace {

std::size_t flat_index(const std::vector<int>& shape, std::initializer_list<int> idx) {
  if (idx.size() != shape.size()) throw DimensionMismatch("TensorValue: index rank mismatch");
  std::size_t f = 0;
  int k = 0;
  for (int i : idx) {
    if (i < 0 || i >= shape[k]) throw DimensionMismatch("TensorValue: index out of range");
    f = f * shape[k++] + i;
  }
  return f;
}

}  // namespace

double& TensorValue::at(std::initializer_list<int> idx) { return data[flat_index(shape, idx)]; }
double TensorValue::at(std::initializer_list<int> idx) const { return data[flat_index(shape, idx)]; }

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

void validate_metric(const Eigen::MatrixXd& g, const std::string& where) {
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw SingularMetric(where + ": metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-14 * scale)) throw SingularMetric(where + ": metric is not positive definite");
}

std::vector<Jet> invert(std::span<const Jet> a, int n) {
  std::vector<Jet> m(a.begin(), a.end());
  std::vector<Jet> inv(static_cast<std::size_t>(n) * n, Jet(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Jet(1.0);
  double scale = 0.0;
  for (const Jet& x : m) scale = std::max(scale, std::abs(x.value()));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col].value()) > std::abs(m[piv * n + col].value())) piv = r;
    if (!(std::abs(m[piv * n + col].value()) > 1e-14 * std::max(scale, 1e-300)))
      throw SingularMetric("matrix is singular at the base point");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m[piv * n + c], m[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    }
    const Jet p = pow(m[col * n + col], -1.0);
    for (int c = 0; c < n; ++c) {
      m[col * n + c] = m[col * n + c] * p;
      inv[col * n + c] = inv[col * n + c] * p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = m[r * n + col];
      if (f.is_constant() && f.value() == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m[r * n + c] -= f * m[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

LocalMetric::LocalMetric(int dim, std::vector<Jet> metric) : dim_(dim), g_(std::move(metric)) {
  if (static_cast<int>(g_.size()) != dim * dim) throw DimensionMismatch("LocalMetric: expected dim*dim jets");
  order_ = 0;
  for (const Jet& j : g_) order_ = std::max(order_, j.order());
  if (order_ < 1) throw DerivativeError("LocalMetric: metric model must have order >= 1");
  validate_metric(metric_value(), "LocalMetric");
  inv_ = invert(g_, dim);
  // dg[l][i][j] = d_l g_ij
  std::vector<Jet> dg(static_cast<std::size_t>(dim) * dim * dim);
  for (int l = 0; l < dim; ++l)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) dg[(l * dim + i) * dim + j] = g(i, j).derivative(l);
  auto D = [&](int l, int i, int j) -> const Jet& { return dg[(l * dim + i) * dim + j]; };
  gamma_.assign(static_cast<std::size_t>(dim) * dim * dim, Jet(0.0));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      // lowered Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
      std::vector<Jet> low(dim);
      for (int l = 0; l < dim; ++l) low[l] = 0.5 * (D(i, j, l) + D(j, i, l) - D(l, i, j));
      for (int k = 0; k < dim; ++k) {
        Jet acc(0.0);
        for (int l = 0; l < dim; ++l) acc += inverse(k, l) * low[l];
        gamma_[(k * dim + i) * dim + j] = acc;
        gamma_[(k * dim + j) * dim + i] = acc;
      }
    }
  }
}

Eigen::MatrixXd LocalMetric::metric_value() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = g(i, j).value();
  return m;
}

Eigen::MatrixXd LocalMetric::inverse_value() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = inverse(i, j).value();
  return m;
}

TensorValue LocalMetric::riemann() const {
  if (order_ < 2) throw DerivativeError("LocalMetric::riemann: metric model must have order >= 2");
  const int n = dim_;
  TensorValue R({n, n, n, n}, "^___");
  // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = christoffel(l, j, k).derivative(i).value() - christoffel(l, i, k).derivative(j).value();
          for (int m = 0; m < n; ++m)
            v += christoffel(l, i, m).value() * christoffel(m, j, k).value() -
                 christoffel(l, j, m).value() * christoffel(m, i, k).value();
          R.at({l, i, j, k}) = v;
        }
  return R;
}

LocalMetric local_metric(const ChartManifold& M, std::span<const double> x, int order,
                         const DifferentiationConfig& cfg) {
  cfg.validate();
  M.check_point(x);
  return LocalMetric(M.dim(), taylor_model(M.metric(), x, order, cfg));
}

TensorValue christoffel(const ChartManifold& M, const Point& x, const DifferentiationConfig& cfg) {
  const auto lm = local_metric(M, std::span<const double>(x.data(), x.size()), 1, cfg);
  const int n = M.dim();
  TensorValue G({n, n, n}, "^__");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G.at({k, i, j}) = lm.christoffel(k, i, j).value();
  return G;
}

Eigen::MatrixXd gram_schmidt_frame(const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v = e.col(a);
    for (int b = 0; b < a; ++b) v -= (e.col(b).dot(g * v)) * e.col(b);
    const double nv = std::sqrt(v.dot(g * v));
    if (!(nv > 0.0)) throw SingularMetric("Gram-Schmidt: degenerate direction");
    e.col(a) = v / nv;
  }
  return e;
}

OrthonormalFrame orthonormal_frame(const ChartManifold& M, const Point& x) {
  M.check_point(std::span<const double>(x.data(), x.size()));
  const Eigen::MatrixXd g = M.metric_at(std::span<const double>(x.data(), x.size()));
  validate_metric(g, M.name());
  return {x, gram_schmidt_frame(g)};
}

TensorValue ricci_from_riemann(const TensorValue& riemann, const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  TensorValue ricci({n, n}, "__");
  const Eigen::MatrixXd e = gram_schmidt_frame(g);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) {
        Eigen::VectorXd Rv = Eigen::VectorXd::Zero(n);
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i) Rv[l] += e(i, a) * riemann.at({l, i, j, k});
        ric += Rv.dot(g * e.col(a));
      }
      ricci.at({j, k}) = ric;
    }
  return ricci;
}

CurvatureTensors riemann_and_ricci(const ChartManifold& M, const Point& x, const DifferentiationConfig& cfg) {
  const auto lm = local_metric(M, std::span<const double>(x.data(), x.size()), 2, cfg);
  auto R = lm.riemann();
  auto Ric = ricci_from_riemann(R, lm.metric_value());
  return {std::move(R), std::move(Ric)};
}

double frame_trace(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& components) {
  double t = 0.0;
  for (int a = 0; a < frame.cols(); ++a) t += frame.col(a).dot(components * frame.col(a));
  return t;
}

ScalarCalculus scalar_calculus(const ChartManifold& M, const SmoothMap& f, const Point& x,
                               const DifferentiationConfig& cfg) {
  if (f.in_dim() != M.dim() || f.out_dim() != 1) throw DimensionMismatch("scalar_calculus: f must map dim -> 1");
  const std::span<const double> xs(x.data(), x.size());
  const auto lm = local_metric(M, xs, 1, cfg);
  const Jet F = taylor_model(f, xs, 2, cfg)[0];
  const int n = M.dim();
  Eigen::VectorXd df(n);
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i) df[i] = F.derivative(i).value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double h = F.derivative(j).derivative(i).value();
      for (int k = 0; k < n; ++k) h -= lm.christoffel(k, i, j).value() * df[k];
      hess(i, j) = h;
    }
  const Eigen::MatrixXd frame = gram_schmidt_frame(lm.metric_value());
  return {lm.inverse_value() * df, -frame_trace(frame, hess)};
}

double divergence(const ChartManifold& M, const SmoothMap& V, const Point& x, const DifferentiationConfig& cfg) {
  if (V.in_dim() != M.dim() || V.out_dim() != M.dim()) throw DimensionMismatch("divergence: V must map dim -> dim");
  const std::span<const double> xs(x.data(), x.size());
  const auto lm = local_metric(M, xs, 1, cfg);
  const auto Vj = taylor_model(V, xs, 1, cfg);
  const int n = M.dim();
  // (nabla_i V)^k = d_i V^k + Gamma^k_il V^l
  Eigen::MatrixXd nabla(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double v = Vj[k].derivative(i).value();
      for (int l = 0; l < n; ++l) v += lm.christoffel(k, i, l).value() * Vj[l].value();
      nabla(k, i) = v;
    }
  // sum_a g(e_a, nabla_{e_a} V)
  const Eigen::MatrixXd g = lm.metric_value();
  const Eigen::MatrixXd e = gram_schmidt_frame(g);
  double div = 0.0;
  for (int a = 0; a < n; ++a) div += e.col(a).dot(g * (nabla * e.col(a)));
  return div;
}

}  // namespace conelift
