#include "conelift/charts.hpp"

#include <cmath>
#include <numbers>

#include "conelift/errors.hpp"

namespace conelift {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ChartManifold euclidean_chart(int dim, double half_width) {
  Box box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
  auto metric = make_map(dim, dim * dim, [dim](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> g(dim * dim, T(0.0));
    for (int i = 0; i < dim; ++i) g[i * dim + i] = T(1.0);
    return g;
  });
  return ChartManifold("R^" + std::to_string(dim), dim, std::move(box), std::move(metric));
}

ChartManifold round_sphere_chart(int n) {
  if (n < 1) throw DimensionMismatch("round_sphere_chart: n >= 1");
  Box box;
  for (int i = 0; i < n; ++i) {
    const bool last = i == n - 1;
    box.lower.push_back(last ? -kPi : 0.0);
    box.upper.push_back(last ? kPi : kPi);
  }
  auto metric = make_map(n, n * n, [n](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> g(n * n, T(0.0));
    T w(1.0);
    for (int i = 0; i < n; ++i) {
      g[i * n + i] = w;
      w = w * sin(x[i]) * sin(x[i]);
    }
    return g;
  });
  return ChartManifold("S^" + std::to_string(n), n, std::move(box), std::move(metric));
}

SmoothMap round_sphere_embedding(int n) {
  return make_map(n, n + 1, [n](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> p(n + 1);
    T prod(1.0);
    for (int i = 0; i < n; ++i) {
      p[i] = prod * cos(x[i]);
      prod = prod * sin(x[i]);
    }
    p[n] = prod;
    return p;
  });
}

ChartManifold flat_torus_chart(int n) {
  Box box{std::vector<double>(n, -kPi), std::vector<double>(n, kPi)};
  auto metric = make_map(n, n * n, [n](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> g(n * n, T(0.0));
    for (int i = 0; i < n; ++i) g[i * n + i] = T(1.0);
    return g;
  });
  return ChartManifold("T^" + std::to_string(n), n, std::move(box), std::move(metric));
}

Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& v) {
  const int N = static_cast<int>(v.size());
  const Eigen::VectorXd u = v.normalized();
  // Householder-free completion: QR of [u | I].
  Eigen::MatrixXd A(N, N + 1);
  A.col(0) = u;
  A.rightCols(N) = Eigen::MatrixXd::Identity(N, N);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  // First column of Q is +-u; the rest span the complement.
  Eigen::MatrixXd E = Q.rightCols(N - 1);
  // Orient deterministically: make the first nonzero entry of each column positive.
  for (int c = 0; c < E.cols(); ++c) {
    int r = 0;
    while (r < N && std::abs(E(r, c)) < 1e-12) ++r;
    if (r < N && E(r, c) < 0) E.col(c) = -E.col(c);
  }
  return E;
}

StereographicChart StereographicChart::centered_at(const Eigen::VectorXd& center) {
  if (std::abs(center.norm() - 1.0) > 1e-9) throw DomainError("stereographic chart centre must lie on the unit sphere");
  return {center, orthonormal_complement(center)};
}

ChartManifold StereographicChart::chart() const {
  const int n = dim();
  Box box{std::vector<double>(n, -2.0), std::vector<double>(n, 2.0)};
  auto metric = make_map(n, n * n, [n](auto u) {
    using T = std::decay_t<decltype(u[0])>;
    T s(0.0);
    for (int i = 0; i < n; ++i) s = s + u[i] * u[i];
    const T w = 4.0 * pow(1.0 + s, -2.0);
    std::vector<T> g(n * n, T(0.0));
    for (int i = 0; i < n; ++i) g[i * n + i] = w;
    return g;
  });
  return ChartManifold("S^" + std::to_string(n) + "/stereo", n, std::move(box), std::move(metric));
}

SmoothMap StereographicChart::embedding() const {
  const int n = dim();
  const Eigen::VectorXd c = center;
  const Eigen::MatrixXd E = basis;
  return make_map(n, n + 1, [n, c, E](auto u) {
    using T = std::decay_t<decltype(u[0])>;
    T s(0.0);
    for (int i = 0; i < n; ++i) s = s + u[i] * u[i];
    const T inv = pow(1.0 + s, -1.0);
    std::vector<T> p(n + 1);
    for (int a = 0; a <= n; ++a) {
      T acc = (1.0 - s) * c[a];
      for (int i = 0; i < n; ++i) acc = acc + 2.0 * E(a, i) * u[i];
      p[a] = acc * inv;
    }
    return p;
  });
}

SmoothMap StereographicChart::embedding_jacobian() const {
  const int n = dim();
  const Eigen::VectorXd c = center;
  const Eigen::MatrixXd E = basis;
  return make_map(n, (n + 1) * n, [n, c, E](auto u) {
    using T = std::decay_t<decltype(u[0])>;
    T s(0.0);
    for (int i = 0; i < n; ++i) s = s + u[i] * u[i];
    const T inv = pow(1.0 + s, -1.0);
    const T inv2 = inv * inv;
    // d sigma / d u_j = -4 u_j/(1+s)^2 c + 2/(1+s) E e_j - 4 u_j/(1+s)^2 E u
    std::vector<T> Eu(n + 1, T(0.0));
    for (int a = 0; a <= n; ++a)
      for (int i = 0; i < n; ++i) Eu[a] = Eu[a] + E(a, i) * u[i];
    std::vector<T> J((n + 1) * n);
    for (int a = 0; a <= n; ++a)
      for (int j = 0; j < n; ++j) J[a * n + j] = -4.0 * u[j] * inv2 * (c[a] + Eu[a]) + 2.0 * E(a, j) * inv;
    return J;
  });
}

SmoothMap StereographicChart::coordinates() const {
  const int n = dim();
  const Eigen::VectorXd c = center;
  const Eigen::MatrixXd E = basis;
  return make_map(n + 1, n, [n, c, E](auto p) {
    using T = std::decay_t<decltype(p[0])>;
    T dot(0.0);
    for (int a = 0; a <= n; ++a) dot = dot + c[a] * p[a];
    const T inv = pow(1.0 + dot, -1.0);
    std::vector<T> u(n);
    for (int i = 0; i < n; ++i) {
      T acc(0.0);
      for (int a = 0; a <= n; ++a) acc = acc + E(a, i) * p[a];
      u[i] = acc * inv;
    }
    return u;
  });
}

}  // namespace conelift
