#include "conelift/differentiation.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "conelift/errors.hpp"

namespace conelift {

void DifferentiationConfig::validate() const {
  if (mode == DiffMode::Jet && jet_order < 4)
    throw ConfigError("jet_order must be >= 4 (bitension needs four derivative orders)");
  if (jet_order < 1) throw ConfigError("jet_order must be positive");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be positive");
  if (fd_richardson_levels < 0) throw ConfigError("fd_richardson_levels must be >= 0");
}

double DifferentiationConfig::step_for_order(int k) const {
  if (k <= 1) return fd_step;
  return std::pow(fd_step, 3.0 / (k + 2));
}

std::string DifferentiationConfig::describe() const {
  std::ostringstream os;
  if (mode == DiffMode::Jet) {
    os << "jet(order=" << jet_order << ")";
  } else {
    os << "central-difference(step=" << fd_step << ",richardson=" << fd_richardson_levels << ")";
  }
  return os.str();
}

DifferentiationConfig DifferentiationConfig::jet(int order) {
  DifferentiationConfig cfg;
  cfg.mode = DiffMode::Jet;
  cfg.jet_order = order;
  return cfg;
}

DifferentiationConfig DifferentiationConfig::central(double step, int richardson) {
  DifferentiationConfig cfg;
  cfg.mode = DiffMode::CentralDifference;
  cfg.fd_step = step;
  cfg.fd_richardson_levels = richardson;
  return cfg;
}

SmoothMap::SmoothMap(int in_dim, int out_dim, DoubleFn fd, JetFn fj)
    : in_dim_(in_dim), out_dim_(out_dim), fd_(std::move(fd)), fj_(std::move(fj)) {}

std::vector<double> SmoothMap::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != in_dim_) throw DimensionMismatch("SmoothMap: wrong argument size");
  auto out = fd_(x);
  if (static_cast<int>(out.size()) != out_dim_) throw DimensionMismatch("SmoothMap: callable returned wrong size");
  return out;
}

std::vector<Jet> SmoothMap::operator()(std::span<const Jet> x) const {
  if (static_cast<int>(x.size()) != in_dim_) throw DimensionMismatch("SmoothMap: wrong argument size");
  auto out = fj_(x);
  if (static_cast<int>(out.size()) != out_dim_) throw DimensionMismatch("SmoothMap: callable returned wrong size");
  return out;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (outer.in_dim() != inner.out_dim()) throw DimensionMismatch("compose: inner output does not match outer input");
  return SmoothMap(
      inner.in_dim(), outer.out_dim(),
      [outer, inner](std::span<const double> x) { return outer(std::span<const double>(inner(x))); },
      [outer, inner](std::span<const Jet> x) { return outer(std::span<const Jet>(inner(x))); });
}

std::vector<double> values_of(std::span<const Jet> jets) {
  std::vector<double> v(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) v[i] = jets[i].value();
  return v;
}

namespace {

// Second-order central stencil for the j-th derivative on the integer grid:
// offset -> weight (to be divided by h^j).
std::map<int, double> central_stencil(int j) {
  if (j == 0) return {{0, 1.0}};
  if (j == 1) return {{1, 0.5}, {-1, -0.5}};
  const auto d2 = std::map<int, double>{{1, 1.0}, {0, -2.0}, {-1, 1.0}};
  const auto rest = central_stencil(j - 2);
  std::map<int, double> out;
  for (const auto& [o1, w1] : d2)
    for (const auto& [o2, w2] : rest) out[o1 + o2] += w1 * w2;
  return out;
}

// d^alpha f(x0) with uniform step h, all outputs at once.
std::vector<double> stencil_partial(const SmoothMap& f, std::span<const double> x0, std::span<const int> alpha,
                                    double h) {
  const int d = static_cast<int>(alpha.size());
  std::vector<std::vector<std::pair<int, double>>> axes(d);
  int order = 0;
  for (int v = 0; v < d; ++v) {
    for (const auto& [o, w] : central_stencil(alpha[v]))
      if (w != 0.0) axes[v].emplace_back(o, w);
    order += alpha[v];
  }
  std::vector<double> acc(f.out_dim(), 0.0);
  std::vector<int> pos(d, 0);
  std::vector<double> x(x0.begin(), x0.end());
  while (true) {
    double w = 1.0;
    for (int v = 0; v < d; ++v) {
      const auto& [o, wv] = axes[v][pos[v]];
      x[v] = x0[v] + o * h;
      w *= wv;
    }
    const auto y = f(std::span<const double>(x));
    for (int k = 0; k < f.out_dim(); ++k) acc[k] += w * y[k];
    int v = 0;
    while (v < d && ++pos[v] == static_cast<int>(axes[v].size())) pos[v++] = 0;
    if (v == d) break;
  }
  const double scale = std::pow(h, -order);
  for (double& a : acc) a *= scale;
  return acc;
}

std::vector<double> richardson_partial(const SmoothMap& f, std::span<const double> x0, std::span<const int> alpha,
                                       double h, int levels) {
  std::vector<std::vector<double>> prev;
  for (int l = 0; l <= levels; ++l) {
    std::vector<std::vector<double>> row;
    row.push_back(stencil_partial(f, x0, alpha, h / std::pow(2.0, l)));
    for (int j = 1; j <= l; ++j) {
      const double factor = std::pow(4.0, j) - 1.0;
      std::vector<double> t(row[j - 1].size());
      for (std::size_t k = 0; k < t.size(); ++k) t[k] = row[j - 1][k] + (row[j - 1][k] - prev[j - 1][k]) / factor;
      row.push_back(std::move(t));
    }
    prev = std::move(row);
  }
  return prev.back();
}

}  // namespace

std::vector<Jet> taylor_model(const SmoothMap& f, std::span<const double> x0, int order,
                              const DifferentiationConfig& cfg) {
  const auto layout = JetLayout::get(f.in_dim(), order);
  if (cfg.mode == DiffMode::Jet) {
    auto seeds = seed_variables(layout, x0);
    auto out = f(std::span<const Jet>(seeds));
    for (Jet& j : out) {
      if (j.is_constant() || j.order() < order) j = j.lifted(layout);
    }
    return out;
  }
  std::vector<std::vector<double>> coeffs(f.out_dim(), std::vector<double>(layout->size(), 0.0));
  for (int idx = 0; idx < layout->size(); ++idx) {
    const auto& alpha = layout->exponents(idx);
    const int k = layout->degree(idx);
    std::vector<double> d;
    if (k == 0) {
      d = f(x0);
    } else {
      d = richardson_partial(f, x0, alpha, cfg.step_for_order(k), cfg.fd_richardson_levels);
    }
    double factorial = 1.0;
    for (int e : alpha)
      for (int q = 2; q <= e; ++q) factorial *= q;
    for (int o = 0; o < f.out_dim(); ++o) {
      if (!std::isfinite(d[o])) throw DerivativeError("central difference produced a non-finite value");
      coeffs[o][idx] = d[o] / factorial;
    }
  }
  std::vector<Jet> out;
  out.reserve(f.out_dim());
  for (auto& c : coeffs) out.emplace_back(layout, std::move(c));
  return out;
}

std::vector<Jet> along(const SmoothMap& f, std::span<const Jet> y, int order, const DifferentiationConfig& cfg) {
  const auto y0 = values_of(y);
  const auto model = taylor_model(f, y0, order, cfg);
  std::vector<Jet> increments;
  increments.reserve(y.size());
  for (const Jet& j : y) increments.push_back(j.increment());
  const Composer composer(std::move(increments), order);
  std::vector<Jet> out;
  out.reserve(model.size());
  for (const Jet& p : model) out.push_back(composer.compose(p));
  return out;
}

}  // namespace conelift
