#include "conelift/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace conelift {

namespace {

// Monomials of exactly degree d in n variables, in lexicographically
// descending order of the exponent vector.
void monomials_of_degree(int n, int d, std::vector<std::vector<int>>& out) {
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == n - 1) {
      e[var] = remaining;
      out.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = k;
      self(self, var + 1, remaining - k);
    }
    e[var] = 0;
  };
  if (n == 0) {
    if (d == 0) out.emplace_back();
    return;
  }
  rec(rec, 0, d);
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 0 || order < 0) throw std::invalid_argument("JetLayout: negative size");
  prefix_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    monomials_of_degree(nvars, d, exponents_);
    prefix_[d] = static_cast<int>(exponents_.size());
  }
  const int size = static_cast<int>(exponents_.size());
  degree_.resize(size);
  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < size; ++i) {
    degree_[i] = std::accumulate(exponents_[i].begin(), exponents_[i].end(), 0);
    lookup.emplace(exponents_[i], i);
  }
  raise_.assign(static_cast<std::size_t>(size) * std::max(nvars, 1), -1);
  parent_.assign(size, -1);
  parent_var_.assign(size, -1);
  for (int i = 0; i < size; ++i) {
    for (int v = 0; v < nvars; ++v) {
      auto e = exponents_[i];
      ++e[v];
      if (auto it = lookup.find(e); it != lookup.end()) raise_[i * nvars + v] = it->second;
      if (exponents_[i][v] > 0 && parent_[i] < 0) {
        auto p = exponents_[i];
        --p[v];
        parent_[i] = lookup.at(p);
        parent_var_[i] = v;
      }
    }
  }
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      std::vector<int> e(nvars);
      for (int v = 0; v < nvars; ++v) e[v] = exponents_[a][v] + exponents_[b][v];
      products_.push_back({a, b, lookup.at(e)});
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
  return slot;
}

int JetLayout::index_of(std::span<const int> exps) const {
  int deg = 0;
  for (int e : exps) deg += e;
  if (deg > order_) return -1;
  int idx = 0;
  for (int v = 0; v < nvars_; ++v) {
    for (int k = 0; k < exps[v]; ++k) idx = raise(idx, v);
  }
  return idx;
}

Jet::Jet(LayoutPtr layout, std::vector<double> coeffs) : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {
  if (layout_ && static_cast<int>(coeffs_.size()) != layout_->size())
    throw std::invalid_argument("Jet: coefficient count does not match layout");
}

Jet Jet::variable(const LayoutPtr& layout, int var, double value) {
  Jet j = constant(layout, value);
  if (layout->order() >= 1) j.coeffs_[layout->raise(0, var)] = 1.0;
  return j;
}

Jet Jet::constant(const LayoutPtr& layout, double value) {
  std::vector<double> c(layout->size(), 0.0);
  c[0] = value;
  return Jet(layout, std::move(c));
}

int Jet::nvars() const { return layout_ ? layout_->nvars() : 0; }
int Jet::order() const { return layout_ ? layout_->order() : 0; }

double Jet::coeff(std::span<const int> exps) const {
  if (!layout_) {
    for (int e : exps)
      if (e != 0) return 0.0;
    return coeffs_[0];
  }
  const int idx = layout_->index_of(exps);
  return idx < 0 ? 0.0 : coeffs_[idx];
}

double Jet::partial(std::span<const int> alpha) const {
  double factorial = 1.0;
  for (int e : alpha)
    for (int k = 2; k <= e; ++k) factorial *= k;
  return factorial * coeff(alpha);
}

Jet Jet::derivative(int var) const {
  if (!layout_) return Jet(0.0);
  if (layout_->order() == 0) throw std::logic_error("Jet::derivative: order-0 jet carries no derivative");
  auto out_layout = JetLayout::get(layout_->nvars(), layout_->order() - 1);
  std::vector<double> c(out_layout->size(), 0.0);
  for (int i = 0; i < out_layout->size(); ++i) {
    const int up = layout_->raise(i, var);
    c[i] = coeffs_[up] * (layout_->exponents(up)[var]);
  }
  return Jet(out_layout, std::move(c));
}

Jet Jet::truncated(int order) const {
  if (!layout_ || order >= layout_->order()) return *this;
  auto out_layout = JetLayout::get(layout_->nvars(), order);
  return Jet(out_layout, std::vector<double>(coeffs_.begin(), coeffs_.begin() + out_layout->size()));
}

Jet Jet::lifted(const LayoutPtr& layout) const {
  if (layout_ && layout_->nvars() != layout->nvars()) throw std::invalid_argument("Jet::lifted: nvars mismatch");
  std::vector<double> c(layout->size(), 0.0);
  const int n = std::min<int>(c.size(), coeffs_.size());
  std::copy_n(coeffs_.begin(), n, c.begin());
  return Jet(layout, std::move(c));
}

Jet Jet::increment() const {
  Jet out = *this;
  out.coeffs_[0] = 0.0;
  return out;
}

namespace {

// Brings two jets to a common layout (the smaller order); constants stay
// constants.
LayoutPtr common_layout(const LayoutPtr& a, const LayoutPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a->nvars() != b->nvars()) throw std::invalid_argument("Jet: mixing jets in different variable counts");
  return a->order() <= b->order() ? a : b;
}

}  // namespace

Jet& Jet::operator+=(const Jet& rhs) {
  auto layout = common_layout(layout_, rhs.layout_);
  if (!layout) {
    coeffs_[0] += rhs.coeffs_[0];
    return *this;
  }
  if (layout_ != layout) *this = layout_ ? truncated(layout->order()) : lifted(layout);
  const int n = std::min<int>(coeffs_.size(), rhs.coeffs_.size());
  for (int i = 0; i < n; ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  auto layout = common_layout(layout_, rhs.layout_);
  if (!layout) {
    coeffs_[0] -= rhs.coeffs_[0];
    return *this;
  }
  if (layout_ != layout) *this = layout_ ? truncated(layout->order()) : lifted(layout);
  const int n = std::min<int>(coeffs_.size(), rhs.coeffs_.size());
  for (int i = 0; i < n; ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.is_constant()) return b * a.value();
  if (b.is_constant()) return a * b.value();
  auto layout = common_layout(a.layout_, b.layout_);
  std::vector<double> c(layout->size(), 0.0);
  const double* ac = a.coeffs_.data();
  const double* bc = b.coeffs_.data();
  for (const auto& p : layout->products()) c[p.out] += ac[p.lhs] * bc[p.rhs];
  return Jet(layout, std::move(c));
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_constant()) return a * (1.0 / b.value());
  return a * pow(b, -1.0);
}

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet apply_series(const Jet& x, std::span<const double> taylor) {
  if (x.is_constant()) return Jet(taylor[0]);
  const int k = std::min<int>(x.order(), static_cast<int>(taylor.size()) - 1);
  const Jet dx = x.increment();
  // Horner in the nilpotent increment.
  Jet acc = Jet::constant(x.layout(), taylor[k]);
  for (int i = k - 1; i >= 0; --i) {
    acc = acc * dx;
    acc.coeffs_[0] += taylor[i];
  }
  return acc;
}

namespace {

int series_length(const Jet& x) { return x.is_constant() ? 1 : x.order() + 1; }

}  // namespace

Jet sin(const Jet& x) {
  const int n = series_length(x);
  std::vector<double> t(n);
  const double s = std::sin(x.value()), c = std::cos(x.value());
  double fact = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    const double d[4] = {s, c, -s, -c};
    t[k] = d[k % 4] / fact;
  }
  return apply_series(x, t);
}

Jet cos(const Jet& x) {
  const int n = series_length(x);
  std::vector<double> t(n);
  const double s = std::sin(x.value()), c = std::cos(x.value());
  double fact = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    const double d[4] = {c, -s, -c, s};
    t[k] = d[k % 4] / fact;
  }
  return apply_series(x, t);
}

Jet exp(const Jet& x) {
  const int n = series_length(x);
  std::vector<double> t(n);
  const double e = std::exp(x.value());
  double fact = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    t[k] = e / fact;
  }
  return apply_series(x, t);
}

Jet log(const Jet& x) {
  const int n = series_length(x);
  std::vector<double> t(n);
  const double x0 = x.value();
  t[0] = std::log(x0);
  // d^k/dx^k log x / k! = (-1)^(k-1) / (k x^k)
  for (int k = 1; k < n; ++k) t[k] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x0, k));
  return apply_series(x, t);
}

Jet pow(const Jet& x, double p) {
  const int n = series_length(x);
  std::vector<double> t(n);
  const double x0 = x.value();
  // binomial(p, k) x0^(p-k)
  double binom = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) binom *= (p - (k - 1)) / k;
    t[k] = binom * std::pow(x0, p - k);
  }
  return apply_series(x, t);
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet atan(const Jet& x) {
  // atan' = 1 / (1 + x^2); integrate the series of the derivative.
  if (x.is_constant()) return Jet(std::atan(x.value()));
  const double x0 = x.value();
  // The univariate series of 1/(1+s^2) at x0, integrated term by term.
  const Jet s = Jet::variable(JetLayout::get(1, x.order()), 0, x0);
  const Jet ds = pow(1.0 + s * s, -1.0);
  std::vector<double> t(x.order() + 1);
  t[0] = std::atan(x0);
  for (int k = 1; k <= x.order(); ++k) t[k] = ds.coeff(k - 1) / k;
  return apply_series(x, t);
}

std::vector<Jet> seed_variables(const LayoutPtr& layout, std::span<const double> x0) {
  std::vector<Jet> out;
  out.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out.push_back(Jet::variable(layout, static_cast<int>(i), x0[i]));
  return out;
}

Composer::Composer(std::vector<Jet> increments, int max_degree) {
  const int n = static_cast<int>(increments.size());
  for (const Jet& d : increments) {
    if (!d.is_constant()) {
      if (out_layout_ && out_layout_ != d.layout()) {
        if (out_layout_->nvars() != d.nvars()) throw std::invalid_argument("Composer: mixed variable counts");
        if (d.order() < out_layout_->order()) out_layout_ = d.layout();
      } else if (!out_layout_) {
        out_layout_ = d.layout();
      }
    }
  }
  if (!out_layout_) throw std::invalid_argument("Composer: increments carry no variables");
  const int degree = std::min(max_degree, out_layout_->order());
  poly_layout_ = JetLayout::get(n, degree);
  powers_.reserve(poly_layout_->size());
  powers_.push_back(Jet::constant(out_layout_, 1.0));
  for (int idx = 1; idx < poly_layout_->size(); ++idx) {
    const int parent = poly_layout_->parent(idx);
    const Jet& d = increments[poly_layout_->parent_var(idx)];
    powers_.push_back(powers_[parent] * d);
  }
}

Jet Composer::compose(const Jet& poly) const {
  std::vector<double> c(out_layout_->size(), 0.0);
  const int terms = poly.is_constant() ? 1 : std::min<int>(poly_layout_->size(), poly.coeffs().size());
  if (!poly.is_constant() && poly.nvars() != poly_layout_->nvars())
    throw std::invalid_argument("Composer::compose: polynomial variable count mismatch");
  for (int idx = 0; idx < terms; ++idx) {
    const double a = poly.coeff(idx);
    if (a == 0.0) continue;
    const auto pc = powers_[idx].coeffs();
    for (std::size_t i = 0; i < pc.size(); ++i) c[i] += a * pc[i];
  }
  Jet out(out_layout_, std::move(c));
  // Degree-d output terms only see polynomial terms of degree <= d.
  if (!poly.is_constant() && poly.order() < out_layout_->order()) return out.truncated(poly.order());
  return out;
}

}  // namespace conelift
