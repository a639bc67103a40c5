#include "conelift/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>

#include "conelift/errors.hpp"
#include "conelift/sasaki.hpp"

namespace conelift {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct Acc {
  double max = 0.0;
  double sum = 0.0;
  int n = 0;
  bool bad = false;

  void add(double v) {
    if (!std::isfinite(v)) {
      bad = true;
      return;
    }
    max = std::max(max, v);
    sum += v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
};

double rel(double diff, double a, double b) { return diff / std::max({1.0, a, b}); }

bool has_contact(const CatalogEntry& e) {
  return e.sasaki_m >= 1 && e.immersion.target.kind() == TargetKind::Sphere &&
         e.immersion.target.coords() == 2 * e.sasaki_m + 2;
}

std::string grid_label(const std::vector<LiftSample>& grid, bool radii) {
  std::ostringstream os;
  os << grid.size();
  if (radii && !grid.empty()) os << "x" << grid.front().radii.size();
  return os.str();
}

ReportRow make_row(const CatalogEntry& e, const std::string& identity, const std::string& grid, const Acc& a,
                   double tol, const VerifierConfig& cfg, std::string notes = {}) {
  ReportRow r;
  r.entry = e.name;
  r.identity = identity;
  r.grid = grid;
  r.residual_max = a.bad ? std::numeric_limits<double>::infinity() : a.max;
  r.residual_mean = a.mean();
  r.tolerance = tol;
  r.verdict = (!a.bad && a.max <= tol) ? "pass" : "fail";
  r.backend = cfg.backend();
  r.seed = cfg.seed;
  r.notes = std::move(notes);
  return r;
}

ReportRow info_row(const CatalogEntry& e, const std::string& identity, const std::string& grid, std::string verdict,
                   const VerifierConfig& cfg, std::string notes, double residual = 0.0, double tol = 0.0) {
  ReportRow r;
  r.entry = e.name;
  r.identity = identity;
  r.grid = grid;
  r.residual_max = residual;
  r.residual_mean = residual;
  r.tolerance = tol;
  r.verdict = std::move(verdict);
  r.backend = cfg.backend();
  r.seed = cfg.seed;
  r.notes = std::move(notes);
  return r;
}

double hnorm(const Eigen::VectorXd& v, const Eigen::MatrixXd& h) { return std::sqrt(std::max(0.0, v.dot(h * v))); }

void require_legendrian(const CatalogEntry& e, const std::vector<LiftSample>& grid, const VerifierConfig& cfg) {
  if (!has_contact(e)) throw NotLegendrian(e.name + ": target carries no contact structure");
  for (const auto& s : grid)
    if (!(s.legendrian <= cfg.legendrian_gate))
      throw NotLegendrian(e.name + ": Legendrian residual " + std::to_string(s.legendrian) + " above gate");
}

double max_tau(const std::vector<LiftSample>& grid) {
  double t = 0.0;
  for (const auto& s : grid) t = std::max(t, hnorm(s.tau, s.h));
  return t;
}

}  // namespace

VerifierConfig VerifierConfig::central() {
  VerifierConfig c;
  c.diff = DifferentiationConfig::central();
  for (double* t : {&c.identity_tol, &c.tau_tol, &c.tau2_tol, &c.eta_tol, &c.takahashi_tol, &c.slope_tol,
                    &c.eigen_rel_tol})
    *t = std::max(*t, 1e-3);
  c.legendrian_gate = 1e-3;
  return c;
}

void VerifierConfig::validate() const {
  diff.validate();
  if (radii.empty() || samples < 1) throw ConfigError("verifier: need at least one radius and one sample");
  for (double r : radii)
    if (!(r > 0.0)) throw ConfigError("verifier: radii must be positive");
  for (double t : {identity_tol, tau_tol, tau2_tol, eta_tol, takahashi_tol, slope_tol, eigen_rel_tol})
    if (!(t > 0.0)) throw ConfigError("verifier: tolerances must be positive");
}

std::vector<Point> halton_points(const Box& box, int count, std::uint64_t seed) {
  const int d = box.dim();
  if (d > 8) throw DimensionMismatch("halton_points: at most 8 dimensions");
  std::mt19937_64 rng(seed);
  std::vector<double> shift(d);
  for (double& s : shift) s = std::uniform_real_distribution<>(0.0, 1.0)(rng);
  std::vector<Point> out;
  for (int k = 1; k <= count; ++k) {
    Point p(d);
    for (int i = 0; i < d; ++i) {
      double u = radical_inverse(static_cast<std::uint64_t>(k), kPrimes[i]) + shift[i];
      u -= std::floor(u);
      // keep clear of the chart boundary
      u = 0.02 + 0.96 * u;
      p[i] = box.lower[i] + u * (box.upper[i] - box.lower[i]);
    }
    out.push_back(p);
  }
  return out;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Harmonic: return "harmonic";
    case Classification::ProperBiharmonic: return "proper-biharmonic";
    case Classification::Neither: return "neither";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "?";
}

Classification classify_values(double mt, double mt2, const VerifierConfig& cfg) {
  if (!std::isfinite(mt) || !std::isfinite(mt2)) return Classification::Inconclusive;
  if (mt <= cfg.tau_tol) return Classification::Harmonic;
  if (mt <= 10.0 * cfg.tau_tol) return Classification::Inconclusive;
  if (mt2 <= cfg.tau2_tol) return Classification::ProperBiharmonic;
  if (mt2 <= 10.0 * cfg.tau2_tol) return Classification::Inconclusive;
  return Classification::Neither;
}

LiftSample sample_entry(const CatalogEntry& e, const Point& x, const VerifierConfig& cfg, bool with_lift) {
  const auto& cd = cfg.diff;
  LiftSample s;
  s.x = x;
  const LocalImmersion L(e.immersion, x, cd, 4);
  s.m = L.m();
  s.h = L.target_model().h0;
  s.tau = L.tension();
  s.tau2 = L.bitension();
  s.tau2_normal = L.normal_value(s.tau2);
  const bool sphere = e.immersion.target.kind() == TargetKind::Sphere;
  if (sphere) s.takahashi = L.coordinate_laplacians() - s.m * L.phi_value();
  std::optional<ContactMetricStructure> S;
  if (has_contact(e)) {
    S = build_sasaki_sphere(e.sasaki_m);
    s.legendrian = legendrian_residual(L, *S);
    s.eta_tau = S->eta_at(L.phi_value()).dot(s.tau);
    const auto J = S->J(std::span<const Jet>(L.phi()));
    const Section& tau = L.tension_section();
    const int n = L.coords();
    Section Jtau(n, Jet(0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) Jtau[a] += J[a * n + b] * tau[b];
    s.div_J_tau = L.tangent_divergence(Jtau);
  }
  if (!with_lift) return s;
  const ConeLift CL = lift(e.immersion, x);
  for (double r : cfg.radii) {
    const LocalImmersion Lb(CL.lifted, CL.at(r), cd, 4);
    const Section& tb = Lb.tension_section();
    s.radii.push_back(r);
    s.tau_bar.push_back(CL.to_cone(values(tb)));
    s.tau2_bar.push_back(CL.to_cone(Lb.bitension()));
    s.lap_tau_bar.push_back(CL.to_cone(Lb.rough_laplacian(tb)));
    if (S) s.div_I_tau_bar.push_back(Lb.tangent_divergence(cone_complex_structure_section(CL, Lb, *S, tb)));
  }
  return s;
}

std::vector<LiftSample> sample_grid(const CatalogEntry& e, const VerifierConfig& cfg, bool with_lift) {
  cfg.validate();
  std::vector<LiftSample> out;
  for (const Point& x : halton_points(e.sample_box, cfg.samples, cfg.seed))
    out.push_back(sample_entry(e, x, cfg, with_lift));
  return out;
}

ClassifyResult classify(const CatalogEntry& e, const VerifierConfig& cfg) {
  ClassifyResult c;
  for (const auto& s : sample_grid(e, cfg, false)) {
    c.max_tau = std::max(c.max_tau, hnorm(s.tau, s.h));
    c.max_tau2 = std::max(c.max_tau2, hnorm(s.tau2, s.h));
  }
  c.verdict = classify_values(c.max_tau, c.max_tau2, cfg);
  return c;
}

ClassifyResult classify_lift(const CatalogEntry& e, const VerifierConfig& cfg) {
  ClassifyResult c;
  for (const auto& s : sample_grid(e, cfg, true))
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      c.max_tau = std::max(c.max_tau, cone_norm(s.tau_bar[k], s.h));
      c.max_tau2 = std::max(c.max_tau2, cone_norm(s.tau2_bar[k], s.h));
    }
  c.verdict = classify_values(c.max_tau, c.max_tau2, cfg);
  return c;
}

const ReportRow* VerificationReport::find(const std::string& entry, const std::string& identity) const {
  for (const auto& r : rows)
    if (r.entry == entry && r.identity == identity) return &r;
  return nullptr;
}

std::vector<const ReportRow*> VerificationReport::violations() const {
  std::vector<const ReportRow*> out;
  for (const auto& r : rows)
    if (r.verdict == "fail") out.push_back(&r);
  return out;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["entry"] = r.entry;
    j["identity"] = r.identity;
    j["grid"] = r.grid;
    j["residual_max"] = std::isfinite(r.residual_max) ? nlohmann::ordered_json(r.residual_max) : nlohmann::ordered_json("inf");
    j["residual_mean"] = r.residual_mean;
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.verdict;
    j["backend"] = r.backend;
    j["seed"] = r.seed;
    j["notes"] = r.notes;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string VerificationReport::to_csv() const {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream os;
  os << "entry,identity,grid,residual_max,residual_mean,tolerance,verdict,backend,seed,notes\n";
  os << std::setprecision(6);
  for (const auto& r : rows)
    os << quote(r.entry) << ',' << quote(r.identity) << ',' << quote(r.grid) << ',' << r.residual_max << ','
       << r.residual_mean << ',' << r.tolerance << ',' << quote(r.verdict) << ',' << quote(r.backend) << ','
       << r.seed << ',' << quote(r.notes) << '\n';
  return os.str();
}

VerificationReport verify_tension_scaling(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                          const VerifierConfig& cfg) {
  VerificationReport rep;
  Acc id;
  for (const auto& s : grid)
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      const double r = s.radii[k];
      const ConeVector rhs{0.0, s.tau / (r * r)};
      id.add(rel(cone_norm(s.tau_bar[k] - rhs, s.h), cone_norm(s.tau_bar[k], s.h), cone_norm(rhs, s.h)));
    }
  rep.rows.push_back(make_row(e, "tension-scaling", grid_label(grid, true), id, cfg.identity_tol, cfg));

  if (max_tau(grid) <= 10.0 * cfg.tau_tol) {
    rep.rows.push_back(info_row(e, "tension-slope", grid_label(grid, true), "n/a", cfg, "minimal entry"));
    return rep;
  }
  Acc slope;
  Acc fitted;
  for (const auto& s : grid) {
    const int n = static_cast<int>(s.radii.size());
    if (n < 2) throw ConfigError("tension-slope needs at least two radii");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
      const double lx = std::log(s.radii[k]);
      const double ly = std::log(hnorm(s.tau_bar[k].base, s.h));
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    slope.add(std::abs(b + 2.0));
    fitted.add(b);
  }
  std::ostringstream note;
  note << "mean fitted slope " << std::setprecision(10) << fitted.mean();
  rep.rows.push_back(make_row(e, "tension-slope", grid_label(grid, true), slope, cfg.slope_tol, cfg, note.str()));
  return rep;
}

VerificationReport verify_bitension_identity(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                             const VerifierConfig& cfg) {
  require_legendrian(e, grid, cfg);
  VerificationReport rep;
  Acc id;
  for (const auto& s : grid)
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      const double r = s.radii[k];
      const ConeVector rhs{0.0, s.tau2 / std::pow(r, 4) + (s.m / (r * r)) * s.tau};
      id.add(rel(cone_norm(s.tau2_bar[k] - rhs, s.h), cone_norm(s.tau2_bar[k], s.h), cone_norm(rhs, s.h)));
    }
  rep.rows.push_back(make_row(e, "bitension-scaling", grid_label(grid, true), id, cfg.identity_tol, cfg));
  return rep;
}

VerificationReport verify_normal_and_divergence(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                                const VerifierConfig& cfg) {
  require_legendrian(e, grid, cfg);
  VerificationReport rep;
  Acc normal, div, eta, vanishing;
  for (const auto& s : grid) {
    eta.add(std::abs(s.eta_tau));
    const LocalImmersion L(e.immersion, s.x, cfg.diff, 2);
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      const double r = s.radii[k];
      // normal bundle of C(M) in C(N) is the base normal bundle
      const Eigen::VectorXd lhs = L.normal_value(s.tau2_bar[k].base);
      const Eigen::VectorXd rhs = s.tau2_normal / std::pow(r, 4) + (s.m / (r * r)) * s.tau;
      normal.add(rel(hnorm(lhs - rhs, s.h), hnorm(lhs, s.h), hnorm(rhs, s.h)));
      vanishing.add(hnorm(lhs, s.h));
      const double dl = s.div_I_tau_bar[k], dr = s.div_J_tau / (r * r);
      div.add(rel(std::abs(dl - dr), std::abs(dl), std::abs(dr)));
    }
  }
  const std::string g = grid_label(grid, true);
  rep.rows.push_back(make_row(e, "normal-bitension", g, normal, cfg.identity_tol, cfg));
  rep.rows.push_back(make_row(e, "divergence", g, div, cfg.identity_tol, cfg));
  rep.rows.push_back(make_row(e, "eta-tension", grid_label(grid, false), eta, cfg.eta_tol, cfg));
  ReportRow v = make_row(e, "normal-bitension-vanishing", g, vanishing, cfg.tau2_tol, cfg);
  v.verdict = (v.verdict == "pass") ? "yes" : "no";
  rep.rows.push_back(v);
  return rep;
}

VerificationReport verify_two_radius(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                     const VerifierConfig& cfg) {
  require_legendrian(e, grid, cfg);
  VerificationReport rep;
  Acc forced;
  int premise = 0;
  for (const auto& s : grid) {
    const auto i1 = std::find(s.radii.begin(), s.radii.end(), 1.0) - s.radii.begin();
    const auto i2 = std::find(s.radii.begin(), s.radii.end(), 2.0) - s.radii.begin();
    if (i1 == static_cast<long>(s.radii.size()) || i2 == static_cast<long>(s.radii.size()))
      throw ConfigError("two-radius check needs radii 1 and 2");
    const ConeVector& a = s.tau2_bar[i1];
    const ConeVector& b = s.tau2_bar[i2];
    if (cone_norm(a, s.h) > cfg.tau2_tol || cone_norm(b, s.h) > cfg.tau2_tol) continue;
    ++premise;
    // tau2 + m tau = a, tau2 / 16 + m tau / 4 = b
    const Eigen::VectorXd tau_solved = (16.0 * b.base - a.base) / (3.0 * s.m);
    forced.add(std::max(hnorm(tau_solved, s.h), hnorm(s.tau, s.h)));
  }
  const std::string note = std::to_string(premise) + " of " + std::to_string(grid.size()) +
                           " points with vanishing lifted bitension at r = 1, 2";
  if (premise == 0) {
    rep.rows.push_back(info_row(e, "two-radius", grid_label(grid, false), "n/a", cfg, note));
    return rep;
  }
  rep.rows.push_back(make_row(e, "two-radius", grid_label(grid, false), forced, cfg.identity_tol, cfg, note));
  return rep;
}

VerificationReport eigen_section_check(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                       const VerifierConfig& cfg) {
  if (e.immersion.target.kind() != TargetKind::Sphere)
    throw NotSphereAmbient(e.name + ": eigen-section criterion needs a unit sphere target");
  VerificationReport rep;
  const std::string g = grid_label(grid, true);
  if (max_tau(grid) <= cfg.tau_tol) {
    rep.rows.push_back(info_row(e, "eigen-section", g, "vacuous", cfg, "harmonic, criterion vacuous"));
    return rep;
  }
  Acc res;
  double min_tau = std::numeric_limits<double>::infinity();
  bool floor_ok = true;
  for (const auto& s : grid) {
    const double t = hnorm(s.tau, s.h);
    min_tau = std::min(min_tau, t);
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      const double tb = cone_norm(s.tau_bar[k], s.h);
      floor_ok = floor_ok && tb >= 0.01 / (s.radii[k] * s.radii[k]);
      res.add(cone_norm(s.lap_tau_bar[k] - s.tau_bar[k] * s.m, s.h) / tb);
    }
  }
  floor_ok = floor_ok && min_tau >= cfg.eigen_tau_floor;
  std::ostringstream note;
  note << "relative to |tau(lift)|; min |tau| " << std::setprecision(6) << min_tau << " (floor " << cfg.eigen_tau_floor
       << ")";
  ReportRow row = make_row(e, "eigen-section", g, res, cfg.eigen_rel_tol, cfg, note.str());
  row.verdict = (row.verdict == "pass" && floor_ok) ? "eigen" : "not-eigen";
  rep.rows.push_back(row);
  return rep;
}

VerificationReport takahashi_check(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                   const VerifierConfig& cfg) {
  VerificationReport rep;
  if (e.immersion.target.kind() != TargetKind::Sphere) {
    rep.rows.push_back(info_row(e, "takahashi", grid_label(grid, false), "n/a", cfg, "not a sphere target"));
    return rep;
  }
  Acc res;
  for (const auto& s : grid) res.add(s.takahashi.cwiseAbs().maxCoeff());
  const double mt = max_tau(grid);
  ReportRow row = make_row(e, "takahashi", grid_label(grid, false), res, cfg.takahashi_tol, cfg);
  const bool minimal = row.verdict == "pass";
  row.verdict = minimal ? "minimal" : "not-minimal";
  const bool tau_small = mt <= cfg.tau_tol;
  std::ostringstream note;
  note << "max |tau| " << std::setprecision(6) << mt << (minimal == tau_small ? " (consistent)" : " (inconsistent)");
  row.notes = note.str();
  rep.rows.push_back(row);
  Acc consistency;
  consistency.add(minimal == tau_small ? 0.0 : 1.0);
  rep.rows.push_back(make_row(e, "takahashi-consistency", grid_label(grid, false), consistency, 0.0, cfg));
  return rep;
}

VerificationReport spaceform_check(const CatalogEntry& e, const VerifierConfig& cfg) {
  if (!has_contact(e)) throw NotLegendrian(e.name + ": target carries no contact structure");
  const auto S = build_sasaki_sphere(e.sasaki_m);
  VerificationReport rep;
  Acc eig, split;
  double maxH = 0.0;
  std::vector<std::pair<double, double>> vals;
  for (const Point& x : halton_points(e.sample_box, cfg.samples, cfg.seed)) {
    const LocalImmersion L(e.immersion, x, cfg.diff, 4);
    const auto r = spaceform_biharmonic_residual(L, S, 1.0);
    const double H = L.mean_curvature().norm();
    maxH = std::max(maxH, H);
    vals.emplace_back(r.eigen.norm(), H);
    split.add(std::max(r.split.tangential.norm(), r.split.normal.norm()));
  }
  const std::string g = std::to_string(cfg.samples);
  if (maxH <= cfg.tau_tol) {
    Acc abs_eig;
    for (auto [a, h] : vals) abs_eig.add(a);
    rep.rows.push_back(make_row(e, "spaceform-eigen", g, abs_eig, cfg.eigen_rel_tol, cfg, "minimal; absolute"));
  } else {
    for (auto [a, h] : vals) eig.add(a / h);
    rep.rows.push_back(make_row(e, "spaceform-eigen", g, eig, cfg.eigen_rel_tol, cfg, "relative to |H|"));
  }
  rep.rows.push_back(make_row(e, "spaceform-split", g, split, cfg.eigen_rel_tol, cfg));
  for (auto& r : rep.rows) r.verdict = r.verdict == "pass" ? "satisfied" : "not-satisfied";
  return rep;
}

VerificationReport split_projection_check(const CatalogEntry& e, const VerifierConfig& cfg) {
  VerificationReport rep;
  Acc res;
  for (const Point& x : halton_points(e.sample_box, cfg.samples, cfg.seed)) {
    const LocalImmersion L(e.immersion, x, cfg.diff, 4);
    const Eigen::VectorXd t2 = L.bitension() / L.m();
    const auto sp = L.biharmonic_split();
    res.add(std::max(L.norm(sp.tangential - L.tangent_value(t2)), L.norm(sp.normal - L.normal_value(t2))));
  }
  rep.rows.push_back(make_row(e, "split-projection", std::to_string(cfg.samples), res, cfg.identity_tol, cfg));
  return rep;
}

VerificationReport lagrangian_check(const CatalogEntry& e, const VerifierConfig& cfg) {
  if (!has_contact(e)) throw NotLegendrian(e.name + ": target carries no contact structure");
  const auto S = build_sasaki_sphere(e.sasaki_m);
  const double gate = std::max(1e-8, cfg.legendrian_gate);
  Acc mismatch, scaling;
  double leg_max = 0.0;
  for (const Point& x : halton_points(e.sample_box, cfg.samples, cfg.seed)) {
    const LocalImmersion L(e.immersion, x, cfg.diff, 2);
    const double leg = legendrian_residual(L, S);
    leg_max = std::max(leg_max, leg);
    for (double r : cfg.radii) {
      const double lag = lagrangian_residual(S, L.phi_value(), r, lifted_tangent_basis(L, r), cfg.diff);
      mismatch.add((leg <= gate) == (lag <= gate) ? 0.0 : 1.0);
      scaling.add(std::abs(lag - r * r * leg));
    }
  }
  VerificationReport rep;
  const std::string g = std::to_string(cfg.samples) + "x" + std::to_string(cfg.radii.size());
  rep.rows.push_back(make_row(e, "lagrangian-biconditional", g, mismatch, 0.0, cfg,
                              leg_max <= gate ? "Legendrian" : "not Legendrian"));
  rep.rows.push_back(make_row(e, "lagrangian-scaling", g, scaling, cfg.identity_tol, cfg,
                              "max legendrian residual " + std::to_string(leg_max)));
  return rep;
}

namespace {

std::string expected_label(const ExpectedFlags& f) {
  if (f.harmonic) return "harmonic";
  if (f.proper_biharmonic) return "proper-biharmonic";
  return "neither";
}

}  // namespace

VerificationReport classification_rows(const CatalogEntry& e, const VerifierConfig& cfg) {
  VerificationReport rep;
  const auto c = classify(e, cfg);
  const std::string expected = expected_label(e.expected);
  std::ostringstream note;
  note << "max |tau| " << std::setprecision(6) << c.max_tau << ", max |tau2| " << c.max_tau2 << "; catalog expects "
       << expected;
  rep.rows.push_back(info_row(e, "classification", std::to_string(cfg.samples), to_string(c.verdict), cfg, note.str(),
                              c.max_tau2, cfg.tau2_tol));
  const auto cl = classify_lift(e, cfg);
  std::ostringstream ln;
  ln << "max |tau(lift)| " << std::setprecision(6) << cl.max_tau << ", max |tau2(lift)| " << cl.max_tau2;
  rep.rows.push_back(info_row(e, "lift-classification", std::to_string(cfg.samples) + "x" +
                                                             std::to_string(cfg.radii.size()),
                              to_string(cl.verdict), cfg, ln.str(), cl.max_tau2, cfg.tau2_tol));
  Acc bic;
  bic.add(((c.verdict == Classification::Harmonic) == (cl.verdict == Classification::Harmonic) &&
           cl.verdict != Classification::ProperBiharmonic)
              ? 0.0
              : 1.0);
  rep.rows.push_back(make_row(e, "lift-harmonic-biconditional", "1", bic, 0.0, cfg));
  return rep;
}

VerificationReport verify_entry(const CatalogEntry& e, const VerifierConfig& cfg) {
  cfg.validate();
  const auto grid = sample_grid(e, cfg, true);
  VerificationReport rep;
  rep.append(verify_tension_scaling(e, grid, cfg));
  bool legendrian = has_contact(e);
  for (const auto& s : grid) legendrian = legendrian && s.legendrian <= cfg.legendrian_gate;
  const std::string g = grid_label(grid, true);
  if (legendrian) {
    rep.append(verify_bitension_identity(e, grid, cfg));
    rep.append(verify_normal_and_divergence(e, grid, cfg));
    rep.append(verify_two_radius(e, grid, cfg));
    rep.append(spaceform_check(e, cfg));
    rep.append(eigen_section_check(e, grid, cfg));
  } else {
    for (const char* id : {"bitension-scaling", "normal-bitension", "divergence", "eta-tension",
                           "normal-bitension-vanishing", "two-radius", "spaceform-eigen", "spaceform-split",
                           "eigen-section"})
      rep.rows.push_back(info_row(e, id, g, "skipped", cfg, "skipped: not Legendrian"));
  }
  rep.append(takahashi_check(e, grid, cfg));
  rep.append(split_projection_check(e, cfg));
  if (has_contact(e)) rep.append(lagrangian_check(e, cfg));
  rep.append(classification_rows(e, cfg));
  if (legendrian) {
    const ReportRow* eig = rep.find(e.name, "eigen-section");
    const ReportRow* cls = rep.find(e.name, "classification");
    Acc agree;
    agree.add(((eig->verdict == "eigen") == (cls->verdict == to_string(Classification::ProperBiharmonic))) ? 0.0
                                                                                                            : 1.0);
    const std::string eig_note = "eigen-section " + eig->verdict + ", classification " + cls->verdict;
    rep.rows.push_back(make_row(e, "eigen-section-consistency", "1", agree, 0.0, cfg, eig_note));
    const bool biharmonic = cls->verdict == to_string(Classification::Harmonic) ||
                            cls->verdict == to_string(Classification::ProperBiharmonic);
    const ReportRow* se = rep.find(e.name, "spaceform-eigen");
    const ReportRow* ss = rep.find(e.name, "spaceform-split");
    Acc sf;
    sf.add((se->verdict == "satisfied") == biharmonic && (ss->verdict == "satisfied") == biharmonic ? 0.0 : 1.0);
    rep.rows.push_back(make_row(e, "spaceform-consistency", "1", sf, 0.0, cfg,
                                "eigen " + se->verdict + ", split " + ss->verdict + ", classification " +
                                    cls->verdict));
  }
  return rep;
}

}  // namespace conelift
