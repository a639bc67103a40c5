#pragma once

// Numeric verification of the cone-lift identities on catalog entries:
// tension and bitension scaling, the normal bitension and divergence
// identities, the eigen-section criterion, Takahashi's theorem and the
// harmonic / biharmonic classification.
//
// Norms of cone vectors are sqrt(radial^2 + h(V, V)) with h the metric of
// the base target presentation, so base vectors do not carry the r^2 of the
// cone metric.

#include <cstdint>
#include <string>
#include <vector>

#include "conelift/catalog.hpp"
#include "conelift/cone.hpp"

namespace conelift {

struct VerifierConfig {
  std::vector<double> radii{0.5, 1.0, 2.0, 5.0};
  int samples = 10;
  std::uint64_t seed = 1;
  DifferentiationConfig diff = DifferentiationConfig::jet();
  double identity_tol = 1e-6;  // relative
  double tau_tol = 1e-8;
  double tau2_tol = 1e-6;
  double eta_tol = 1e-9;
  double takahashi_tol = 1e-8;
  double slope_tol = 1e-6;
  double eigen_rel_tol = 1e-4;
  double eigen_tau_floor = 0.1;
  double legendrian_gate = kLegendrianGate;

  // Central-difference backend with every tolerance relaxed to at least 1e-3.
  static VerifierConfig central();
  std::string backend() const { return diff.describe(); }
  void validate() const;
};

// Halton points in the box, shifted by a seeded random rotation; index 0 is
// skipped.
std::vector<Point> halton_points(const Box& box, int count, std::uint64_t seed);

enum class Classification { Harmonic, ProperBiharmonic, Neither, Inconclusive };
std::string to_string(Classification c);

struct ClassifyResult {
  Classification verdict = Classification::Neither;
  double max_tau = 0.0;
  double max_tau2 = 0.0;
};

ClassifyResult classify(const CatalogEntry& e, const VerifierConfig& cfg);
// Classification of phibar on the cone grid.
ClassifyResult classify_lift(const CatalogEntry& e, const VerifierConfig& cfg);
// Thresholds shared by classify and classify_lift.
Classification classify_values(double max_tau, double max_tau2, const VerifierConfig& cfg);

struct ReportRow {
  std::string entry;
  std::string identity;
  std::string grid;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  double tolerance = 0.0;
  std::string verdict;
  std::string backend;
  std::uint64_t seed = 0;
  std::string notes;
};

struct VerificationReport {
  std::vector<ReportRow> rows;

  void append(const VerificationReport& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
  const ReportRow* find(const std::string& entry, const std::string& identity) const;
  // Rows with verdict "fail"; other verdicts (n/a, skipped, minimal, eigen, ...)
  // are classifications rather than violations.
  std::vector<const ReportRow*> violations() const;
  std::string to_json() const;
  std::string to_csv() const;
};

// Quantities of phi at x and of phibar at (r, x), r in cfg.radii.
struct LiftSample {
  Point x;
  int m = 0;
  Eigen::MatrixXd h;  // base target metric at phi(x)
  Eigen::VectorXd tau, tau2, tau2_normal;
  double eta_tau = 0.0;          // sphere entries with a Sasaki structure
  double div_J_tau = 0.0;        // div_g(J tau)
  double legendrian = -1.0;      // residual, -1 without a contact structure
  Eigen::VectorXd takahashi;     // Delta phi_a - m phi_a, sphere targets
  std::vector<double> radii;
  std::vector<ConeVector> tau_bar, tau2_bar, lap_tau_bar;
  std::vector<double> div_I_tau_bar;
};

// `with_lift` false skips all cone quantities.
LiftSample sample_entry(const CatalogEntry& e, const Point& x, const VerifierConfig& cfg, bool with_lift = true);
std::vector<LiftSample> sample_grid(const CatalogEntry& e, const VerifierConfig& cfg, bool with_lift = true);

VerificationReport verify_tension_scaling(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                          const VerifierConfig& cfg);
// Throws NotLegendrian when the entry fails the gate.
VerificationReport verify_bitension_identity(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                             const VerifierConfig& cfg);
VerificationReport verify_normal_and_divergence(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                                const VerifierConfig& cfg);
// Solving the bitension identity at r = 1 and r = 2 for tau.
VerificationReport verify_two_radius(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                     const VerifierConfig& cfg);
// Throws NotSphereAmbient.
VerificationReport eigen_section_check(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                       const VerifierConfig& cfg);
VerificationReport takahashi_check(const CatalogEntry& e, const std::vector<LiftSample>& grid,
                                   const VerifierConfig& cfg);
// Rough Laplacian eigen-equation for H and the normal/tangential split in the
// unit Sasaki sphere (eps = 1), and the general split against tau_2 / m.
VerificationReport spaceform_check(const CatalogEntry& e, const VerifierConfig& cfg);
VerificationReport split_projection_check(const CatalogEntry& e, const VerifierConfig& cfg);
VerificationReport lagrangian_check(const CatalogEntry& e, const VerifierConfig& cfg);
VerificationReport classification_rows(const CatalogEntry& e, const VerifierConfig& cfg);

// Every applicable check for one entry.
VerificationReport verify_entry(const CatalogEntry& e, const VerifierConfig& cfg);

}  // namespace conelift
