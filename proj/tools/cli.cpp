#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "conelift/catalog.hpp"
#include "conelift/errors.hpp"
#include "conelift/variational.hpp"
#include "conelift/verifier.hpp"

namespace conelift::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> entries;
  std::string radii = "0.5,1,2,5";
  int samples = 10;
  std::uint64_t seed = 1;
  std::string backend;
  std::string format = "json";
  std::string output;
  std::vector<std::string> tolerances;  // identity=value
  std::string flow_config;
  std::string flow_log;
};

std::vector<double> parse_radii(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad radius: '" + item + "'");
    }
    if (used != item.size()) throw UsageError("bad radius: '" + item + "'");
    if (!(r > 0.0)) throw UsageError("radii must be positive");
    out.push_back(r);
  }
  if (out.empty()) throw UsageError("empty radius list");
  return out;
}

std::string default_backend() {
  const char* env = std::getenv("CONELIFT_BACKEND");
  return env && *env ? env : "jet";
}

VerifierConfig make_config(const RunConfig& rc) {
  const std::string backend = rc.backend.empty() ? default_backend() : rc.backend;
  VerifierConfig cfg;
  if (backend == "central") cfg = VerifierConfig::central();
  else if (backend != "jet") throw UsageError("unknown backend '" + backend + "' (jet | central)");
  if (rc.samples < 10) throw UsageError("--samples must be >= 10");
  cfg.samples = rc.samples;
  cfg.seed = rc.seed;
  cfg.radii = parse_radii(rc.radii);
  const std::map<std::string, double*> slots{
      {"identity", &cfg.identity_tol}, {"tau", &cfg.tau_tol},         {"tau2", &cfg.tau2_tol},
      {"eta", &cfg.eta_tol},           {"takahashi", &cfg.takahashi_tol}, {"slope", &cfg.slope_tol},
      {"eigen", &cfg.eigen_rel_tol},   {"eigen-floor", &cfg.eigen_tau_floor},
      {"legendrian", &cfg.legendrian_gate}};
  for (const auto& t : rc.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got '" + t + "'");
    const auto it = slots.find(t.substr(0, eq));
    if (it == slots.end()) throw UsageError("unknown tolerance '" + t.substr(0, eq) + "'");
    try {
      *it->second = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in '" + t + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<CatalogEntry> selected(const std::vector<std::string>& names) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) return catalog();
  std::vector<CatalogEntry> out;
  for (const auto& n : names) out.push_back(catalog_entry(n));
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  os << text;
}

std::string render(const VerificationReport& rep, const std::string& format) {
  return format == "csv" ? rep.to_csv() : rep.to_json();
}

int finish(const VerificationReport& rep, const RunConfig& rc, std::ostream& out, std::ostream& err) {
  emit(render(rep, rc.format), rc.output, out);
  const auto bad = rep.violations();
  for (const ReportRow* r : bad)
    err << "violation: " << r->entry << " " << r->identity << " residual " << std::setprecision(6) << r->residual_max
        << " > " << r->tolerance << "\n";
  return bad.empty() ? 0 : 1;
}

int cmd_catalog(const RunConfig& rc, std::ostream& out) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "entry,dim,target_dim,sasaki_m,legendrian,harmonic,proper_biharmonic,provenance\n";
  for (const auto& e : catalog()) {
    const int target = e.immersion.target.dim();
    j.push_back({{"entry", e.name},
                 {"dim", e.immersion.m()},
                 {"target_dim", target},
                 {"sasaki_m", e.sasaki_m},
                 {"legendrian", e.expected.legendrian},
                 {"harmonic", e.expected.harmonic},
                 {"proper_biharmonic", e.expected.proper_biharmonic},
                 {"provenance", e.provenance}});
    csv << e.name << "," << e.immersion.m() << "," << target << "," << e.sasaki_m << "," << e.expected.legendrian
        << "," << e.expected.harmonic << "," << e.expected.proper_biharmonic << ",\"" << e.provenance << "\"\n";
  }
  emit(rc.format == "csv" ? csv.str() : j.dump(2) + "\n", rc.output, out);
  return 0;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.entries.empty()) throw UsageError("verify needs --entry NAME (or 'all')");
  const VerifierConfig cfg = make_config(rc);
  VerificationReport rep;
  for (const auto& e : selected(rc.entries)) rep.append(verify_entry(e, cfg));
  return finish(rep, rc, out, err);
}

int cmd_takahashi(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.entries.empty()) throw UsageError("takahashi needs --entry NAME (or 'all')");
  const VerifierConfig cfg = make_config(rc);
  VerificationReport rep;
  for (const auto& e : selected(rc.entries)) rep.append(takahashi_check(e, sample_grid(e, cfg, false), cfg));
  return finish(rep, rc, out, err);
}

int cmd_report(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const VerifierConfig cfg = make_config(rc);
  VerificationReport rep;
  for (const auto& e : catalog()) rep.append(verify_entry(e, cfg));
  return finish(rep, rc, out, err);
}

int cmd_flow(const RunConfig& rc, std::ostream& out) {
  const FlowJob job = FlowJob::load(rc.flow_config);
  std::string path = rc.output;
  if (path.empty()) {
    if (job.output.empty()) throw UsageError("flow config has no output path; pass --output");
    path = (std::filesystem::path(rc.flow_config).parent_path() / job.output).string();
  }
  const FlowResult res = flow(job.initial(), job.effective_config());
  write_fixture(path, {res.curve, job.m, job.hash_hex(), job.provenance()});
  if (!rc.flow_log.empty()) {
    std::ostringstream log;
    log << std::setprecision(17) << "iteration,objective,gradient_norm,min_segment,step,energy\n";
    for (const auto& l : res.log)
      log << l.iteration << "," << l.objective << "," << l.gradient_norm << "," << l.min_segment << "," << l.step
          << "," << l.energy << "\n";
    emit(log.str(), rc.flow_log, out);
  }
  const auto f = discrete_functionals(res.curve);
  nlohmann::ordered_json j;
  j["fixture"] = path;
  j["config_hash"] = job.hash_hex();
  j["iterations"] = res.log.size() - 1;
  j["accepted_steps"] = res.accepted;
  j["converged"] = res.converged;
  j["newton_residuals"] = res.newton.residuals;
  j["energy"] = f.energy;
  j["bienergy"] = f.bienergy;
  j["penalty"] = f.penalty;
  j["length"] = f.length;
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conelift: numeric checks of cone lifts of Legendrian immersions"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&rc](CLI::App* sub) {
    sub->add_option("--radii", rc.radii, "comma-separated cone radii");
    sub->add_option("--samples", rc.samples, "sample points per entry (>= 10)");
    sub->add_option("--seed", rc.seed, "sampling seed");
    sub->add_option("--backend", rc.backend, "jet | central (default from CONELIFT_BACKEND, else jet)");
    sub->add_option("--format", rc.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", rc.output, "report path (default stdout)");
    sub->add_option("--tol", rc.tolerances,
                    "tolerance override NAME=VALUE; names: identity tau tau2 eta takahashi slope eigen "
                    "eigen-floor legendrian");
  };

  auto* cat = app.add_subcommand("catalog", "list catalog entries and their expected flags");
  cat->add_option("--format", rc.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cat->add_option("--output", rc.output, "output path (default stdout)");

  auto* ver = app.add_subcommand("verify", "run every applicable check on catalog entries");
  ver->add_option("--entry", rc.entries, "entry name, repeatable, or 'all'");
  add_common(ver);

  auto* tak = app.add_subcommand("takahashi", "coordinate Laplacian check on sphere entries");
  tak->add_option("--entry", rc.entries, "entry name, repeatable, or 'all'");
  add_common(tak);

  auto* rep = app.add_subcommand("report", "verify the whole catalog");
  add_common(rep);

  auto* flo = app.add_subcommand("flow", "run the curve flow and write the fixture");
  flo->add_option("--config", rc.flow_config, "flow config JSON")->required();
  flo->add_option("--output", rc.output, "fixture path (default: config 'output', relative to the config)");
  flo->add_option("--log", rc.flow_log, "iteration log CSV");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*cat) return cmd_catalog(rc, out);
    if (*ver) return cmd_verify(rc, out, err);
    if (*tak) return cmd_takahashi(rc, out, err);
    if (*rep) return cmd_report(rc, out, err);
    if (*flo) return cmd_flow(rc, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace conelift::cli
