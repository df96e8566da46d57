// qmeter: entropy reduction of quantum measurements from the command line.
//
// Subcommands:
//   compute   entropy/information quantities for a (state, measurement) pair
//   classify  efficiency / irreducibility verdict for an instrument
//   verify    randomized property suites with deterministic seeds
//   fixtures  write the bundled example documents
//
// Exit codes: 0 success / all passed, 1 property failure or internal error,
// 2 usage error, 3 document schema violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qmeter/qmeter.hpp"

namespace {

using namespace qmeter;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSchema = 3;

struct OutputOptions {
  std::string format = "text";
  std::string output_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions* opts) {
  cmd->add_option("--format", opts->format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  cmd->add_option("--output", opts->output_path,
                  "Also write the report to this file");
}

// Reports go to stdout; --output mirrors the same bytes into a file so runs
// can be diffed.
int emit(const std::string& body, const OutputOptions& opts, int code) {
  std::cout << body;
  if (!opts.output_path.empty()) {
    std::ofstream out(opts.output_path);
    if (!out) {
      std::cerr << "error: cannot write " << opts.output_path << "\n";
      return kExitFail;
    }
    out << body;
  }
  return code;
}

std::string fmt(Real v) { return format_real(v); }

bool parse_range(const std::string& text, int* lo, int* hi) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      *lo = *hi = std::stoi(text);
    } else {
      *lo = std::stoi(text.substr(0, colon));
      *hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    return false;
  }
  return *lo >= 1 && *lo <= *hi && *hi <= 8;
}

// ---------------------------------------------------------------- compute --

struct ComputeArgs {
  std::string doc_path, state, measurement;
  bool general = false;
  OutputOptions out;
};

int run_compute(const ComputeArgs& args) {
  const Document doc = load_document(args.doc_path);

  auto state_it = doc.states.find(args.state);
  if (state_it == doc.states.end()) {
    std::cerr << "error: no state named '" << args.state << "' in "
              << args.doc_path << "\n";
    return kExitUsage;
  }
  const DensityOperator& rho = state_it->second;

  std::optional<Instrument> inst;
  if (auto it = doc.measurements.find(args.measurement); it != doc.measurements.end())
    inst.emplace(it->second);
  else if (auto jt = doc.instruments.find(args.measurement); jt != doc.instruments.end())
    inst.emplace(jt->second);
  if (!inst) {
    std::cerr << "error: no measurement or instrument named '" << args.measurement
              << "' in " << args.doc_path << "\n";
    return kExitUsage;
  }

  const EfficiencyResult eff = is_efficient(*inst);
  if (!eff.efficient && !args.general) {
    std::cerr << "error: '" << args.measurement
              << "' is not an efficient measurement; its q-c mutual information "
                 "and direct entropy reduction differ in general. Pass --general "
                 "to compute both anyway.\n";
    return kExitUsage;
  }

  const Real h = von_neumann(rho);
  const RealVector pi = outcome_distribution(*inst, rho);
  const Real mean_h = mean_posteriori_entropy(*inst, rho);
  const Real er_direct = h - mean_h;
  const Real i_pi = qc_mutual_info(rho, *inst).value();
  const Real cross = std::abs(er_direct - i_pi);
  const Real i_lambda = mutual_info_relative(rho, HybridChannel(*inst)).value();
  const Real identity_residual = std::abs(i_pi + i_lambda - 2.0 * h);

  json machine;
  machine["state"] = args.state;
  machine["measurement"] = args.measurement;
  machine["efficient"] = eff.efficient;
  machine["H"] = h;
  machine["labels"] = inst->labels();
  machine["distribution"] = std::vector<Real>(pi.data(), pi.data() + pi.size());
  machine["mean_posteriori_entropy"] = mean_h;
  machine["er_direct"] = er_direct;
  machine["mi_qc"] = i_pi;
  machine["cross_residual"] = cross;
  machine["mi_lambda"] = i_lambda;
  machine["identity_residual"] = identity_residual;

  std::ostringstream body;
  if (args.out.format == "machine") {
    body << machine.dump(2) << "\n";
  } else {
    body << "state:            " << args.state << "  (d=" << rho.dim() << ")\n";
    body << "measurement:      " << args.measurement << "  ("
         << inst->outcomes() << " outcomes, "
         << (eff.efficient ? "efficient" : "general") << ")\n";
    body << "H(rho)          = " << fmt(h) << "\n";
    for (int i = 0; i < inst->outcomes(); ++i)
      body << "  p[" << inst->label(i) << "] = " << fmt(pi(i)) << "\n";
    body << "<H>             = " << fmt(mean_h) << "\n";
    body << "ER (direct)     = " << fmt(er_direct) << "\n";
    body << "I(rho,Pi)       = " << fmt(i_pi) << "\n";
    body << "cross residual  = " << fmt(cross) << "\n";
    body << "I(rho,Lambda)   = " << fmt(i_lambda) << "\n";
    body << "identity resid  = " << fmt(identity_residual) << "\n";
    body << "--- machine ---\n" << machine.dump() << "\n";
  }
  return emit(body.str(), args.out, kExitPass);
}

// ---------------------------------------------------------------- classify --

struct ClassifyArgs {
  std::string doc_path, instrument;
  int trials = 64;
  std::uint64_t seed = 0;
  OutputOptions out;
};

int run_classify(const ClassifyArgs& args) {
  const Document doc = load_document(args.doc_path);

  std::optional<Instrument> inst;
  if (auto it = doc.instruments.find(args.instrument); it != doc.instruments.end())
    inst.emplace(it->second);
  else if (auto jt = doc.measurements.find(args.instrument); jt != doc.measurements.end())
    inst.emplace(jt->second);
  if (!inst) {
    std::cerr << "error: no instrument named '" << args.instrument << "' in "
              << args.doc_path << "\n";
    return kExitUsage;
  }

  const ClassificationReport report =
      is_irreducible(*inst, args.trials, derive_seed(args.seed, 0xc1a5));

  json machine;
  machine["instrument"] = args.instrument;
  machine["efficient"] = report.efficient;
  machine["irreducible"] = report.irreducible;
  machine["kraus_rank"] = report.kraus_rank;
  machine["monte_carlo_trials"] = report.monte_carlo_trials;
  machine["monte_carlo_purity"] = report.monte_carlo_purity;
  json ranges = json::array();
  for (const auto& r : report.ranges) {
    if (!r) {
      ranges.push_back(nullptr);
      continue;
    }
    json psi = json::array();
    for (Eigen::Index k = 0; k < r->psi.size(); ++k)
      psi.push_back(json::array({r->psi(k).real(), r->psi(k).imag()}));
    ranges.push_back({{"psi", psi}});
  }
  machine["common_range"] = ranges;

  std::ostringstream body;
  if (args.out.format == "machine") {
    body << machine.dump(2) << "\n";
  } else {
    body << "instrument:  " << args.instrument << "  (" << inst->outcomes()
         << " outcomes, d=" << inst->d_in() << ")\n";
    body << "efficient:   " << (report.efficient ? "yes" : "no") << "\n";
    body << "irreducible: " << (report.irreducible ? "yes" : "no") << "\n";
    for (int i = 0; i < inst->outcomes(); ++i) {
      body << "operation " << inst->label(i) << ": kraus="
           << static_cast<int>(inst->operation(i).size())
           << " reduced=" << report.kraus_rank[i];
      if (report.ranges[i]) {
        body << " common_range psi=(";
        const Vector& psi = report.ranges[i]->psi;
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
          if (k) body << ", ";
          body << fmt(psi(k).real()) << (psi(k).imag() < 0 ? "-" : "+")
               << fmt(std::abs(psi(k).imag())) << "i";
        }
        body << ")";
      }
      body << "\n";
    }
    body << "monte carlo: trials=" << report.monte_carlo_trials
         << " worst posteriori purity=" << fmt(report.monte_carlo_purity) << "\n";
    body << "--- machine ---\n" << machine.dump() << "\n";
  }
  return emit(body.str(), args.out, kExitPass);
}

// ----------------------------------------------------------------- verify --

struct VerifyArgs {
  std::string suite = "all";
  std::string dims = "2:6";
  std::string fixture;
  RandomModel model;
  OutputOptions out;
};

int run_verify(const VerifyArgs& args) {
  RandomModel model = args.model;
  if (!parse_range(args.dims, &model.dim_min, &model.dim_max)) {
    std::cerr << "error: --dims expects 'lo:hi' with 1 <= lo <= hi <= 8\n";
    return kExitUsage;
  }

  std::vector<PropertyReport> reports;
  bool expected_fail = false;
  if (!args.fixture.empty()) {
    if (args.fixture != "reducible") {
      std::cerr << "error: unknown --fixture '" << args.fixture
                << "' (available: reducible)\n";
      return kExitUsage;
    }
    if (args.suite != "nonnegativity") {
      std::cerr << "error: --fixture reducible applies to the nonnegativity "
                   "suite only\n";
      return kExitUsage;
    }
    expected_fail = true;
    reports.push_back(check_nonnegativity_reducible(model));
  } else {
    try {
      reports = run_suite(args.suite, model);
    } catch (const shape_error& e) {
      std::cerr << "error: " << e.what() << " (available:";
      for (const auto& n : suite_names()) std::cerr << " " << n;
      std::cerr << " all)\n";
      return kExitUsage;
    }
  }

  int passed = 0;
  json machine;
  machine["seed"] = model.seed;
  machine["trials"] = model.trials;
  machine["dims"] = {model.dim_min, model.dim_max};
  machine["tolerance_scale"] = model.tolerance_scale;
  machine["reports"] = json::array();
  for (const PropertyReport& r : reports) {
    passed += r.pass ? 1 : 0;
    machine["reports"].push_back({{"property", r.property},
                                  {"trials", r.trials},
                                  {"max_violation", r.max_violation},
                                  {"tolerance", r.tolerance},
                                  {"pass", r.pass},
                                  {"witness", r.witness}});
  }

  std::ostringstream body;
  if (args.out.format == "machine") {
    body << machine.dump(2) << "\n";
  } else {
    for (const PropertyReport& r : reports) {
      body << r.property << ": " << (r.pass ? "PASS" : "FAIL")
           << "  trials=" << r.trials
           << "  max_violation=" << fmt(r.max_violation)
           << "  tolerance=" << fmt(r.tolerance);
      if (!r.witness.empty()) body << "\n  worst: " << r.witness;
      body << "\n";
    }
    body << "summary: " << passed << "/" << reports.size() << " passed (seed="
         << model.seed << ", trials=" << model.trials << ", dims=" << model.dim_min
         << ":" << model.dim_max << ")\n";
    if (expected_fail)
      body << "note: the reducible fixture is a sensitivity control and is "
              "expected to fail this property.\n";
    body << "--- machine ---\n" << machine.dump() << "\n";
  }
  const bool all_pass = passed == static_cast<int>(reports.size());
  return emit(body.str(), args.out, all_pass ? kExitPass : kExitFail);
}

// --------------------------------------------------------------- fixtures --

struct FixturesArgs {
  std::string dir = "fixtures";
  std::uint64_t seed = 0;
};

int run_fixtures(const FixturesArgs& args) {
  std::filesystem::create_directories(args.dir);
  Document canonical;
  canonical.states.emplace("mixed_qubit", fixtures::maximally_mixed(2));
  canonical.states.emplace("plus", fixtures::plus_state());
  canonical.states.emplace("zero", fixtures::computational_state(2, 0));
  canonical.states.emplace("mixed_ququart", fixtures::maximally_mixed(4));
  canonical.measurements.emplace("basis", fixtures::basis_measurement(2));
  canonical.measurements.emplace("unitary_mixture", fixtures::unitary_mixture_qubit());
  canonical.measurements.emplace(
      "spectral_mult1", efficient_measurement(fixtures::multiplicity_example(2, 1)));
  canonical.instruments.emplace("spectral_mult2", fixtures::multiplicity_example(2, 2));
  canonical.instruments.emplace("reducible", fixtures::reducible_instrument());
  canonical.instruments.emplace("depolarizing", fixtures::depolarizing_instrument());
  canonical.channels.emplace(
      "depolarizing",
      QuantumChannel(fixtures::depolarizing_instrument().operation(0)));
  save_document(canonical, args.dir + "/canonical.json");

  Rng rng(derive_seed(args.seed, 0xf1d4));
  Document random_d4;
  random_d4.states.emplace("rho_d4", rng.ginibre_state(4));
  random_d4.measurements.emplace("m_d4", rng.measurement(4, 3));
  random_d4.instruments.emplace("inst_d4", rng.instrument(4, 2, 2, true));
  save_document(random_d4, args.dir + "/random_d4.json");

  std::cout << "wrote " << args.dir << "/canonical.json and " << args.dir
            << "/random_d4.json\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy reduction of quantum measurements"};
  app.require_subcommand(1);

  ComputeArgs compute_args;
  CLI::App* compute = app.add_subcommand(
      "compute", "Entropy reduction and mutual information for a state and a "
                 "measurement from a document");
  compute->add_option("--doc", compute_args.doc_path, "Input document (JSON)")
      ->required();
  compute->add_option("--state", compute_args.state, "State name")->required();
  compute
      ->add_option("--measurement", compute_args.measurement,
                   "Measurement or instrument name")
      ->required();
  compute->add_flag("--general", compute_args.general,
                    "Allow non-efficient instruments (quantities may differ)");
  add_output_flags(compute, &compute_args.out);

  ClassifyArgs classify_args;
  CLI::App* classify = app.add_subcommand(
      "classify", "Efficiency / irreducibility verdict for an instrument");
  classify->add_option("--doc", classify_args.doc_path, "Input document (JSON)")
      ->required();
  classify->add_option("--instrument", classify_args.instrument, "Instrument name")
      ->required();
  classify->add_option("--trials", classify_args.trials,
                       "Monte Carlo purity samples")
      ->capture_default_str();
  classify->add_option("--seed", classify_args.seed, "Monte Carlo seed")
      ->envname("QMETER_SEED")
      ->capture_default_str();
  add_output_flags(classify, &classify_args.out);

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run randomized property suites (deterministic per seed)");
  verify->add_option("suite", verify_args.suite, "Suite name or 'all'")
      ->capture_default_str();
  verify->add_option("--seed", verify_args.model.seed, "Master seed")
      ->envname("QMETER_SEED")
      ->capture_default_str();
  verify->add_option("--trials", verify_args.model.trials, "Trials per property")
      ->capture_default_str();
  verify->add_option("--dims", verify_args.dims, "Dimension range lo:hi")
      ->capture_default_str();
  verify
      ->add_option("--tolerance-scale", verify_args.model.tolerance_scale,
                   "Multiply every suite tolerance")
      ->capture_default_str();
  verify->add_option("--fixture", verify_args.fixture,
                     "Replace random inputs by a named fixture (sensitivity "
                     "control; 'reducible' is expected to fail)");
  add_output_flags(verify, &verify_args.out);

  FixturesArgs fixtures_args;
  CLI::App* fixtures_cmd =
      app.add_subcommand("fixtures", "Write the bundled example documents");
  fixtures_cmd->add_option("--dir", fixtures_args.dir, "Target directory")
      ->capture_default_str();
  fixtures_cmd->add_option("--seed", fixtures_args.seed, "Seed for the random fixture")
      ->envname("QMETER_SEED")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (compute->parsed()) return run_compute(compute_args);
    if (classify->parsed()) return run_classify(classify_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (fixtures_cmd->parsed()) return run_fixtures(fixtures_args);
  } catch (const schema_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const classification_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
