// snf: analyze Boolean families on S_n, recover approximating dictatorships,
// and check edge-isoperimetry on the transposition Cayley graph.
//
// Exit codes: 0 success, 2 input validation, 3 pipeline failure, 4 capacity.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "snf/errors.hpp"
#include "snf/family_io.hpp"
#include "snf/isoperimetry.hpp"
#include "snf/json_out.hpp"
#include "snf/parallel.hpp"
#include "snf/recovery.hpp"
#include "snf/report_io.hpp"
#include "snf/version.hpp"

namespace {

using namespace snf;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::uint64_t samples = 1'000'000;
  int threads = 0;
  std::optional<double> tau_threshold;
  std::optional<double> large_threshold;
  std::string format = "json";
  std::string output;
};

void emit(const GlobalOpts& g, const std::string& content) {
  if (g.output.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
  } else {
    write_file(g.output, content);
  }
}

Meta make_meta(const GlobalOpts& g, const std::string& command, const std::string& input) {
  std::string canonical = command + "|" + input + "|seed=" + std::to_string(g.seed) +
                          "|samples=" + std::to_string(g.samples) + "|format=" + g.format;
  if (g.tau_threshold) canonical += "|tau=" + fmt17(*g.tau_threshold);
  if (g.large_threshold) canonical += "|large=" + fmt17(*g.large_threshold);
  return Meta{g.seed, make_config_hash(canonical)};
}

RecoverOptions recover_options(const GlobalOpts& g) {
  RecoverOptions opts;
  opts.seed = g.seed;
  opts.mc_samples = g.samples;
  opts.tau_threshold = g.tau_threshold;
  opts.large_threshold = g.large_threshold;
  return opts;
}

int cmd_analyze(const GlobalOpts& g, const std::string& path) {
  BooleanFamily F = load_family(path);
  Meta meta = make_meta(g, "analyze", path);
  MatrixOptions mo;
  mo.mc_samples = g.samples;
  mo.seed = g.seed;
  CoefficientMatrix M = coefficient_matrix(F, mo);
  TauMatrix T = tau_matrix(F);
  std::optional<IdentityReport> identity;
  if (M.epsilon_kind == EpsilonKind::Exact) identity = verify_identities(M);
  if (g.format == "csv") {
    if (g.output.empty())
      throw std::invalid_argument("csv format requires --output (writes <out> and <out>.tau.csv)");
    write_file(g.output, coefficient_csv(M, meta));
    write_file(g.output + ".tau.csv", tau_csv(T, meta));
    return 0;
  }
  emit(g, analyze_report_json(meta, M, T, identity));
  return 0;
}

int cmd_recover(const GlobalOpts& g, const std::string& path) {
  BooleanFamily F = load_family(path);
  Meta meta = make_meta(g, "recover", path);
  try {
    RecoveryResult r = recover(F, recover_options(g));
    emit(g, recovery_json(meta, r));
    return 0;
  } catch (const NoStrongLineError& e) {
    emit(g, no_strong_line_json(meta, e));
    std::cerr << "recover: " << e.what() << "\n";
    return 3;
  }
}

int cmd_iso(const GlobalOpts& g, const std::string& path, bool stability) {
  BooleanFamily F = load_family(path);
  Meta meta = make_meta(g, stability ? "iso-stability" : "iso", path);
  if (!stability) {
    emit(g, boundary_json(meta, diaconis_check(F)));
    return 0;
  }
  emit(g, iso_stability_json(meta, iso_stability(F, recover_options(g))));
  return 0;
}

int cmd_conjecture(const GlobalOpts& g, int n, const std::string& mode,
                   const std::vector<std::uint64_t>& sizes, int restarts) {
  Meta meta = make_meta(g, "conjecture", "n=" + std::to_string(n) + ",mode=" + mode);
  ScanMode m = mode == "exhaustive" ? ScanMode::Exhaustive : ScanMode::LocalSearch;
  LocalSearchParams params;
  params.seed = g.seed;
  params.restarts = restarts;
  auto rows = conjecture_scan(n, sizes, m, params);
  std::vector<std::string> witness_files(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].improved || !rows[i].witness) continue;
    std::string base = g.output.empty() ? std::string("conjecture") : g.output;
    std::string wf = base + ".k" + std::to_string(rows[i].k) + ".witness.json";
    write_file(wf, family_to_json(BooleanFamily::from_bitset(n, *rows[i].witness)));
    witness_files[i] = wf;
  }
  emit(g, conjecture_csv(meta, rows, witness_files));
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& spec_path) {
  std::string text = read_file(spec_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("sweep spec: invalid JSON: ") + e.what());
  }
  auto require = [&](const char* field) {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("sweep spec: missing field '") + field + "'");
  };
  require("n");
  require("row");
  require("columns");
  require("deltas");
  require("trials");
  NoiseSpec base;
  base.n = j["n"].get<int>();
  base.row = j["row"].get<int>() - 1;
  for (const auto& c : j["columns"]) base.columns.push_back(c.get<int>() - 1);
  base.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : g.seed;
  std::vector<double> deltas;
  for (const auto& d : j["deltas"]) deltas.push_back(d.get<double>());
  int trials = j["trials"].get<int>();
  RecoverOptions opts = recover_options(g);
  if (j.contains("tau_threshold")) opts.tau_threshold = j["tau_threshold"].get<double>();
  if (j.contains("large_threshold")) opts.large_threshold = j["large_threshold"].get<double>();
  Meta meta = make_meta(g, "sweep", spec_path);
  meta.seed = base.seed;
  emit(g, stability_csv(meta, stability_experiment(base, deltas, trials, opts)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean families on S_n: U_1 structure, dictatorship recovery, isoperimetry"};
  app.set_version_flag("--version", std::string("snf ") + snf::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env = std::getenv("SNF_THREADS")) g.threads = std::atoi(env);
  app.add_option("--seed", g.seed, "RNG seed recorded in outputs");
  app.add_option("--samples", g.samples, "Monte Carlo sample count");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  double tau_thr = 0.0, large_thr = 0.0;
  auto* tau_opt = app.add_option("--tau-threshold", tau_thr, "override tau selection threshold");
  auto* large_opt =
      app.add_option("--large-threshold", large_thr, "override large-entry threshold");
  app.add_option("--format", g.format, "output format (json|csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "output path (default stdout)");

  std::string family_path, spec_path, mode = "exhaustive";
  int conj_n = 3, restarts = 64;
  bool stability = false;
  std::vector<std::uint64_t> sizes;

  auto* analyze = app.add_subcommand("analyze", "coefficient matrix, identities, tau, epsilon");
  analyze->add_option("family", family_path, "family JSON file")->required();

  auto* rec = app.add_subcommand("recover", "reconstruct the approximating dictatorship");
  rec->add_option("family", family_path, "family JSON file")->required();

  auto* iso = app.add_subcommand("iso", "edge boundary and the isoperimetric bound");
  iso->add_option("family", family_path, "family JSON file")->required();
  iso->add_flag("--stability", stability, "run the full stability chain (includes recovery)");

  auto* conj = app.add_subcommand("conjecture", "lex-segment minimality scan");
  conj->add_option("--n", conj_n, "symmetric group degree")->required();
  conj->add_option("--mode", mode, "exhaustive|local")->check(CLI::IsMember({"exhaustive", "local"}));
  conj->add_option("--sizes", sizes, "sizes k to report (default all)");
  conj->add_option("--restarts", restarts, "local-search restarts");

  auto* sweep = app.add_subcommand("sweep", "noise sweep of the recovery pipeline");
  sweep->add_option("spec", spec_path, "sweep spec JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  if (tau_opt->count()) g.tau_threshold = tau_thr;
  if (large_opt->count()) g.large_threshold = large_thr;
  snf::set_thread_count(g.threads);

  try {
    if (analyze->parsed()) return cmd_analyze(g, family_path);
    if (rec->parsed()) return cmd_recover(g, family_path);
    if (iso->parsed()) return cmd_iso(g, family_path, stability);
    if (conj->parsed()) return cmd_conjecture(g, conj_n, mode, sizes, restarts);
    if (sweep->parsed()) return cmd_sweep(g, spec_path);
  } catch (const snf::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const snf::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
