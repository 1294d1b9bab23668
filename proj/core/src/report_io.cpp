#include "snf/report_io.hpp"

#include <cstdio>

#include "snf/family_io.hpp"
#include "snf/json_out.hpp"
#include "snf/version.hpp"

namespace snf {

namespace {

void write_meta(JsonWriter& w, const Meta& meta) {
  w.key("meta").begin_object();
  w.key("version").value(std::string_view(kVersion));
  w.key("seed").value(meta.seed);
  w.key("config_hash").value(std::string_view(meta.config_hash));
  w.end_object();
}

void write_matrix(JsonWriter& w, const char* key, const std::vector<double>& a, int n) {
  w.key(key).begin_array();
  for (int i = 0; i < n; ++i) {
    w.begin_array();
    for (int j = 0; j < n; ++j) w.value(a[(std::size_t)(i * n + j)]);
    w.end_array();
  }
  w.end_array();
}

const char* kind_str(EpsilonKind k) { return k == EpsilonKind::Exact ? "exact" : "monte_carlo"; }

void write_strong_line(JsonWriter& w, const StrongLineReport& r) {
  w.begin_object();
  w.key("kind").value(std::string_view(r.kind == LineKind::Row ? "row" : "column"));
  w.key("index").value(r.index + 1);
  w.key("strength_p").value(r.strength_p);
  if (r.q_good >= 0)
    w.key("q_good").value(r.q_good);
  else
    w.key("q_good").null();
  w.key("method").value(std::string_view(r.method == DetectMethod::Direct ? "direct" : "recursive"));
  w.key("degraded").value(r.degraded);
  w.key("trace").begin_array();
  for (const auto& t : r.trace) w.value(std::string_view(t));
  w.end_array();
  w.end_object();
}

std::string csv_matrix(const std::vector<double>& a, int n, const Meta& meta) {
  std::string out = csv_meta_line(meta);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out += ',';
      out += fmt17(a[(std::size_t)(i * n + j)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string make_config_hash(const std::string& canonical_config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                (unsigned long long)fnv1a64(canonical_config));
  return buf;
}

std::string csv_meta_line(const Meta& meta) {
  return "# snf v" + std::string(kVersion) + " seed=" + std::to_string(meta.seed) +
         " config=" + meta.config_hash + "\n";
}

std::string analyze_report_json(const Meta& meta, const CoefficientMatrix& M, const TauMatrix& T,
                                const std::optional<IdentityReport>& identity) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("n").value(M.n);
  w.key("c").value(M.c);
  w.key("epsilon").value(M.epsilon);
  w.key("epsilon_kind").value(std::string_view(kind_str(M.epsilon_kind)));
  if (M.epsilon_kind == EpsilonKind::MonteCarlo) w.key("epsilon_stderr").value(M.epsilon_stderr);
  if (identity) {
    w.key("identity").begin_object();
    w.key("max_row_violation").value(identity->max_row_violation);
    w.key("max_col_violation").value(identity->max_col_violation);
    w.key("sum_sq_violation").value(identity->sum_sq_violation);
    w.key("max_abs_entry").value(identity->max_abs_entry);
    w.key("bound_violations").value(identity->bound_violations);
    w.end_object();
  }
  write_matrix(w, "a", M.a, M.n);
  write_matrix(w, "tau", T.tau, T.n);
  w.end_object();
  return w.str();
}

std::string coefficient_csv(const CoefficientMatrix& M, const Meta& meta) {
  return csv_matrix(M.a, M.n, meta);
}

std::string tau_csv(const TauMatrix& T, const Meta& meta) { return csv_matrix(T.tau, T.n, meta); }

std::string recovery_json(const Meta& meta, const RecoveryResult& r) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("c").value(r.c);
  w.key("epsilon").value(r.epsilon);
  w.key("epsilon_kind").value(std::string_view(kind_str(r.epsilon_kind)));
  if (r.epsilon_kind == EpsilonKind::MonteCarlo) w.key("epsilon_stderr").value(r.epsilon_stderr);
  w.key("d").value(r.d);
  w.key("symdiff_fraction").value(r.symdiff_fraction);
  w.key("large_threshold").value(r.large_threshold_used);
  w.key("tau_threshold").value(r.tau_threshold_used);
  w.key("strong_line");
  write_strong_line(w, r.strong_line);
  if (r.recursive_check) {
    w.key("recursive_check");
    write_strong_line(w, *r.recursive_check);
  }
  if (r.medium) {
    w.key("medium_value").begin_object();
    w.key("gamma").value(r.medium->gamma);
    w.key("gamma_far").value(r.medium->gamma_far);
    const char* cluster = r.medium->cluster == TauCluster::ZeroOne
                              ? "zero_one"
                              : (r.medium->cluster == TauCluster::Gamma ? "gamma" : "mixed_violation");
    w.key("cluster").value(std::string_view(cluster));
    w.key("reasonable_count").value(r.medium->reasonable_count);
    w.end_object();
  }
  // Embed the recovered family in the family-file format.
  w.key("G").raw_json(family_to_json(r.G));
  w.end_object();
  return w.str();
}

std::string no_strong_line_json(const Meta& meta, const NoStrongLineError& e) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("error").value(std::string_view("no_strong_line"));
  w.key("message").value(std::string_view(e.what()));
  w.key("best_p").value(e.best_p);
  w.key("p_max").value(e.p_max);
  w.key("large_threshold").value(e.large_threshold);
  w.end_object();
  return w.str();
}

std::string boundary_json(const Meta& meta, const BoundaryReport& r) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("size").value(r.size);
  w.key("boundary").value(r.boundary);
  w.key("c").value(r.c);
  w.key("bound").value(r.bound);
  w.key("slack").value(r.slack);
  w.key("delta0").value(r.delta0);
  w.key("equality").value(r.equality);
  w.end_object();
  return w.str();
}

std::string iso_stability_json(const Meta& meta, const IsoStability& s) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("boundary").begin_object();
  w.key("size").value(s.boundary.size);
  w.key("boundary").value(s.boundary.boundary);
  w.key("c").value(s.boundary.c);
  w.key("bound").value(s.boundary.bound);
  w.key("slack").value(s.boundary.slack);
  w.key("delta0").value(s.boundary.delta0);
  w.key("equality").value(s.boundary.equality);
  w.end_object();
  w.key("eps_chi_bound").value(s.eps_chi_bound);
  w.key("eps_chi_actual").value(s.eps_chi_actual);
  w.key("eps_pm1").value(s.eps_pm1);
  w.key("recovery_symdiff").value(s.recovery.symdiff_fraction);
  w.key("recovery_d").value(s.recovery.d);
  w.end_object();
  return w.str();
}

std::string stability_csv(const Meta& meta, const std::vector<StabilityRow>& rows) {
  std::string out = csv_meta_line(meta);
  out += "delta,trial,epsilon,symdiff,symdiff_truth,d,c,eta,ratio\n";
  for (const auto& r : rows) {
    out += fmt17(r.delta);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += fmt17(r.epsilon);
    out += ',';
    out += fmt17(r.symdiff);
    out += ',';
    out += fmt17(r.symdiff_truth);
    out += ',';
    out += fmt17(r.d);
    out += ',';
    out += fmt17(r.c);
    out += ',';
    out += fmt17(r.eta);
    out += ',';
    out += fmt17(r.ratio);
    out += '\n';
  }
  return out;
}

std::string conjecture_csv(const Meta& meta, const std::vector<ConjectureRow>& rows,
                           const std::vector<std::string>& witness_files) {
  std::string out = csv_meta_line(meta);
  out += "k,lex_boundary,best_boundary,improved,witness_file\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(rows[i].k);
    out += ',';
    out += std::to_string(rows[i].lex_boundary);
    out += ',';
    out += std::to_string(rows[i].best_boundary);
    out += ',';
    out += rows[i].improved ? "1" : "0";
    out += ',';
    if (i < witness_files.size()) out += witness_files[i];
    out += '\n';
  }
  return out;
}

std::string restriction_diagnostic_json(const Meta& meta, const Restriction& r, double m_value,
                                        const TypicalityReport& typ,
                                        const PermutationGoodness& goodness) {
  JsonWriter w;
  w.begin_object();
  write_meta(w, meta);
  w.key("restriction").begin_object();
  w.key("n").value(r.n);
  auto mask_array = [&](const char* k, std::uint32_t mask) {
    w.key(k).begin_array();
    for (int i = 0; i < r.n; ++i)
      if ((mask >> i) & 1u) w.value(i + 1);
    w.end_array();
  };
  mask_array("X", r.X);
  mask_array("Y", r.Y);
  w.end_object();
  w.key("m").value(m_value);
  w.key("typicality").begin_object();
  w.key("a").value(typ.a_ok);
  w.key("b").value(typ.b_ok);
  w.key("c").value(typ.c_ok);
  w.key("boolean_fail_prob").value(typ.boolean_fail_prob);
  w.key("e_g1").value(typ.e_g1);
  w.key("e_g2").value(typ.e_g2);
  w.key("l2_deviation").value(typ.l2_deviation);
  w.end_object();
  w.key("goodness_fraction").value(goodness.fraction);
  w.key("goodness_stderr").value(goodness.stderr_);
  w.end_object();
  return w.str();
}

}  // namespace snf
