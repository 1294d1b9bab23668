#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snf/coeff.hpp"
#include "snf/isoperimetry.hpp"
#include "snf/recovery.hpp"
#include "snf/restriction.hpp"
#include "snf/strong_line.hpp"

namespace snf {

/// Stamp embedded in every output artifact.
struct Meta {
  std::uint64_t seed = 0;
  std::string config_hash;  // hex fnv1a of the canonical invocation
};

std::string make_config_hash(const std::string& canonical_config);

/// Leading comment line for CSV outputs ("# snf v... seed=... config=...").
std::string csv_meta_line(const Meta& meta);

std::string analyze_report_json(const Meta& meta, const CoefficientMatrix& M, const TauMatrix& T,
                                const std::optional<IdentityReport>& identity);

/// Row-major CSV, 17 significant digits, one leading meta comment line.
std::string coefficient_csv(const CoefficientMatrix& M, const Meta& meta);
std::string tau_csv(const TauMatrix& T, const Meta& meta);

std::string recovery_json(const Meta& meta, const RecoveryResult& r);
std::string no_strong_line_json(const Meta& meta, const NoStrongLineError& e);

std::string boundary_json(const Meta& meta, const BoundaryReport& r);
std::string iso_stability_json(const Meta& meta, const IsoStability& s);

/// header: delta,trial,epsilon,symdiff,symdiff_truth,d,c,eta,ratio
std::string stability_csv(const Meta& meta, const std::vector<StabilityRow>& rows);

/// header: k,lex_boundary,best_boundary,improved,witness_file
std::string conjecture_csv(const Meta& meta, const std::vector<ConjectureRow>& rows,
                           const std::vector<std::string>& witness_files);

/// {restriction, m, typicality:{a,b,c}, goodness fraction, seeds}
std::string restriction_diagnostic_json(const Meta& meta, const Restriction& r, double m_value,
                                        const TypicalityReport& typ,
                                        const PermutationGoodness& goodness);

}  // namespace snf
