#pragma once

#include <string>
#include <vector>

#include "nlpme/config.hpp"
#include "nlpme/diagnostics.hpp"

namespace nlpme {

/// Executes one configured run, persisting steps.csv, final particles,
/// mollified snapshots and the verdict JSON under outdir.
/// Returns 0 iff the solve completed and all enabled checks passed.
int run_single(const RunConfig& cfg, const std::string& outdir, bool quiet);

/// One subdirectory per eps plus a top-level SweepReport CSV/JSON.
int run_sweep(const RunConfig& cfg, const std::vector<double>& eps_override,
              const std::string& outdir, int jobs, bool quiet);

/// Replays all diagnostics from the persisted CSVs; the regenerated verdict
/// JSON must be byte-identical to the one written by the original run.
int run_check(const std::string& outdir, bool quiet);

/// Emits Barenblatt reference profiles as GridDensity CSVs.
int run_reference(const RunConfig& cfg, const std::string& outdir, bool quiet);

/// Verdict JSON built from persisted records only (shared by run and check).
std::string verdicts_json_from_records(const RunConfig& cfg,
                                       const std::vector<StepRecord>& recs,
                                       double m2_0, double l2_0_sq,
                                       double entropy_0);

}  // namespace nlpme
