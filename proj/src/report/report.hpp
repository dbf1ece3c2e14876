#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/manifest.hpp"
#include "metrics/gbv.hpp"
#include "sim/snapshot.hpp"

namespace ltmfair {

// One completed (or partially completed) run directory, loaded read-only.
struct RunArtifacts {
    std::string run_id;  // directory basename
    std::string run_dir;
    RunManifest manifest;
    std::vector<AuditSnapshot> snapshots;  // schedule order, gaps skipped
};

// Reads manifest.json plus every audit_t<N>.json on the run's schedule.
RunArtifacts load_run(const std::string& run_dir);

// Snapshot taken exactly at t. Throws error(errc::missing_snapshot) naming
// the run and the missing timestep.
const AuditSnapshot& snapshot_at(const RunArtifacts& run, int t);

// run_id,t,agbv — one row per recorded audit, runs in input order.
std::string agbv_series_csv(const std::vector<RunArtifacts>& runs);

// Builds the source × evaluated ΔGBV matrix from single-domain runs: row =
// the run's injected domain, cell = GBV(compare_t) - GBV(baseline_t) of the
// evaluated domain. Requires exactly one injected domain per run and at most
// one run per source domain.
PropagationMatrix build_propagation_matrix(const std::vector<RunArtifacts>& runs,
                                           int baseline_t = 0, int compare_t = 80);

// source,<nine domain columns>; only sources with a defined cell get a row;
// undefined cells render empty.
std::string propagation_matrix_csv(const PropagationMatrix& m);

struct MpRow {
    MemoryKind memory_kind;
    Mitigation mitigation;
    double delta_baseline = 0.0;   // ΔAGBV of the unmitigated run
    double delta_mitigated = 0.0;  // ΔAGBV of the mitigated run
    double mp_percent = 0.0;
};

// Pairs every mitigated run with the unmitigated run of the same memory kind
// and reports the mitigation percentage over ΔAGBV(baseline_t → compare_t).
std::vector<MpRow> build_mp_table(const std::vector<RunArtifacts>& runs, int baseline_t = 0,
                                  int compare_t = 80);

// memory_kind,mitigation,delta_baseline,delta_mitigated,mp_percent
std::string mp_table_csv(const std::vector<MpRow>& rows);

// Echoes every contributing manifest and AGBV series; carries the propagation
// off-diagonal stats when a matrix was built.
ordered_json summary_json(const std::vector<RunArtifacts>& runs,
                          const std::optional<PropagationMatrix>& matrix);

// RFC-4180 quoting: fields with commas, quotes or newlines get wrapped,
// embedded quotes doubled.
std::string csv_escape(const std::string& field);

}  // namespace ltmfair
