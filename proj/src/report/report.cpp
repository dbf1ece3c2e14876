#include "report/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "core/errors.hpp"
#include "core/util.hpp"

namespace ltmfair {

namespace fs = std::filesystem;

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string basename_of(const std::string& dir) {
    fs::path p = fs::path(dir).lexically_normal();
    std::string name = p.filename().string();
    if (name.empty() || name == ".") name = p.parent_path().filename().string();
    return name.empty() ? dir : name;
}

double agbv_delta(const RunArtifacts& run, int baseline_t, int compare_t) {
    return snapshot_at(run, compare_t).agbv - snapshot_at(run, baseline_t).agbv;
}

}  // namespace

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

RunArtifacts load_run(const std::string& run_dir) {
    RunArtifacts run;
    run.run_dir = run_dir;
    run.run_id = basename_of(run_dir);
    fs::path dir(run_dir);
    run.manifest = manifest_from_string(read_text_file(dir / "manifest.json"));
    for (int t = 0; t <= run.manifest.total_turns; t += run.manifest.audit_interval) {
        fs::path p = dir / ("audit_t" + std::to_string(t) + ".json");
        if (!fs::exists(p)) continue;
        run.snapshots.push_back(snapshot_from_string(read_text_file(p)));
    }
    return run;
}

const AuditSnapshot& snapshot_at(const RunArtifacts& run, int t) {
    for (const AuditSnapshot& s : run.snapshots)
        if (s.t == t) return s;
    throw error(errc::missing_snapshot,
                run.run_id + ": audit_t" + std::to_string(t) + ".json not found");
}

std::string agbv_series_csv(const std::vector<RunArtifacts>& runs) {
    std::string out = "run_id,t,agbv\r\n";
    for (const RunArtifacts& run : runs)
        for (const AuditSnapshot& s : run.snapshots)
            out += csv_escape(run.run_id) + "," + std::to_string(s.t) + "," +
                   format_value(s.agbv) + "\r\n";
    return out;
}

PropagationMatrix build_propagation_matrix(const std::vector<RunArtifacts>& runs,
                                           int baseline_t, int compare_t) {
    PropagationMatrix m;
    m.baseline_t = baseline_t;
    m.compare_t = compare_t;
    for (const RunArtifacts& run : runs) {
        if (run.manifest.injected_domains.size() != 1)
            throw error(errc::invalid_argument,
                        run.run_id + ": propagation matrix rows need single-domain runs");
        Domain source = *run.manifest.injected_domains.begin();
        const int row = static_cast<int>(source);
        for (const auto& cell : m.cells[row])
            if (cell)
                throw error(errc::invalid_argument,
                            run.run_id + ": duplicate source domain " + domain_name(source));
        const AuditSnapshot& base = snapshot_at(run, baseline_t);
        const AuditSnapshot& cmp = snapshot_at(run, compare_t);
        for (Domain d : all_domains()) {
            auto b = base.gbv.find(d);
            auto c = cmp.gbv.find(d);
            if (b == base.gbv.end() || c == cmp.gbv.end()) continue;
            m.cells[row][static_cast<int>(d)] = c->second - b->second;
        }
    }
    return m;
}

std::string propagation_matrix_csv(const PropagationMatrix& m) {
    std::string out = "source";
    for (Domain d : all_domains()) out += "," + domain_name(d);
    out += "\r\n";
    for (Domain source : all_domains()) {
        const auto& row = m.cells[static_cast<int>(source)];
        if (std::none_of(row.begin(), row.end(), [](const auto& c) { return c.has_value(); }))
            continue;
        out += domain_name(source);
        for (const auto& cell : row) out += "," + (cell ? format_value(*cell) : std::string());
        out += "\r\n";
    }
    return out;
}

std::vector<MpRow> build_mp_table(const std::vector<RunArtifacts>& runs, int baseline_t,
                                  int compare_t) {
    std::map<MemoryKind, const RunArtifacts*> baselines;
    for (const RunArtifacts& run : runs) {
        if (run.manifest.mitigation != Mitigation::none) continue;
        auto [it, inserted] = baselines.emplace(run.manifest.memory_kind, &run);
        if (!inserted)
            throw error(errc::invalid_argument,
                        run.run_id + ": second unmitigated run for memory kind " +
                            memory_kind_name(run.manifest.memory_kind));
    }
    std::vector<MpRow> rows;
    for (const RunArtifacts& run : runs) {
        if (run.manifest.mitigation == Mitigation::none) continue;
        auto it = baselines.find(run.manifest.memory_kind);
        if (it == baselines.end())
            throw error(errc::invalid_argument,
                        run.run_id + ": no unmitigated run for memory kind " +
                            memory_kind_name(run.manifest.memory_kind));
        MpRow row;
        row.memory_kind = run.manifest.memory_kind;
        row.mitigation = run.manifest.mitigation;
        row.delta_baseline = agbv_delta(*it->second, baseline_t, compare_t);
        row.delta_mitigated = agbv_delta(run, baseline_t, compare_t);
        row.mp_percent = compute_mp(row.delta_mitigated, row.delta_baseline);
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const MpRow& a, const MpRow& b) {
        if (a.memory_kind != b.memory_kind) return a.memory_kind < b.memory_kind;
        return a.mitigation < b.mitigation;
    });
    return rows;
}

std::string mp_table_csv(const std::vector<MpRow>& rows) {
    std::string out = "memory_kind,mitigation,delta_baseline,delta_mitigated,mp_percent\r\n";
    for (const MpRow& r : rows)
        out += memory_kind_name(r.memory_kind) + "," + mitigation_name(r.mitigation) + "," +
               format_value(r.delta_baseline) + "," + format_value(r.delta_mitigated) + "," +
               format_value(r.mp_percent) + "\r\n";
    return out;
}

ordered_json summary_json(const std::vector<RunArtifacts>& runs,
                          const std::optional<PropagationMatrix>& matrix) {
    ordered_json out;
    out["runs"] = ordered_json::array();
    for (const RunArtifacts& run : runs) {
        ordered_json r;
        r["run_id"] = run.run_id;
        r["manifest"] = manifest_to_json(run.manifest);
        ordered_json series = ordered_json::array();
        for (const AuditSnapshot& s : run.snapshots)
            series.push_back(ordered_json::array({s.t, s.agbv}));
        r["agbv_series"] = std::move(series);
        out["runs"].push_back(std::move(r));
    }
    if (matrix) {
        PropagationStats stats = propagation_stats(*matrix);
        ordered_json p;
        p["baseline_t"] = matrix->baseline_t;
        p["compare_t"] = matrix->compare_t;
        p["offdiag_positive_fraction"] = stats.offdiag_positive_fraction;
        p["mean_offdiag"] = stats.mean_offdiag;
        out["propagation"] = std::move(p);
    } else {
        out["propagation"] = nullptr;
    }
    return out;
}

}  // namespace ltmfair
