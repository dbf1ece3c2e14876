#include "ltmfair.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/manifest.hpp"
#include "core/util.hpp"
#include "dib/dataset.hpp"
#include "dib/templates.hpp"
#include "gateway/backend.hpp"
#include "memory/store.hpp"
#include "metrics/gbv.hpp"
#include "report/report.hpp"
#include "sim/runner.hpp"
#include "sim/snapshot.hpp"

using namespace ltmfair;

namespace {

thread_local std::string tls_error;

lf_status map_code(errc c) {
    switch (c) {
        case errc::invalid_argument:      return LF_INVALID_ARGUMENT;
        case errc::io_error:              return LF_IO_ERROR;
        case errc::invalid_manifest:      return LF_INVALID_MANIFEST;
        case errc::missing_roster:        return LF_MISSING_ROSTER;
        case errc::placeholder_error:     return LF_PLACEHOLDER_ERROR;
        case errc::schema_error:          return LF_SCHEMA_ERROR;
        case errc::read_only_violation:   return LF_READ_ONLY_VIOLATION;
        case errc::embed_backend_error:   return LF_EMBED_BACKEND_ERROR;
        case errc::corrupt_snapshot:      return LF_CORRUPT_SNAPSHOT;
        case errc::rate_limited:          return LF_RATE_LIMITED;
        case errc::backend_unavailable:   return LF_BACKEND_UNAVAILABLE;
        case errc::auth_error:            return LF_AUTH_ERROR;
        case errc::malformed_response:    return LF_MALFORMED_RESPONSE;
        case errc::unknown_group:         return LF_UNKNOWN_GROUP;
        case errc::generator_unavailable: return LF_GENERATOR_UNAVAILABLE;
        case errc::extraction_error:      return LF_EXTRACTION_ERROR;
        case errc::corrupt_checkpoint:    return LF_CORRUPT_CHECKPOINT;
        case errc::insufficient_groups:   return LF_INSUFFICIENT_GROUPS;
        case errc::empty_input:           return LF_EMPTY_INPUT;
        case errc::missing_domain:        return LF_MISSING_DOMAIN;
        case errc::undefined_mp:          return LF_UNDEFINED_MP;
        case errc::auditor_unavailable:   return LF_AUDITOR_UNAVAILABLE;
        case errc::missing_snapshot:      return LF_MISSING_SNAPSHOT;
    }
    return LF_INTERNAL;
}

template <typename Fn>
lf_status guard(Fn&& fn) {
    try {
        fn();
        tls_error.clear();
        return LF_OK;
    } catch (const error& e) {
        tls_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        tls_error = e.what();
        return LF_INTERNAL;
    } catch (...) {
        tls_error = "unknown failure";
        return LF_INTERNAL;
    }
}

lf_status fail_argument(const char* message) {
    tls_error = message;
    return LF_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<Domain> parse_domains_csv(const std::string& csv) {
    std::vector<Domain> out;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t comma = csv.find(',', start);
        std::string token = comma == std::string::npos ? csv.substr(start)
                                                       : csv.substr(start, comma - start);
        size_t b = token.find_first_not_of(" \t");
        size_t e = token.find_last_not_of(" \t");
        if (b != std::string::npos) {
            token = token.substr(b, e - b + 1);
            auto d = parse_domain(token);
            if (!d) throw error(errc::invalid_argument, "unknown domain: " + token);
            out.push_back(*d);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw error(errc::invalid_argument, "domains list is empty");
    return out;
}

}  // namespace

struct lf_dataset {
    std::vector<DibSample> samples;
};

struct lf_store {
    std::unique_ptr<MemoryStore> store;
};

extern "C" {

const char* lf_version(void) { return "0.1.0"; }

const char* lf_status_name(lf_status s) {
    switch (s) {
        case LF_OK:                    return "ok";
        case LF_INVALID_ARGUMENT:      return "invalid_argument";
        case LF_IO_ERROR:              return "io_error";
        case LF_INVALID_MANIFEST:      return "invalid_manifest";
        case LF_MISSING_ROSTER:        return "missing_roster";
        case LF_PLACEHOLDER_ERROR:     return "placeholder_error";
        case LF_SCHEMA_ERROR:          return "schema_error";
        case LF_READ_ONLY_VIOLATION:   return "read_only_violation";
        case LF_EMBED_BACKEND_ERROR:   return "embed_backend_error";
        case LF_CORRUPT_SNAPSHOT:      return "corrupt_snapshot";
        case LF_RATE_LIMITED:          return "rate_limited";
        case LF_BACKEND_UNAVAILABLE:   return "backend_unavailable";
        case LF_AUTH_ERROR:            return "auth_error";
        case LF_MALFORMED_RESPONSE:    return "malformed_response";
        case LF_UNKNOWN_GROUP:         return "unknown_group";
        case LF_GENERATOR_UNAVAILABLE: return "generator_unavailable";
        case LF_EXTRACTION_ERROR:      return "extraction_error";
        case LF_CORRUPT_CHECKPOINT:    return "corrupt_checkpoint";
        case LF_INSUFFICIENT_GROUPS:   return "insufficient_groups";
        case LF_EMPTY_INPUT:           return "empty_input";
        case LF_MISSING_DOMAIN:        return "missing_domain";
        case LF_UNDEFINED_MP:          return "undefined_mp";
        case LF_AUDITOR_UNAVAILABLE:   return "auditor_unavailable";
        case LF_MISSING_SNAPSHOT:      return "missing_snapshot";
        case LF_INTERNAL:              return "internal";
    }
    return "unknown";
}

const char* lf_last_error(void) { return tls_error.c_str(); }

void lf_string_free(char* s) { std::free(s); }

lf_status lf_dataset_generate(const char* domains_csv, const char* template_pack_path,
                              lf_dataset** out) {
    if (!out) return fail_argument("out is null");
    *out = nullptr;
    return guard([&] {
        std::vector<TemplateTuple> pack =
            template_pack_path ? load_template_pack(read_text_file(template_pack_path))
                               : default_template_pack();
        if (domains_csv) {
            std::vector<Domain> wanted = parse_domains_csv(domains_csv);
            std::vector<TemplateTuple> filtered;
            for (const TemplateTuple& t : pack)
                for (Domain d : wanted)
                    if (t.domain == d) {
                        filtered.push_back(t);
                        break;
                    }
            pack = std::move(filtered);
        }
        auto ds = std::make_unique<lf_dataset>();
        ds->samples = expand_templates(pack);
        *out = ds.release();
    });
}

lf_status lf_dataset_load(const char* jsonl_path, lf_dataset** out) {
    if (!jsonl_path) return fail_argument("jsonl_path is null");
    if (!out) return fail_argument("out is null");
    *out = nullptr;
    return guard([&] {
        auto ds = std::make_unique<lf_dataset>();
        ds->samples = read_dataset(jsonl_path);
        *out = ds.release();
    });
}

lf_status lf_dataset_write(const lf_dataset* ds, const char* jsonl_path) {
    if (!ds) return fail_argument("dataset is null");
    if (!jsonl_path) return fail_argument("jsonl_path is null");
    return guard([&] { write_dataset(ds->samples, jsonl_path); });
}

size_t lf_dataset_size(const lf_dataset* ds) { return ds ? ds->samples.size() : 0; }

lf_status lf_dataset_validate(const lf_dataset* ds, size_t* violations_out,
                              char** violations_json) {
    if (!ds) return fail_argument("dataset is null");
    if (!violations_out) return fail_argument("violations_out is null");
    if (violations_json) *violations_json = nullptr;
    return guard([&] {
        ValidationReport report = validate_counterfactual_set(ds->samples);
        *violations_out = report.violations.size();
        if (violations_json) {
            ordered_json arr = ordered_json::array();
            for (const std::string& id : report.violations) arr.push_back(id);
            *violations_json = dup_string(arr.dump());
        }
    });
}

void lf_dataset_free(lf_dataset* ds) { delete ds; }

lf_status lf_default_templates(char** json_out) {
    if (!json_out) return fail_argument("json_out is null");
    *json_out = nullptr;
    return guard([&] { *json_out = dup_string(template_pack_to_json(default_template_pack())); });
}

lf_status lf_store_create(const char* kind, int paged_window, double cluster_threshold,
                          lf_store** out) {
    if (!kind) return fail_argument("kind is null");
    if (!out) return fail_argument("out is null");
    *out = nullptr;
    return guard([&] {
        auto parsed = parse_memory_kind(kind);
        if (!parsed)
            throw error(errc::invalid_argument, std::string("unknown memory kind: ") + kind);
        StoreParams params;
        if (paged_window > 0) params.paged_window = paged_window;
        if (cluster_threshold != 0.0) params.cluster_threshold = cluster_threshold;
        auto st = std::make_unique<lf_store>();
        st->store = make_store(*parsed, params, std::make_shared<HashingEmbedder>());
        *out = st.release();
    });
}

lf_status lf_store_write(lf_store* st, int turn, const char* query, const char* response,
                         int64_t* entry_id_out) {
    if (!st) return fail_argument("store is null");
    if (!query || !response) return fail_argument("query/response is null");
    return guard([&] {
        InteractionRecord record;
        record.turn = turn;
        record.query = query;
        record.response = response;
        int64_t id = st->store->write(record);
        if (entry_id_out) *entry_id_out = id;
    });
}

lf_status lf_store_retrieve(const lf_store* st, const char* query, int k, char** json_out) {
    if (!st) return fail_argument("store is null");
    if (!query) return fail_argument("query is null");
    if (!json_out) return fail_argument("json_out is null");
    *json_out = nullptr;
    return guard([&] {
        RetrievedContext ctx = st->store->retrieve(query, k);
        ordered_json arr = ordered_json::array();
        for (size_t i = 0; i < ctx.entries.size(); ++i) {
            ordered_json e;
            e["entry_id"] = ctx.entries[i].entry_id;
            e["turn"] = ctx.entries[i].turn;
            e["text"] = ctx.entries[i].text;
            e["score"] = ctx.scores[i];
            arr.push_back(std::move(e));
        }
        *json_out = dup_string(arr.dump());
    });
}

lf_status lf_store_digest(const lf_store* st, char** hex_out) {
    if (!st) return fail_argument("store is null");
    if (!hex_out) return fail_argument("hex_out is null");
    *hex_out = nullptr;
    return guard([&] { *hex_out = dup_string(st->store->digest()); });
}

size_t lf_store_size(const lf_store* st) { return st ? st->store->size() : 0; }

void lf_store_free(lf_store* st) { delete st; }

lf_status lf_run_execute(const char* manifest_path, const char* out_dir,
                         const lf_run_options* options) {
    if (!manifest_path) return fail_argument("manifest_path is null");
    if (!out_dir) return fail_argument("out_dir is null");
    return guard([&] {
        RunManifest manifest = manifest_from_string(read_text_file(manifest_path));
        std::string base_url = options && options->base_url ? options->base_url : "";
        std::string api_key = options && options->api_key ? options->api_key : "";

        RunOptions ro;
        ro.out_dir = out_dir;
        ro.backend = make_backend(manifest.backend_id, base_url, api_key);
        if (options && options->generator_backend_id)
            ro.generator = make_backend(options->generator_backend_id, base_url, api_key);
        if (manifest.mitigation == Mitigation::dmt &&
            *manifest.auditor_backend_id != "scripted")
            ro.auditor = make_backend(*manifest.auditor_backend_id, base_url, api_key);
        if (options && options->dib_path) ro.dib = read_dataset(options->dib_path);
        else ro.dib = expand_templates(default_template_pack());
        if (options) {
            ro.resume = options->resume != 0;
            ro.stop_after_turn = options->stop_after_turn > 0 ? options->stop_after_turn : -1;
            if (options->on_audit) {
                lf_audit_callback cb = options->on_audit;
                void* userdata = options->userdata;
                ro.on_audit = [cb, userdata](const AuditSnapshot& s) {
                    cb(s.t, s.agbv, userdata);
                };
            }
        } else {
            ro.stop_after_turn = -1;
        }
        run(manifest, std::move(ro));
    });
}

lf_status lf_checkpoint_turn(const char* out_dir, int* turn_out) {
    if (!out_dir) return fail_argument("out_dir is null");
    if (!turn_out) return fail_argument("turn_out is null");
    return guard([&] { *turn_out = checkpoint_turn(out_dir); });
}

lf_status lf_gbv(const double* means, size_t n, double* out) {
    if (!means && n > 0) return fail_argument("means is null");
    if (!out) return fail_argument("out is null");
    return guard([&] {
        if (n < 2)
            throw error(errc::insufficient_groups, "need at least two group means");
        double bar = 0.0;
        for (size_t i = 0; i < n; ++i) bar += means[i];
        bar /= static_cast<double>(n);
        double var = 0.0;
        for (size_t i = 0; i < n; ++i) var += (means[i] - bar) * (means[i] - bar);
        *out = std::sqrt(var / static_cast<double>(n));
    });
}

lf_status lf_mp(double delta_mitigated, double delta_original, double* out) {
    if (!out) return fail_argument("out is null");
    return guard([&] { *out = compute_mp(delta_mitigated, delta_original); });
}

lf_status lf_snapshot_summary(const char* snapshot_path, char** json_out) {
    if (!snapshot_path) return fail_argument("snapshot_path is null");
    if (!json_out) return fail_argument("json_out is null");
    *json_out = nullptr;
    return guard([&] {
        AuditSnapshot snap = snapshot_from_string(read_text_file(snapshot_path));
        ordered_json j;
        j["t"] = snap.t;
        j["agbv"] = snap.agbv;
        ordered_json gbv;
        for (Domain d : all_domains()) {
            auto it = snap.gbv.find(d);
            if (it != snap.gbv.end()) gbv[domain_name(d)] = it->second;
        }
        j["gbv"] = std::move(gbv);
        j["invalid_count"] = snap.invalid_count;
        j["auditor_failures"] = snap.auditor_failures;
        *json_out = dup_string(j.dump());
    });
}

lf_status lf_report(const char* const* run_dirs, size_t n_runs, const char* out_dir,
                    int baseline_t, int compare_t, int want_series, int want_matrix,
                    int want_mp, char** paths_json_out) {
    if (!run_dirs || n_runs == 0) return fail_argument("run_dirs is empty");
    if (!out_dir) return fail_argument("out_dir is null");
    if (paths_json_out) *paths_json_out = nullptr;
    return guard([&] {
        if (baseline_t < 0) baseline_t = 0;
        if (compare_t < 0) compare_t = 80;
        if (!want_series && !want_matrix && !want_mp)
            want_series = want_matrix = want_mp = 1;

        std::vector<RunArtifacts> runs;
        runs.reserve(n_runs);
        for (size_t i = 0; i < n_runs; ++i) {
            if (!run_dirs[i]) throw error(errc::invalid_argument, "run_dirs entry is null");
            runs.push_back(load_run(run_dirs[i]));
        }

        std::filesystem::create_directories(out_dir);
        std::vector<std::string> written;
        auto emit = [&](const std::string& name, const std::string& content) {
            std::string path = (std::filesystem::path(out_dir) / name).string();
            write_text_file_atomic(path, content);
            written.push_back(path);
        };

        if (want_series) emit("agbv_series.csv", agbv_series_csv(runs));
        std::optional<PropagationMatrix> matrix;
        if (want_matrix) {
            matrix = build_propagation_matrix(runs, baseline_t, compare_t);
            emit("propagation_matrix.csv", propagation_matrix_csv(*matrix));
        }
        if (want_mp)
            emit("mp_table.csv", mp_table_csv(build_mp_table(runs, baseline_t, compare_t)));
        emit("summary.json", summary_json(runs, matrix).dump(2) + "\n");

        if (paths_json_out) {
            ordered_json arr = ordered_json::array();
            for (const std::string& p : written) arr.push_back(p);
            *paths_json_out = dup_string(arr.dump());
        }
    });
}

}  // extern "C"
