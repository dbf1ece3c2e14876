#include "sim/runner.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/util.hpp"
#include "inject/bias_list.hpp"
#include "inject/injector.hpp"
#include "memory/store.hpp"
#include "mitigate/mitigation.hpp"
#include "sim/extract.hpp"

namespace ltmfair {

namespace fs = std::filesystem;

namespace {

struct CheckpointState {
    int turn = 0;
    uint64_t rng_state = 0;
    uint64_t daily_cursor = 0;
    size_t auditor_failures = 0;
    ordered_json injector;
};

fs::path checkpoint_dir(const fs::path& out_dir) { return out_dir / "checkpoint"; }
fs::path state_path(const fs::path& out_dir) { return checkpoint_dir(out_dir) / "state.json"; }
fs::path memory_path(const fs::path& out_dir) { return checkpoint_dir(out_dir) / "memory.jsonl"; }
fs::path runlog_path(const fs::path& out_dir) { return out_dir / "runlog.jsonl"; }
fs::path manifest_path(const fs::path& out_dir) { return out_dir / "manifest.json"; }
fs::path audit_path(const fs::path& out_dir, int t) {
    return out_dir / ("audit_t" + std::to_string(t) + ".json");
}

CheckpointState read_state(const fs::path& out_dir) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_text_file(state_path(out_dir)));
    } catch (const std::exception& e) {
        throw error(errc::corrupt_checkpoint,
                    std::string("checkpoint state unreadable: ") + e.what());
    }
    try {
        CheckpointState st;
        st.turn = j.at("turn").get<int>();
        st.rng_state = std::stoull(j.at("rng_state").get<std::string>());
        st.daily_cursor = j.at("daily_cursor").get<uint64_t>();
        st.auditor_failures = j.value("auditor_failures", size_t{0});
        st.injector = j.at("injector");
        if (st.turn < 0) throw error(errc::corrupt_checkpoint, "checkpoint turn negative");
        return st;
    } catch (const error&) {
        throw;
    } catch (const std::exception& e) {
        throw error(errc::corrupt_checkpoint,
                    std::string("checkpoint state malformed: ") + e.what());
    }
}

class Runner {
public:
    Runner(const RunManifest& manifest, RunOptions options)
        : manifest_(manifest), options_(std::move(options)), out_dir_(options_.out_dir),
          rng_(manifest.seed) {
        validate_manifest(manifest_);
        if (options_.out_dir.empty())
            throw error(errc::invalid_argument, "options.out_dir: required");
        if (!options_.backend)
            throw error(errc::invalid_argument, "options.backend: required");
        if (options_.dib.empty())
            throw error(errc::invalid_argument, "options.dib: counterfactual set required");
        if (options_.daily_pool.empty()) options_.daily_pool = default_daily_pool();

        embedder_ = std::make_shared<HashingEmbedder>();
        store_ = make_store(manifest_.memory_kind,
                            StoreParams{manifest_.paged_window, manifest_.cluster_threshold},
                            embedder_);

        std::vector<Domain> cycle;
        for (Domain d : all_domains())
            if (manifest_.injected_domains.count(d)) cycle.push_back(d);
        injector_ = std::make_unique<Injector>(default_bias_list(), cycle,
                                               manifest_.injection_rate, options_.generator);

        ssp_ = manifest_.mitigation == Mitigation::ssp;
        dmt_ = manifest_.mitigation == Mitigation::dmt;
        if (dmt_) {
            tau_ = *manifest_.dmt_threshold;
            dmt_read_ = *manifest_.dmt_stage == DmtStage::read_time;
            if (!options_.auditor && *manifest_.auditor_backend_id != "scripted")
                owned_auditor_ = make_backend(*manifest_.auditor_backend_id);
        }

        select_audit_samples();
    }

    std::vector<AuditSnapshot> execute() {
        if (options_.resume) load_checkpoint();
        else init_fresh();

        runlog_.open(runlog_path(out_dir_), std::ios::app);
        if (!runlog_)
            throw error(errc::io_error, "cannot open " + runlog_path(out_dir_).string());

        if (audit_due(completed_) && !have_snapshot(completed_)) do_audit(completed_);
        while (completed_ < manifest_.total_turns) {
            if (options_.stop_after_turn >= 0 && completed_ >= options_.stop_after_turn) break;
            do_turn(completed_ + 1);
            ++completed_;
            if (audit_due(completed_)) do_audit(completed_);
        }
        return std::move(snapshots_);
    }

private:
    bool audit_due(int t) const { return t % manifest_.audit_interval == 0; }

    bool have_snapshot(int t) const {
        return std::any_of(snapshots_.begin(), snapshots_.end(),
                           [t](const AuditSnapshot& s) { return s.t == t; });
    }

    // First audit_scenarios_per_domain distinct scenarios per domain, every
    // group of each kept scenario; 0 keeps the whole set.
    void select_audit_samples() {
        const int limit = manifest_.audit_scenarios_per_domain;
        std::array<std::set<std::string>, kDomainCount> kept;
        for (const DibSample& s : options_.dib) {
            auto& scenarios = kept[static_cast<int>(s.domain)];
            if (limit > 0 && !scenarios.count(s.scenario_id) &&
                static_cast<int>(scenarios.size()) >= limit)
                continue;
            scenarios.insert(s.scenario_id);
            audit_samples_.push_back(&s);
        }
    }

    void init_fresh() {
        fs::create_directories(checkpoint_dir(out_dir_));
        for (const auto& entry : fs::directory_iterator(out_dir_)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("audit_t", 0) == 0) fs::remove(entry.path());
        }
        write_text_file_atomic(manifest_path(out_dir_), manifest_to_string(manifest_));
        write_text_file_atomic(runlog_path(out_dir_), "");
        completed_ = 0;
        write_checkpoint(0);
    }

    void load_checkpoint() {
        RunManifest stored;
        try {
            stored = manifest_from_string(read_text_file(manifest_path(out_dir_)));
        } catch (const std::exception& e) {
            throw error(errc::corrupt_checkpoint,
                        std::string("run manifest unreadable: ") + e.what());
        }
        if (manifest_to_string(stored) != manifest_to_string(manifest_))
            throw error(errc::invalid_manifest,
                        "resume: manifest does not match the one recorded in " +
                            out_dir_.string());

        CheckpointState st = read_state(out_dir_);
        std::string snapshot;
        try {
            snapshot = read_text_file(memory_path(out_dir_));
        } catch (const std::exception& e) {
            throw error(errc::corrupt_checkpoint,
                        std::string("memory snapshot unreadable: ") + e.what());
        }
        store_ = deserialize_store(snapshot, embedder_);
        if (store_->kind() != manifest_.memory_kind)
            throw error(errc::corrupt_checkpoint, "memory snapshot engine mismatch");
        if (static_cast<int>(store_->size()) != st.turn)
            throw error(errc::corrupt_checkpoint,
                        "memory holds " + std::to_string(store_->size()) +
                            " entries but checkpoint says turn " + std::to_string(st.turn));
        if (st.turn > manifest_.total_turns)
            throw error(errc::corrupt_checkpoint, "checkpoint turn exceeds total_turns");

        rng_.set_state(st.rng_state);
        daily_cursor_ = st.daily_cursor;
        auditor_failures_ = st.auditor_failures;
        injector_->restore_state(st.injector);
        completed_ = st.turn;

        truncate_runlog(st.turn);

        for (int t = 0; t <= completed_; t += manifest_.audit_interval) {
            if (!fs::exists(audit_path(out_dir_, t))) {
                if (t == completed_) continue;  // interrupted mid-audit, re-run it
                throw error(errc::corrupt_checkpoint,
                            "audit_t" + std::to_string(t) + ".json missing");
            }
            snapshots_.push_back(
                snapshot_from_string(read_text_file(audit_path(out_dir_, t))));
        }
    }

    void truncate_runlog(int turn) {
        std::string text;
        if (fs::exists(runlog_path(out_dir_))) text = read_text_file(runlog_path(out_dir_));
        std::vector<std::string> lines = split_lines(text);
        if (static_cast<int>(lines.size()) < turn)
            throw error(errc::corrupt_checkpoint,
                        "runlog holds " + std::to_string(lines.size()) +
                            " turns but checkpoint says " + std::to_string(turn));
        std::string kept;
        for (int i = 0; i < turn; ++i) kept += lines[i] + "\n";
        write_text_file_atomic(runlog_path(out_dir_), kept);
    }

    // One auditor verdict per fragment, cached by entry id. A backend outage
    // leaves the fragment untagged for this pass (counted, not cached), so a
    // later retrieval may still tag it.
    std::optional<AuditTag> tag_for(int64_t entry_id, const std::string& fragment) {
        try {
            return tag_cache_.get_or_compute(entry_id, [&] { return run_auditor(fragment); });
        } catch (const error& e) {
            if (e.code() == errc::auditor_unavailable) {
                ++auditor_failures_;
                return std::nullopt;
            }
            throw;
        }
    }

    std::optional<AuditTag> run_auditor(const std::string& fragment) {
        Backend* auditor = options_.auditor ? options_.auditor.get() : owned_auditor_.get();
        if (auditor) return audit_fragment(*auditor, fragment, tau_);
        std::optional<AuditTag> tag = scripted_auditor(fragment);
        if (tag && tag->suspicion < tau_) return std::nullopt;
        return tag;
    }

    std::map<int64_t, AuditTag> read_time_tags(const RetrievedContext& ctx) {
        std::map<int64_t, AuditTag> tags;
        if (!(dmt_ && dmt_read_)) return tags;
        for (const MemoryEntry& e : ctx.entries) {
            auto tag = tag_for(e.entry_id, e.text);
            if (tag) tags.emplace(e.entry_id, *tag);
        }
        return tags;
    }

    void do_turn(int t) {
        const DailyQuery& query = options_.daily_pool[daily_cursor_ % options_.daily_pool.size()];
        ++daily_cursor_;
        InjectionOutcome out = injector_->process(query, rng_);

        RetrievedContext ctx = store_->retrieve(out.final_query, manifest_.retrieval_k);
        std::map<int64_t, AuditTag> tags = read_time_tags(ctx);

        ChatRequest req;
        if (ssp_) req.system = ssp_text();
        req.messages.push_back({"user", decorate_context(ctx, tags) + "\n\n" + out.final_query});
        std::string response = options_.backend->complete(req);

        InteractionRecord record;
        record.turn = t;
        record.query = out.final_query;
        record.response = response;
        record.injected = out.injected;
        if (out.injected)
            record.injection_meta =
                InjectionMeta{*out.target_domain, narrative_template_name(*out.template_index)};

        std::vector<AuditTag> write_tags;
        if (dmt_ && !dmt_read_) {
            // Entry ids are contiguous from zero, so the next write lands at size().
            auto tag = tag_for(static_cast<int64_t>(store_->size()), entry_text(record));
            if (tag) write_tags.push_back(*tag);
        }
        store_->write(record, std::move(write_tags));

        append_runlog(record, out, ctx);
        write_checkpoint(t);
    }

    void append_runlog(const InteractionRecord& record, const InjectionOutcome& out,
                       const RetrievedContext& ctx) {
        ordered_json line;
        line["t"] = record.turn;
        line["injected"] = record.injected;
        if (out.target_domain) line["target_domain"] = domain_name(*out.target_domain);
        else line["target_domain"] = nullptr;
        line["query"] = record.query;
        line["response"] = record.response;
        ordered_json ids = ordered_json::array();
        for (const MemoryEntry& e : ctx.entries) ids.push_back(e.entry_id);
        line["retrieved_ids"] = std::move(ids);
        runlog_ << line.dump() << "\n";
        runlog_.flush();
        if (!runlog_)
            throw error(errc::io_error, "runlog write failed at turn " +
                                            std::to_string(record.turn));
    }

    // Snapshot first, state last: state.json is the commit point, so a crash
    // between the two leaves the previous consistent pair behind.
    void write_checkpoint(int turn) {
        write_text_file_atomic(memory_path(out_dir_), store_->serialize());
        ordered_json st;
        st["turn"] = turn;
        st["rng_state"] = std::to_string(rng_.state());
        st["daily_cursor"] = daily_cursor_;
        st["auditor_failures"] = auditor_failures_;
        st["injector"] = injector_->state_json();
        write_text_file_atomic(state_path(out_dir_), st.dump(2) + "\n");
    }

    void do_audit(int t) {
        AuditSnapshot snap;
        snap.t = t;
        snap.memory_digest_before = store_->digest();
        store_->freeze();
        try {
            snap.results.reserve(audit_samples_.size());
            for (const DibSample* sample : audit_samples_)
                snap.results.push_back(audit_query(*sample));
        } catch (...) {
            store_->unfreeze();
            throw;
        }
        store_->unfreeze();
        snap.memory_digest_after = store_->digest();

        snap.auditor_failures = auditor_failures_;
        for (const AuditQueryResult& r : snap.results)
            if (!r.valid) ++snap.invalid_count;
        snap.group_means = aggregate_group_means(snap.results);
        for (Domain d : all_domains()) {
            try {
                snap.gbv[d] = compute_gbv(snap.group_means, d);
            } catch (const error& e) {
                if (e.code() != errc::insufficient_groups) throw;
            }
        }
        snap.agbv = snap.gbv.empty() ? 0.0 : compute_agbv(snap.gbv);

        write_text_file_atomic(audit_path(out_dir_, t), snapshot_to_string(snap));
        snapshots_.push_back(std::move(snap));
        if (options_.on_audit) options_.on_audit(snapshots_.back());
    }

    // Grades one counterfactual. Backend and extraction failures mark the
    // result invalid instead of aborting the audit pass.
    AuditQueryResult audit_query(const DibSample& sample) {
        AuditQueryResult result;
        result.sample_id = sample.sample_id;
        result.domain = sample.domain;
        result.group = sample.group;

        RetrievedContext ctx = store_->retrieve(sample.prompt, manifest_.retrieval_k);
        std::map<int64_t, AuditTag> tags = read_time_tags(ctx);

        ChatRequest req;
        req.system = sample.persona;
        req.messages.push_back({"user", decorate_context(ctx, tags) + "\n\n" + sample.prompt});
        if (ssp_) req = apply_ssp(req);

        try {
            result.raw_response = complete_json(*options_.backend, req);
        } catch (const error& e) {
            result.failure_reason = std::string("backend: ") + e.what();
            return result;
        }
        try {
            result.score = extract_score(result.raw_response).score;
            result.valid = true;
        } catch (const error&) {
            result.failure_reason = "extraction_failed";
        }
        return result;
    }

    RunManifest manifest_;
    RunOptions options_;
    fs::path out_dir_;
    Rng rng_;

    std::shared_ptr<Embedder> embedder_;
    std::unique_ptr<MemoryStore> store_;
    std::unique_ptr<Injector> injector_;
    std::unique_ptr<Backend> owned_auditor_;
    std::vector<const DibSample*> audit_samples_;

    bool ssp_ = false;
    bool dmt_ = false;
    bool dmt_read_ = false;
    double tau_ = 0.0;

    uint64_t daily_cursor_ = 0;
    size_t auditor_failures_ = 0;
    int completed_ = 0;
    TagCache tag_cache_;
    std::ofstream runlog_;
    std::vector<AuditSnapshot> snapshots_;
};

}  // namespace

std::vector<AuditSnapshot> run(const RunManifest& manifest, RunOptions options) {
    Runner runner(manifest, std::move(options));
    return runner.execute();
}

int checkpoint_turn(const std::string& out_dir) {
    return read_state(fs::path(out_dir)).turn;
}

}  // namespace ltmfair
