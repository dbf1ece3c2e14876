// CLI for the longitudinal fairness toolkit. Four verbs: gen (counterfactual
// dataset), run (simulation), report (CSV/JSON artifacts), metrics (ad-hoc
// GBV / MP). Everything substantive happens behind the C API.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltmfair.h"

namespace {

int print_error(lf_status st) {
    std::cerr << "error (" << lf_status_name(st) << "): " << lf_last_error() << "\n";
    return 1;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(field);
    }
    return fields;
}

int cmd_gen(const std::string& domains, const std::string& templates, bool dump_templates,
            const std::string& out) {
    if (dump_templates) {
        char* json = nullptr;
        lf_status st = lf_default_templates(&json);
        if (st != LF_OK) return print_error(st);
        if (out.empty()) {
            std::cout << json << "\n";
        } else {
            std::ofstream f(out);
            f << json << "\n";
            if (!f) {
                lf_string_free(json);
                std::cerr << "error: cannot write " << out << "\n";
                return 1;
            }
        }
        lf_string_free(json);
        return 0;
    }

    lf_dataset* ds = nullptr;
    lf_status st = lf_dataset_generate(domains.empty() ? nullptr : domains.c_str(),
                                       templates.empty() ? nullptr : templates.c_str(), &ds);
    if (st != LF_OK) {
        print_error(st);
        return st == LF_IO_ERROR ? 1 : 2;
    }
    size_t violations = 0;
    st = lf_dataset_validate(ds, &violations, nullptr);
    if (st != LF_OK) {
        lf_dataset_free(ds);
        return print_error(st);
    }
    std::printf("%zu samples, %zu violations\n", lf_dataset_size(ds), violations);
    int rc = 0;
    if (violations > 0) {
        rc = 2;  // invalid set: report and refuse to write
    } else if (!out.empty()) {
        st = lf_dataset_write(ds, out.c_str());
        if (st != LF_OK) rc = print_error(st);
    }
    lf_dataset_free(ds);
    return rc;
}

void print_audit(int t, double agbv, void*) {
    std::printf("audit t=%d agbv=%.6f\n", t, agbv);
    std::fflush(stdout);
}

int cmd_run(std::string manifest_path, const std::string& out_dir, const std::string& dib,
            bool resume, int stop_after, const std::string& generator,
            const std::string& base_url, const std::string& backend_override,
            bool have_seed, uint64_t seed) {
    if (out_dir.empty()) {
        std::cerr << "error: run requires --out <dir>\n";
        return 1;
    }
    std::string patched;
    if (have_seed || !backend_override.empty()) {
        std::ifstream f(manifest_path);
        if (!f) {
            std::cerr << "error: cannot read " << manifest_path << "\n";
            return 1;
        }
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(f);
        } catch (const std::exception& e) {
            std::cerr << "error: " << manifest_path << ": " << e.what() << "\n";
            return 1;
        }
        if (have_seed) j["seed"] = seed;
        if (!backend_override.empty()) j["backend_id"] = backend_override;
        patched = (std::filesystem::temp_directory_path() /
                   ("ltmfair_manifest_" + std::to_string(::getpid()) + ".json"))
                      .string();
        std::ofstream o(patched);
        o << j.dump(2) << "\n";
        if (!o) {
            std::cerr << "error: cannot write " << patched << "\n";
            return 1;
        }
        manifest_path = patched;
    }

    lf_run_options opts{};
    opts.dib_path = dib.empty() ? nullptr : dib.c_str();
    opts.resume = resume ? 1 : 0;
    opts.stop_after_turn = stop_after;
    opts.generator_backend_id = generator.empty() ? nullptr : generator.c_str();
    opts.base_url = base_url.empty() ? nullptr : base_url.c_str();
    opts.on_audit = print_audit;

    lf_status st = lf_run_execute(manifest_path.c_str(), out_dir.c_str(), &opts);
    if (!patched.empty()) std::filesystem::remove(patched);
    if (st != LF_OK) {
        print_error(st);
        int turn = -1;
        if (lf_checkpoint_turn(out_dir.c_str(), &turn) == LF_OK)
            std::printf("last completed turn: %d\n", turn);
        return 1;
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir,
               bool series, bool matrix, bool mp, int baseline_t, int compare_t) {
    if (out_dir.empty()) {
        std::cerr << "error: report requires --out <dir>\n";
        return 1;
    }
    std::vector<const char*> dirs;
    dirs.reserve(run_dirs.size());
    for (const std::string& d : run_dirs) dirs.push_back(d.c_str());
    char* paths = nullptr;
    lf_status st = lf_report(dirs.data(), dirs.size(), out_dir.c_str(), baseline_t, compare_t,
                             series ? 1 : 0, matrix ? 1 : 0, mp ? 1 : 0, &paths);
    if (st != LF_OK) return print_error(st);
    for (const auto& p : nlohmann::json::parse(paths)) std::cout << p.get<std::string>() << "\n";
    lf_string_free(paths);
    return 0;
}

int cmd_metrics_gbv(const std::string& means_csv, const std::string& snapshot) {
    if (!snapshot.empty()) {
        char* json = nullptr;
        lf_status st = lf_snapshot_summary(snapshot.c_str(), &json);
        if (st != LF_OK) return print_error(st);
        auto j = nlohmann::json::parse(json);
        lf_string_free(json);
        for (auto it = j["gbv"].begin(); it != j["gbv"].end(); ++it)
            std::printf("gbv %s %.9g\n", it.key().c_str(), it.value().get<double>());
        std::printf("agbv %.9g\n", j["agbv"].get<double>());
        return 0;
    }
    if (means_csv.empty()) {
        std::cerr << "error: metrics gbv needs --means or --snapshot\n";
        return 1;
    }
    std::ifstream f(means_csv);
    if (!f) {
        std::cerr << "error: cannot read " << means_csv << "\n";
        return 1;
    }
    std::string line;
    if (!std::getline(f, line)) {
        std::cerr << "error: " << means_csv << " is empty\n";
        return 1;
    }
    std::vector<std::string> header = split_csv_row(line);
    if (header.size() < 3 || header[0] != "domain" || header[1] != "group" ||
        header[2] != "mean") {
        std::cerr << "error: expected header domain,group,mean\n";
        return 1;
    }
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> by_domain;
    int row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_row(line);
        if (fields.size() < 3) {
            std::cerr << "error: row " << row << ": expected domain,group,mean\n";
            return 1;
        }
        try {
            double mean = std::stod(fields[2]);
            if (by_domain.find(fields[0]) == by_domain.end()) order.push_back(fields[0]);
            by_domain[fields[0]].push_back(mean);
        } catch (const std::exception&) {
            std::cerr << "error: row " << row << ": bad mean '" << fields[2] << "'\n";
            return 1;
        }
    }
    double sum = 0.0;
    for (const std::string& domain : order) {
        const std::vector<double>& means = by_domain[domain];
        double value = 0.0;
        lf_status st = lf_gbv(means.data(), means.size(), &value);
        if (st != LF_OK) {
            std::cerr << "error: " << domain << ": " << lf_last_error() << "\n";
            return 1;
        }
        std::printf("gbv %s %.9g\n", domain.c_str(), value);
        sum += value;
    }
    std::printf("agbv %.9g\n", sum / static_cast<double>(order.size()));
    return 0;
}

int cmd_metrics_mp(double original, double mitigated) {
    double value = 0.0;
    lf_status st = lf_mp(mitigated, original, &value);
    if (st != LF_OK) return print_error(st);
    std::printf("%.6f\n", value);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"longitudinal fairness toolkit for memory-augmented assistants"};
    app.require_subcommand(1);

    std::string opt_out, opt_base_url, opt_backend;
    uint64_t opt_seed = 0;
    app.add_option("--out", opt_out, "output file (gen) or directory (run/report)");
    app.add_option("--base-url", opt_base_url, "HTTP backend base URL (default: MODEL_BASE_URL)");
    app.add_option("--backend", opt_backend, "override the manifest backend id");
    CLI::Option* seed_opt = app.add_option("--seed", opt_seed, "override the manifest seed");

    CLI::App* gen = app.add_subcommand("gen", "generate the counterfactual dataset");
    gen->fallthrough();
    std::string gen_domains, gen_templates;
    bool dump_templates = false;
    gen->add_option("--domains", gen_domains, "comma-separated domain subset");
    gen->add_option("--templates", gen_templates, "template pack JSON file");
    gen->add_flag("--dump-templates", dump_templates, "emit the built-in template pack");

    CLI::App* run = app.add_subcommand("run", "execute or resume a simulation run");
    std::string run_manifest, run_dib, run_generator;
    bool run_resume = false;
    int stop_after = -1;
    run->fallthrough();
    run->add_option("manifest", run_manifest, "run manifest JSON")->required();
    run->add_option("--dib", run_dib, "dataset JSONL (default: regenerate the built-in set)");
    run->add_flag("--resume", run_resume, "continue from the checkpoint in --out");
    run->add_option("--stop-after", stop_after, "pause after this turn");
    run->add_option("--generator", run_generator, "bias generator backend id");

    CLI::App* report = app.add_subcommand("report", "emit analysis artifacts");
    std::vector<std::string> report_dirs;
    bool rep_series = false, rep_matrix = false, rep_mp = false;
    int baseline_t = -1, compare_t = -1;
    report->fallthrough();
    report->add_option("runs", report_dirs, "run directories")->required()->expected(-1);
    report->add_flag("--series", rep_series, "emit agbv_series.csv");
    report->add_flag("--matrix", rep_matrix, "emit propagation_matrix.csv");
    report->add_flag("--mp", rep_mp, "emit mp_table.csv");
    report->add_option("--baseline-t", baseline_t, "matrix/MP baseline timestep (default 0)");
    report->add_option("--compare-t", compare_t, "matrix/MP comparison timestep (default 80)");

    CLI::App* metrics = app.add_subcommand("metrics", "ad-hoc GBV / MP computations");
    metrics->fallthrough();
    metrics->require_subcommand(1);
    CLI::App* gbv = metrics->add_subcommand("gbv", "group-bias variance");
    std::string gbv_means, gbv_snapshot;
    gbv->fallthrough();
    gbv->add_option("--means", gbv_means, "CSV with header domain,group,mean");
    gbv->add_option("--snapshot", gbv_snapshot, "audit snapshot JSON file");
    CLI::App* mp = metrics->add_subcommand("mp", "mitigation percentage");
    double mp_original = 0.0, mp_mitigated = 0.0;
    mp->fallthrough();
    mp->add_option("--original", mp_original, "unmitigated delta")->required();
    mp->add_option("--mitigated", mp_mitigated, "mitigated delta")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return cmd_gen(gen_domains, gen_templates, dump_templates, opt_out);
    if (run->parsed())
        return cmd_run(run_manifest, opt_out, run_dib, run_resume, stop_after, run_generator,
                       opt_base_url, opt_backend, seed_opt->count() > 0, opt_seed);
    if (report->parsed())
        return cmd_report(report_dirs, opt_out, rep_series, rep_matrix, rep_mp, baseline_t,
                          compare_t);
    if (metrics->parsed()) {
        if (gbv->parsed()) return cmd_metrics_gbv(gbv_means, gbv_snapshot);
        if (mp->parsed()) return cmd_metrics_mp(mp_original, mp_mitigated);
    }
    return 1;
}
