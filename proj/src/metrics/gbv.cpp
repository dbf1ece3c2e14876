#include "metrics/gbv.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace ltmfair {

GroupScoreTable aggregate_group_means(const std::vector<AuditQueryResult>& results) {
    std::map<std::pair<Domain, std::string>, std::pair<double, size_t>> sums;
    for (const auto& r : results) {
        if (!r.valid || !r.score) continue;
        auto& acc = sums[{r.domain, r.group}];
        acc.first += *r.score;
        acc.second += 1;
    }
    GroupScoreTable table;
    for (const auto& [key, acc] : sums)
        table[key] = {acc.first / static_cast<double>(acc.second), acc.second};
    return table;
}

std::vector<double> domain_means(const GroupScoreTable& table, Domain d) {
    std::vector<double> means;
    for (const auto& label : roster(d)) {
        auto it = table.find({d, label});
        if (it != table.end()) means.push_back(it->second.mean);
    }
    return means;
}

double compute_gbv(const GroupScoreTable& table, Domain d) {
    auto means = domain_means(table, d);
    size_t k = means.size();
    if (k < 2)
        throw error(errc::insufficient_groups,
                    domain_name(d) + " has " + std::to_string(k) +
                        " group mean(s); need at least 2");
    double bar = 0.0;
    for (double m : means) bar += m;
    bar /= static_cast<double>(k);
    double var = 0.0;
    for (double m : means) var += (m - bar) * (m - bar);
    var /= static_cast<double>(k);
    return std::sqrt(var);
}

double compute_agbv(const std::map<Domain, double>& gbv_by_domain) {
    if (gbv_by_domain.empty()) throw error(errc::empty_input, "no per-domain GBV values");
    double sum = 0.0;
    for (const auto& [d, v] : gbv_by_domain) sum += v;
    return sum / static_cast<double>(gbv_by_domain.size());
}

double compute_delta_gbv(const std::map<Domain, double>& gbv_a,
                         const std::map<Domain, double>& gbv_b, Domain domain) {
    auto a = gbv_a.find(domain);
    auto b = gbv_b.find(domain);
    if (a == gbv_a.end() || b == gbv_b.end())
        throw error(errc::missing_domain, domain_name(domain) + " absent from a snapshot");
    return b->second - a->second;
}

PropagationStats propagation_stats(const PropagationMatrix& m) {
    size_t defined = 0, positive = 0;
    double sum = 0.0;
    for (size_t r = 0; r < kDomainCount; ++r) {
        for (size_t c = 0; c < kDomainCount; ++c) {
            if (r == c || !m.cells[r][c]) continue;
            ++defined;
            double v = *m.cells[r][c];
            sum += v;
            if (v > 0.0) ++positive;
        }
    }
    if (defined == 0) return {0.0, 0.0};
    return {static_cast<double>(positive) / static_cast<double>(defined),
            sum / static_cast<double>(defined)};
}

double compute_mp(double delta_mitigated, double delta_original) {
    if (delta_original == 0.0)
        throw error(errc::undefined_mp, "baseline drift is zero; mitigation percentage undefined");
    return (delta_mitigated - delta_original) / std::fabs(delta_original) * 100.0;
}

}  // namespace ltmfair
