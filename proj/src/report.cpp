#include "dyadbma/report.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dyadbma {

std::vector<RankedRow> ranked_rows(const BmaResult& result, double threshold) {
    if (result.names.size() != result.pip.size() ||
        result.names.size() != result.post_mean.size() ||
        result.names.size() != result.post_sd.size())
        throw IntegrityError("result arrays disagree in length");
    std::vector<RankedRow> rows;
    rows.reserve(result.names.size());
    for (std::size_t h = 0; h < result.names.size(); ++h)
        rows.push_back({result.names[h], result.pip[h], result.post_mean[h], result.post_sd[h],
                        result.pip[h] >= threshold});
    std::sort(rows.begin(), rows.end(), [](const RankedRow& a, const RankedRow& b) {
        if (a.pip != b.pip) return a.pip > b.pip;
        double am = std::abs(a.post_mean), bm = std::abs(b.post_mean);
        if (am != bm) return am > bm;
        return a.name < b.name;
    });
    return rows;
}

std::string render_ranked_table(const BmaResult& result, double threshold) {
    std::string out = "name,pip,post_mean,post_sd,robust\n";
    for (const auto& row : ranked_rows(result, threshold)) {
        out += row.name;
        out += ',';
        out += format_sig(row.pip);
        out += ',';
        out += format_sig(row.post_mean);
        out += ',';
        out += format_sig(row.post_sd);
        out += ',';
        if (row.robust) out += '*';
        out += '\n';
    }
    out += "Observations," + std::to_string(result.N) + ",,,\n";
    return out;
}

std::vector<PriorComparisonRecord> render_prior_comparison(
    const std::vector<std::pair<std::string, BmaResult>>& results, double threshold) {
    if (results.empty()) throw ConfigError("prior comparison needs at least one result");
    std::set<std::string> reference(results.front().second.names.begin(),
                                    results.front().second.names.end());
    for (const auto& [label, result] : results) {
        std::set<std::string> names(result.names.begin(), result.names.end());
        if (names != reference)
            throw SchemaError("result '" + label + "' has a different regressor set");
    }

    std::vector<PriorComparisonRecord> records;
    for (const auto& row : ranked_rows(results.front().second, threshold)) {
        for (const auto& [label, result] : results) {
            auto it = std::find(result.names.begin(), result.names.end(), row.name);
            std::size_t h = static_cast<std::size_t>(it - result.names.begin());
            records.push_back({row.name, label, result.pip[h]});
        }
    }
    return records;
}

std::string prior_comparison_csv(const std::vector<PriorComparisonRecord>& records) {
    std::string out = "regressor,prior,pip\n";
    for (const auto& rec : records)
        out += rec.regressor + ',' + rec.prior_label + ',' + format_sig(rec.pip) + '\n';
    return out;
}

} // namespace dyadbma
