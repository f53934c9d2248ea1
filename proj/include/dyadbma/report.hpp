#pragma once

#include "dyadbma/bma.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dyadbma {

struct RankedRow {
    std::string name;
    double pip = 0.0, post_mean = 0.0, post_sd = 0.0;
    bool robust = false;
};

/// Rows sorted by descending PIP, ties by descending |post_mean| then name;
/// robust = pip >= threshold.
std::vector<RankedRow> ranked_rows(const BmaResult& result, double threshold);

/// Delimited table (name, pip, post_mean, post_sd, robust marker) at 6
/// significant digits, with a trailing observations row; byte-stable.
std::string render_ranked_table(const BmaResult& result, double threshold);

struct PriorComparisonRecord {
    std::string regressor;
    std::string prior_label;
    double pip = 0.0;
};

/// One record per (regressor, prior); regressor order follows the ranked
/// table of the first result. All results must share the regressor name set.
std::vector<PriorComparisonRecord> render_prior_comparison(
    const std::vector<std::pair<std::string, BmaResult>>& results, double threshold = 0.8);

std::string prior_comparison_csv(const std::vector<PriorComparisonRecord>& records);

} // namespace dyadbma
