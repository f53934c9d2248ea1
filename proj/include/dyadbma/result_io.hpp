#pragma once

#include "dyadbma/attributes.hpp"
#include "dyadbma/bma.hpp"
#include "dyadbma/synth.hpp"
#include "dyadbma/wals.hpp"

#include <string>

namespace dyadbma {

// Per-regressor posterior summaries, one row per regressor in design order.
// Header: name,pip,post_mean,post_sd. Values at 6 significant digits.
void write_bma_results(const std::string& path, const BmaResult& result);

// Reads a results file back into a partially populated BmaResult (names, pip,
// post_mean, post_sd only; everything else default).
BmaResult read_bma_results(const std::string& path);

// Top models by posterior mass. Header: model,size,posterior_prob. The model
// cell is the inclusion string from mask_to_string.
void write_top_models(const std::string& path, const BmaResult& result);

// Run metadata as a JSON object with sorted keys. wall_seconds is emitted only
// when non-negative so that default runs stay byte-stable.
void write_bma_meta(const std::string& path, const BmaResult& result, int workers,
                    double wall_seconds = -1.0);

struct BmaMeta {
    long long N = 0;
    int K = 0;
    double G = 0.0;
    std::string engine;
    double log_evidence = 0.0;
    double prob_mass_check = 0.0;
};

BmaMeta read_bma_meta(const std::string& path);

// WALS coefficient table sorted by |t| descending (ties by name). Rows with
// |t| > t_robust get a '*' marker. Header: name,coef,se,t,robust.
void write_wals_results(const std::string& path, const WalsResult& result, double t_robust);

// Recovery aggregates, one row per regressor in design order.
// Header: name,planted,true_beta,pip_mean,pip_q10,pip_median,pip_q90,rate_ge_threshold.
void write_recovery_report(const std::string& path, const RecoveryReport& report);

// Companion JSON for a recovery run: replication count, seeds, threshold,
// pooled noise median, and the prior configuration echoed back.
void write_recovery_meta(const std::string& path, const RecoveryReport& report,
                         const PriorSpec& prior);

// Column summaries. Header: column,kind,n,mean,sd,min,max. Undefined moments
// (binary columns, n < 2) leave their cells empty.
void write_summary(const std::string& path, const std::vector<ColumnSummary>& summaries);

} // namespace dyadbma
