#pragma once

#include "dyadbma/g_prior.hpp"
#include "dyadbma/model_prior.hpp"
#include "dyadbma/sufficient_stats.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace dyadbma {

struct TopModel {
    std::uint64_t mask = 0;
    double posterior_prob = 0.0;
};

struct BmaResult {
    std::vector<std::string> names; // K regressors
    std::vector<double> pip;
    std::vector<double> post_mean;
    std::vector<double> post_sd;
    /// log marginal likelihood of the averaged model relative to the null
    /// model, under the normalized model prior; NaN for the sampler engine.
    double log_evidence = std::numeric_limits<double>::quiet_NaN();
    std::vector<TopModel> top_models;

    PriorSpec prior;
    std::size_t N = 0, K = 0;
    double G = 0.0;
    std::string engine;            // "enumerate" or "mc3"
    double prob_mass_check = 0.0;  // sum of posterior model probabilities
    double mc3_acceptance = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

struct EnumerateConfig {
    int workers = 1;
    std::size_t top_models = 10;
    std::size_t exhaustive_cap = 25; // refuse larger K; use mc3_bma instead
};

/// Visit all 2^K models in Gray-code order with an incremental factorization.
/// The space is split into fixed contiguous Gray segments walked from fresh
/// factorizations and combined by a fixed-shape reduction, so results are
/// bit-stable for any worker count.
BmaResult enumerate_bma(const SufficientStats& stats, const PriorSpec& prior,
                        const EnumerateConfig& config = {});

struct Mc3Config {
    std::uint64_t chain_length = 0; // total steps, burn-in included
    std::uint64_t burn_in = 0;
    std::uint64_t seed = 0;
    std::size_t top_models = 10;
    std::uint64_t refresh_interval = 8192; // rebuild factorization to bound drift
};

/// Metropolis sampler over model indices with single-bit toggle proposals.
/// PIPs are visit frequencies; moments are Rao-Blackwellized conditional
/// moments; log_evidence is NaN (not estimable from visits).
BmaResult mc3_bma(const SufficientStats& stats, const PriorSpec& prior, const Mc3Config& config);

/// Bitstring form of a model mask: character h is '1' iff regressor h is in.
std::string mask_to_string(std::uint64_t mask, std::size_t K);
std::uint64_t mask_from_string(const std::string& bits);

} // namespace dyadbma
