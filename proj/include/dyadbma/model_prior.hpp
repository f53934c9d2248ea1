#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dyadbma {

enum class ModelPriorKind { uniform, fixed_theta, binomial_beta };

enum class GRule { bric, uip, fixed_g };

struct PriorSpec {
    ModelPriorKind model_prior = ModelPriorKind::uniform;
    double mbar = 0.0; // prior mean model size; required for fixed_theta / binomial_beta
    GRule g_rule = GRule::bric;
    double fixed_g = 0.0; // g_rule == fixed_g only
};

/// Prior-variance scale of the coefficient prior: BRIC -> max(N, K^2),
/// UIP -> N, FixedG -> the given value. Shrinkage is G/(1+G).
double g_value(GRule rule, double fixed_g, std::size_t N, std::size_t K);
double g_value(const PriorSpec& prior, std::size_t N, std::size_t K);

/// Log model prior up to an additive constant shared by all models:
/// Uniform -> -K ln 2; FixedTheta(mbar) -> k ln(mbar/K) + (K-k) ln(1-mbar/K);
/// BinomialBeta(mbar) -> lnGamma(1+k) + lnGamma(b+K-k) with b = (K-mbar)/mbar.
double log_model_prior_for_size(std::size_t k, const PriorSpec& prior, std::size_t K);
double log_model_prior(std::uint64_t model, const PriorSpec& prior, std::size_t K);

/// Per-size table (index k in 0..K); the priors depend only on model size.
std::vector<double> model_prior_table(const PriorSpec& prior, std::size_t K);

/// log sum over all 2^K masks of exp(log prior), via the size marginals;
/// normalizes priors whose constants were dropped.
double log_model_prior_total(const PriorSpec& prior, std::size_t K);

} // namespace dyadbma
