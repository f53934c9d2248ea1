#include "dyadbma/model_prior.hpp"
#include "dyadbma/errors.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace dyadbma {

double g_value(GRule rule, double fixed_g, std::size_t N, std::size_t K) {
    if (N < 1 || K < 1) throw ConfigError("g_value requires N >= 1 and K >= 1");
    switch (rule) {
        case GRule::bric: {
            double ksq = static_cast<double>(K) * static_cast<double>(K);
            return std::max(static_cast<double>(N), ksq);
        }
        case GRule::uip: return static_cast<double>(N);
        case GRule::fixed_g:
            if (!(fixed_g > 0.0)) throw ConfigError("fixed g must be > 0");
            return fixed_g;
    }
    throw ConfigError("unknown g rule");
}

double g_value(const PriorSpec& prior, std::size_t N, std::size_t K) {
    return g_value(prior.g_rule, prior.fixed_g, N, K);
}

namespace {

void check_mbar(const PriorSpec& prior, std::size_t K) {
    if (prior.model_prior == ModelPriorKind::uniform) return;
    if (!(prior.mbar > 0.0) || !(prior.mbar < static_cast<double>(K)))
        throw ConfigError("prior mean model size must satisfy 0 < mbar < K, got mbar=" +
                          std::to_string(prior.mbar) + ", K=" + std::to_string(K));
}

} // namespace

double log_model_prior_for_size(std::size_t k, const PriorSpec& prior, std::size_t K) {
    check_mbar(prior, K);
    const double kd = static_cast<double>(k);
    const double Kd = static_cast<double>(K);
    switch (prior.model_prior) {
        case ModelPriorKind::uniform: return -Kd * std::log(2.0);
        case ModelPriorKind::fixed_theta: {
            double theta = prior.mbar / Kd;
            return kd * std::log(theta) + (Kd - kd) * std::log1p(-theta);
        }
        case ModelPriorKind::binomial_beta: {
            double b = (Kd - prior.mbar) / prior.mbar; // a = 1
            return std::lgamma(1.0 + kd) + std::lgamma(b + Kd - kd);
        }
    }
    throw ConfigError("unknown model prior");
}

double log_model_prior(std::uint64_t model, const PriorSpec& prior, std::size_t K) {
    if (K < 64 && (model >> K) != 0)
        throw ConfigError("model index has bits above K=" + std::to_string(K));
    return log_model_prior_for_size(static_cast<std::size_t>(std::popcount(model)), prior, K);
}

std::vector<double> model_prior_table(const PriorSpec& prior, std::size_t K) {
    std::vector<double> table(K + 1);
    for (std::size_t k = 0; k <= K; ++k) table[k] = log_model_prior_for_size(k, prior, K);
    return table;
}

double log_model_prior_total(const PriorSpec& prior, std::size_t K) {
    // log sum_k C(K,k) exp(lp(k)), accumulated stably against the running max.
    std::vector<double> table = model_prior_table(prior, K);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(K + 1);
    double log_choose = 0.0; // log C(K,0)
    for (std::size_t k = 0; k <= K; ++k) {
        if (k > 0)
            log_choose += std::log(static_cast<double>(K - k + 1)) - std::log(static_cast<double>(k));
        terms[k] = log_choose + table[k];
        max_term = std::max(max_term, terms[k]);
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - max_term);
    return max_term + std::log(sum);
}

} // namespace dyadbma
