#pragma once

#include "dyadbma/model_prior.hpp"
#include "dyadbma/sufficient_stats.hpp"
#include "dyadbma/sweep.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

namespace dyadbma {

/// log BF(model : null) under the g-prior with variance scale G:
/// ((N-1-k)/2) ln(1+G) - ((N-1)/2) ln(1 + G (1-R^2)), k = effective rank.
inline double log_bf_from_state(const SweepState& state, std::size_t N, double G) {
    const double n1 = static_cast<double>(N) - 1.0;
    const double k = static_cast<double>(state.k_effective());
    return 0.5 * (n1 - k) * std::log1p(G) - 0.5 * n1 * std::log1p(G * state.rss_std());
}

/// Convenience wrapper: builds a fresh factorization of the selected columns.
double log_bayes_factor(const SufficientStats& stats, std::uint64_t model, double G);

/// Posterior moments of the selected coefficients within one model:
/// mean = delta * OLS estimate, covariance = delta * s* / (N-3) * (Xc'Xc)^-1
/// with s* = TSS (1 - delta R^2) and delta = G/(1+G). Columns deferred by the
/// rank convention get zero mean and zero (co)variance.
struct ConditionalMoments {
    std::vector<std::size_t> indices; // selected columns, ascending
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    std::size_t k_effective = 0;
    bool rank_deficient = false;
};

ConditionalMoments conditional_posterior_moments(const SufficientStats& stats,
                                                 std::uint64_t model, double G);

/// Per-model scalars shared by the moment formulas.
struct MomentScale {
    double delta = 0.0;     // G/(1+G)
    double sstar = 0.0;     // TSS (1 - delta R^2)
    double var_scale = 0.0; // delta * sstar / (N-3)
};

inline MomentScale moment_scale(const SweepState& state, std::size_t N, double G) {
    MomentScale m;
    m.delta = G / (1.0 + G);
    m.sstar = state.design().tss * (1.0 - m.delta * state.r2());
    m.var_scale = m.delta * m.sstar / (static_cast<double>(N) - 3.0);
    return m;
}

/// Raw-scale conditional mean of swept column h.
inline double conditional_mean(const SweepState& state, std::size_t h, const MomentScale& m) {
    const CenteredDesign& d = state.design();
    if (d.tss_zero) return 0.0;
    return m.delta * state.beta_std(h) * std::sqrt(d.tss) / d.scale(static_cast<Eigen::Index>(h));
}

/// Raw-scale conditional variance of swept column h.
inline double conditional_var(const SweepState& state, std::size_t h, const MomentScale& m) {
    const CenteredDesign& d = state.design();
    double s = d.scale(static_cast<Eigen::Index>(h));
    return m.var_scale * state.inv_entry(h, h) / (s * s);
}

} // namespace dyadbma
