#include "dyadbma/g_prior.hpp"
#include "dyadbma/errors.hpp"

namespace dyadbma {

double log_bayes_factor(const SufficientStats& stats, std::uint64_t model, double G) {
    if (!(G > 0.0)) throw ConfigError("g-prior scale G must be > 0");
    CenteredDesign design = make_centered_design(stats);
    SweepState state(design);
    state.set_mask(model);
    return log_bf_from_state(state, stats.N, G);
}

ConditionalMoments conditional_posterior_moments(const SufficientStats& stats,
                                                 std::uint64_t model, double G) {
    if (!(G > 0.0)) throw ConfigError("g-prior scale G must be > 0");
    CenteredDesign design = make_centered_design(stats);
    SweepState state(design);
    state.set_mask(model);
    const MomentScale m = moment_scale(state, stats.N, G);

    ConditionalMoments out;
    out.k_effective = state.k_effective();
    out.rank_deficient = state.rank_deficient();
    for (std::size_t h = 0; h < stats.K; ++h)
        if (model >> h & 1u) out.indices.push_back(h);
    const Eigen::Index n = static_cast<Eigen::Index>(out.indices.size());
    out.mean = Eigen::VectorXd::Zero(n);
    out.cov = Eigen::MatrixXd::Zero(n, n);
    const double sqrt_tss = design.tss_zero ? 0.0 : std::sqrt(design.tss);
    for (Eigen::Index a = 0; a < n; ++a) {
        std::size_t h = out.indices[static_cast<std::size_t>(a)];
        if (!state.is_swept(h)) continue;
        double sh = design.scale(static_cast<Eigen::Index>(h));
        out.mean(a) = m.delta * state.beta_std(h) * sqrt_tss / sh;
        for (Eigen::Index b = 0; b < n; ++b) {
            std::size_t l = out.indices[static_cast<std::size_t>(b)];
            if (!state.is_swept(l)) continue;
            double sl = design.scale(static_cast<Eigen::Index>(l));
            out.cov(a, b) = m.var_scale * state.inv_entry(h, l) / (sh * sl);
        }
    }
    return out;
}

} // namespace dyadbma
