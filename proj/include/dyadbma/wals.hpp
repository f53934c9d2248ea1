#pragma once

#include "dyadbma/dyads.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dyadbma {

/// Prior scale that puts half the Laplace prior mass on |eta| <= 1.
inline constexpr double kLaplaceCDefault = 0.69314718055994530941723212145818;

/// Posterior mean and variance of eta given one observation x ~ N(eta, 1)
/// under the prior density proportional to exp(-c|eta|). Composite Simpson on
/// [x-halfwidth, x+halfwidth] split at the kink, panels doubled until the
/// moments stabilize; `nodes` sets the starting resolution.
std::pair<double, double> laplace_shrink(double x, double c = kLaplaceCDefault,
                                         int nodes = 2001, double halfwidth = 40.0);

struct WalsConfig {
    std::vector<std::string> focus; // regressor names always in; intercept is implicit
    double laplace_c = kLaplaceCDefault;
    int quad_nodes = 2001;
    double quad_halfwidth = 40.0;
};

struct WalsRow {
    std::string name;
    double coef = 0.0;
    double se = 0.0;
    double t = 0.0;
    bool focus = false;
};

struct WalsResult {
    std::vector<WalsRow> rows; // intercept, focus (config order), auxiliaries (name order)
    double residual_scale = 0.0;
    std::size_t N = 0, K = 0;
    WalsConfig config;
    std::vector<std::string> warnings;
};

/// Weighted-average least squares: auxiliaries are projected off the focus
/// span, semi-orthogonalized by an eigendecomposition of their normalized
/// cross-moment, shrunk per-component under the Laplace prior, and mapped
/// back; focus coefficients come from OLS on the partial residual with the
/// auxiliary uncertainty propagated into their covariance. Auxiliaries are
/// ordered internally by name, so results do not depend on column order.
WalsResult wals_fit(const DyadTable& dyads, const WalsConfig& config);

} // namespace dyadbma
