#pragma once

#include "dyadbma/dyads.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace dyadbma {

/// Cross-moments of [intercept, regressors] and y. Every per-model quantity
/// downstream is computed from this type alone; raw rows are never re-read.
struct SufficientStats {
    std::size_t N = 0;
    std::size_t K = 0;
    Eigen::MatrixXd xtx; // (K+1) x (K+1), index 0 = intercept
    Eigen::VectorXd xty; // K+1
    double yty = 0.0;
    double ybar = 0.0;
    double tss = 0.0; // centered total sum of squares of y
    std::vector<std::string> names;
};

/// Exact cross-moments with long-double accumulation; tss is computed by a
/// second centered pass. Requires N > K + 3 so posterior moments exist.
SufficientStats compute_sufficient_stats(const DyadTable& dyads);

} // namespace dyadbma
