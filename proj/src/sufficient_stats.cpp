#include "dyadbma/sufficient_stats.hpp"
#include "dyadbma/errors.hpp"

#include <vector>

namespace dyadbma {

SufficientStats compute_sufficient_stats(const DyadTable& dyads) {
    const std::size_t N = dyads.n();
    const std::size_t K = dyads.k();
    if (N == 0) throw EmptyResultError("cannot compute moments of an empty dyad table");
    if (N <= K + 3)
        throw InsufficientDataError("need N > K + 3 observations, got N=" + std::to_string(N) +
                                    ", K=" + std::to_string(K));

    const std::size_t P = K + 1;
    std::vector<long double> xtx(P * P, 0.0L), xty(P, 0.0L);
    long double ysum = 0.0L, yty = 0.0L;
    std::vector<double> v(P);
    for (const auto& row : dyads.rows) {
        if (row.x.size() != K)
            throw IntegrityError("dyad row with wrong regressor count for pair " + row.i + "," +
                                 row.j);
        v[0] = 1.0;
        for (std::size_t h = 0; h < K; ++h) v[h + 1] = row.x[h];
        for (std::size_t a = 0; a < P; ++a) {
            for (std::size_t b = a; b < P; ++b)
                xtx[a * P + b] += static_cast<long double>(v[a]) * v[b];
            xty[a] += static_cast<long double>(v[a]) * row.y;
        }
        ysum += row.y;
        yty += static_cast<long double>(row.y) * row.y;
    }

    SufficientStats stats;
    stats.N = N;
    stats.K = K;
    stats.names = dyads.regressor_names;
    stats.xtx.resize(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(P));
    stats.xty.resize(static_cast<Eigen::Index>(P));
    for (std::size_t a = 0; a < P; ++a) {
        for (std::size_t b = a; b < P; ++b) {
            double value = static_cast<double>(xtx[a * P + b]);
            stats.xtx(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = value;
            stats.xtx(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = value;
        }
        stats.xty(static_cast<Eigen::Index>(a)) = static_cast<double>(xty[a]);
    }
    stats.yty = static_cast<double>(yty);
    stats.ybar = static_cast<double>(ysum / static_cast<long double>(N));

    long double tss = 0.0L;
    for (const auto& row : dyads.rows) {
        long double d = static_cast<long double>(row.y) - stats.ybar;
        tss += d * d;
    }
    stats.tss = static_cast<double>(tss);
    if (stats.tss < 0.0) stats.tss = 0.0;
    return stats;
}

} // namespace dyadbma
