#include "dyadbma/wals.hpp"
#include "dyadbma/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace dyadbma {

namespace {

struct ShrinkSums {
    double i0 = 0.0, i1 = 0.0, i2 = 0.0; // integrals of f, eta f, eta^2 f
};

/// Composite Simpson of exp(logf) against {1, eta, eta^2} on [lo, hi];
/// `shift` rescales exp to a safe range. `intervals` must be even.
ShrinkSums simpson_side(double x, double c, double lo, double hi, int intervals, double shift) {
    ShrinkSums s;
    if (hi <= lo) return s;
    const double h = (hi - lo) / intervals;
    for (int i = 0; i <= intervals; ++i) {
        const double eta = lo + h * i;
        const double logf = -0.5 * (x - eta) * (x - eta) - c * std::abs(eta) - shift;
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double f = w * std::exp(logf);
        s.i0 += f;
        s.i1 += f * eta;
        s.i2 += f * eta * eta;
    }
    const double scale = h / 3.0;
    s.i0 *= scale;
    s.i1 *= scale;
    s.i2 *= scale;
    return s;
}

std::pair<double, double> shrink_once(double x, double c, double halfwidth, int side_intervals) {
    const double lo = x - halfwidth, hi = x + halfwidth;
    // Log-density peak, used to keep exp() in range: mode at sign(x)(|x|-c), or 0.
    const double mode = std::abs(x) > c ? (x > 0 ? x - c : x + c) : 0.0;
    const double shift = -0.5 * (x - mode) * (x - mode) - c * std::abs(mode);

    ShrinkSums total;
    if (lo < 0.0 && hi > 0.0) {
        ShrinkSums left = simpson_side(x, c, lo, 0.0, side_intervals, shift);
        ShrinkSums right = simpson_side(x, c, 0.0, hi, side_intervals, shift);
        total = {left.i0 + right.i0, left.i1 + right.i1, left.i2 + right.i2};
    } else {
        total = simpson_side(x, c, lo, hi, 2 * side_intervals, shift);
    }
    if (!(total.i0 > 0.0)) throw NumericalError("laplace_shrink: vanishing posterior mass");
    const double m = total.i1 / total.i0;
    const double second = total.i2 / total.i0;
    return {m, second - m * m};
}

} // namespace

std::pair<double, double> laplace_shrink(double x, double c, int nodes, double halfwidth) {
    if (!std::isfinite(x)) throw ConfigError("laplace_shrink requires a finite input");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("laplace prior scale must be > 0");
    if (!(halfwidth > 1.0)) throw ConfigError("quadrature halfwidth must exceed 1");
    // The prior is even, so m is odd and v is even in x. Integrate on the
    // canonical orientation |x| and reflect; this keeps the symmetry exact
    // instead of leaving it at the mercy of summation order.
    if (std::signbit(x)) {
        auto [m, v] = laplace_shrink(-x, c, nodes, halfwidth);
        return {-m, v};
    }
    int side = std::max(16, nodes / 2);
    if (side % 2 == 1) ++side;

    std::pair<double, double> prev = shrink_once(x, c, halfwidth, side);
    for (int round = 0; round < 8; ++round) {
        side *= 2;
        std::pair<double, double> next = shrink_once(x, c, halfwidth, side);
        const double dm = std::abs(next.first - prev.first);
        const double dv = std::abs(next.second - prev.second);
        prev = next;
        if (dm <= 1e-13 * std::max(1.0, std::abs(next.first)) &&
            dv <= 1e-13 * std::max(1.0, std::abs(next.second)))
            break;
    }
    return prev;
}

WalsResult wals_fit(const DyadTable& dyads, const WalsConfig& config) {
    const std::size_t N = dyads.n();
    const std::size_t K = dyads.k();
    if (!(config.laplace_c > 0.0) || !std::isfinite(config.laplace_c))
        throw ConfigError("laplace prior scale must be > 0 and finite");
    if (N <= K + 2)
        throw InsufficientDataError("wals_fit needs N > K + 2 observations, got N=" +
                                    std::to_string(N) + ", K=" + std::to_string(K));

    // Split names into focus (config order) and auxiliaries (name order).
    std::set<std::string> known(dyads.regressor_names.begin(), dyads.regressor_names.end());
    std::set<std::string> focus_set;
    for (const auto& name : config.focus) {
        if (!known.count(name)) throw ConfigError("focus regressor '" + name + "' is not in the design");
        if (!focus_set.insert(name).second)
            throw ConfigError("focus regressor '" + name + "' listed twice");
    }
    std::vector<std::string> aux_names;
    for (const auto& name : dyads.regressor_names)
        if (!focus_set.count(name)) aux_names.push_back(name);
    std::sort(aux_names.begin(), aux_names.end());

    auto column_of = [&](const std::string& name) {
        for (std::size_t h = 0; h < K; ++h)
            if (dyads.regressor_names[h] == name) return h;
        throw ConfigError("unknown regressor: " + name);
    };

    const std::size_t f = 1 + config.focus.size();
    const std::size_t q = aux_names.size();
    Eigen::MatrixXd F(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(f));
    Eigen::MatrixXd X2(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(q));
    Eigen::VectorXd y(static_cast<Eigen::Index>(N));
    std::vector<std::size_t> focus_cols, aux_cols;
    for (const auto& name : config.focus) focus_cols.push_back(column_of(name));
    for (const auto& name : aux_names) aux_cols.push_back(column_of(name));
    for (std::size_t r = 0; r < N; ++r) {
        const Eigen::Index re = static_cast<Eigen::Index>(r);
        F(re, 0) = 1.0;
        for (std::size_t cidx = 0; cidx < focus_cols.size(); ++cidx)
            F(re, static_cast<Eigen::Index>(cidx + 1)) = dyads.rows[r].x[focus_cols[cidx]];
        for (std::size_t cidx = 0; cidx < aux_cols.size(); ++cidx)
            X2(re, static_cast<Eigen::Index>(cidx)) = dyads.rows[r].x[aux_cols[cidx]];
        y(re) = dyads.rows[r].y;
    }

    WalsResult result;
    result.N = N;
    result.K = K;
    result.config = config;

    const Eigen::MatrixXd MF = F.transpose() * F;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(MF);
    lu.setThreshold(1e-10);
    if (lu.rank() < static_cast<Eigen::Index>(f))
        throw ConfigError("focus block is rank deficient; remove a collinear focus regressor");
    Eigen::LDLT<Eigen::MatrixXd> mf_solver(MF);

    const Eigen::VectorXd Fty = F.transpose() * y;
    const double yty = y.squaredNorm();
    const double rss_focus = yty - Fty.dot(mf_solver.solve(Fty));

    // Projected auxiliary cross-moments: S = X2'X2 - (X2'F) MF^-1 (F'X2).
    Eigen::MatrixXd C = F.transpose() * X2;                   // f x q
    Eigen::MatrixXd Q = mf_solver.solve(C);                   // f x q
    Eigen::MatrixXd S = X2.transpose() * X2 - C.transpose() * Q;
    Eigen::VectorXd z = X2.transpose() * y - Q.transpose() * Fty;

    // Columns whose projected scale vanishes sit inside the focus span.
    std::vector<std::size_t> active;
    double max_diag = 0.0;
    for (std::size_t a = 0; a < q; ++a)
        max_diag = std::max(max_diag, S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)));
    for (std::size_t a = 0; a < q; ++a) {
        if (S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) > 1e-12 * std::max(max_diag, 1e-300)) {
            active.push_back(a);
        } else {
            result.warnings.push_back("auxiliary '" + aux_names[a] +
                                      "' lies in the focus span and was dropped");
        }
    }

    const std::size_t qa = active.size();
    Eigen::VectorXd beta2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
    Eigen::MatrixXd cov2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                                 static_cast<Eigen::Index>(q));
    double gamma_ss = 0.0;
    double s_scale = 0.0;

    if (qa > 0) {
        Eigen::MatrixXd Sa(static_cast<Eigen::Index>(qa), static_cast<Eigen::Index>(qa));
        Eigen::VectorXd za(static_cast<Eigen::Index>(qa)), da(static_cast<Eigen::Index>(qa));
        for (std::size_t a = 0; a < qa; ++a) {
            const Eigen::Index ia = static_cast<Eigen::Index>(active[a]);
            da(static_cast<Eigen::Index>(a)) = std::sqrt(S(ia, ia));
            za(static_cast<Eigen::Index>(a)) = z(ia);
            for (std::size_t b = 0; b < qa; ++b)
                Sa(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    S(ia, static_cast<Eigen::Index>(active[b]));
        }
        Eigen::MatrixXd Mstar = da.cwiseInverse().asDiagonal() * Sa *
                                da.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Mstar);
        if (eig.info() != Eigen::Success)
            throw NumericalError("eigendecomposition of the auxiliary block failed");
        const Eigen::VectorXd& lambda = eig.eigenvalues(); // ascending
        const double lmax = lambda(static_cast<Eigen::Index>(qa) - 1);
        std::vector<Eigen::Index> retained;
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(qa); ++i)
            if (lambda(i) > 1e-12 * lmax) retained.push_back(i);
        if (retained.size() < qa)
            result.warnings.push_back("dropped " + std::to_string(qa - retained.size()) +
                                      " null directions of the auxiliary block");

        const std::size_t m = retained.size();
        // W maps transformed scores back to normalized coordinates: P L^-1/2.
        Eigen::MatrixXd W(static_cast<Eigen::Index>(qa), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            W.col(static_cast<Eigen::Index>(i)) =
                eig.eigenvectors().col(retained[i]) / std::sqrt(lambda(retained[i]));
        const Eigen::VectorXd gamma = W.transpose() * (da.cwiseInverse().asDiagonal() * za);
        gamma_ss = gamma.squaredNorm();

        const double rss_full = rss_focus - gamma_ss;
        const double dof = static_cast<double>(N) - static_cast<double>(1 + K);
        const double s2 = std::max(rss_full, 0.0) / dof;
        s_scale = std::sqrt(s2);
        if (!(s_scale > 0.0))
            throw NumericalError("residual scale vanished; the design saturates the response");

        Eigen::VectorXd mvec(static_cast<Eigen::Index>(m)), vvec(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            auto [mi, vi] = laplace_shrink(gamma(static_cast<Eigen::Index>(i)) / s_scale,
                                           config.laplace_c, config.quad_nodes,
                                           config.quad_halfwidth);
            mvec(static_cast<Eigen::Index>(i)) = mi;
            vvec(static_cast<Eigen::Index>(i)) = vi;
        }

        const Eigen::MatrixXd map = da.cwiseInverse().asDiagonal() * W; // qa x m
        Eigen::VectorXd beta2a = s_scale * (map * mvec);
        Eigen::MatrixXd cov2a = (s_scale * s_scale) * (map * vvec.asDiagonal() * map.transpose());
        for (std::size_t a = 0; a < qa; ++a) {
            beta2(static_cast<Eigen::Index>(active[a])) = beta2a(static_cast<Eigen::Index>(a));
            for (std::size_t b = 0; b < qa; ++b)
                cov2(static_cast<Eigen::Index>(active[a]), static_cast<Eigen::Index>(active[b])) =
                    cov2a(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
    } else {
        const double dof = static_cast<double>(N) - static_cast<double>(1 + K);
        const double s2 = std::max(rss_focus, 0.0) / dof;
        s_scale = std::sqrt(s2);
        if (!(s_scale > 0.0))
            throw NumericalError("residual scale vanished; the design saturates the response");
    }

    // Focus block: OLS on the partial residual, with auxiliary uncertainty
    // propagated through Q = MF^-1 F'X2.
    Eigen::VectorXd beta1 = mf_solver.solve(Fty - C * beta2);
    Eigen::MatrixXd mf_inv = mf_solver.solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f)));
    Eigen::MatrixXd cov1 = (s_scale * s_scale) * mf_inv + Q * cov2 * Q.transpose();

    result.residual_scale = s_scale;
    auto push_row = [&result](const std::string& name, double coef, double var, bool focus_row) {
        WalsRow row;
        row.name = name;
        row.coef = coef;
        row.se = var > 0.0 ? std::sqrt(var) : 0.0;
        if (row.se > 0.0) {
            row.t = row.coef / row.se;
        } else {
            row.t = 0.0;
            result.warnings.push_back("standard error of '" + name + "' is zero; t set to 0");
        }
        row.focus = focus_row;
        result.rows.push_back(std::move(row));
    };
    push_row("(Intercept)", beta1(0), cov1(0, 0), true);
    for (std::size_t cidx = 0; cidx < config.focus.size(); ++cidx)
        push_row(config.focus[cidx], beta1(static_cast<Eigen::Index>(cidx + 1)),
                 cov1(static_cast<Eigen::Index>(cidx + 1), static_cast<Eigen::Index>(cidx + 1)),
                 true);
    for (std::size_t a = 0; a < q; ++a)
        push_row(aux_names[a], beta2(static_cast<Eigen::Index>(a)),
                 cov2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)), false);
    return result;
}

} // namespace dyadbma
