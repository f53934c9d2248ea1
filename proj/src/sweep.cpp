#include "dyadbma/sweep.hpp"
#include "dyadbma/errors.hpp"

#include <cmath>

namespace dyadbma {

CenteredDesign make_centered_design(const SufficientStats& stats) {
    const std::size_t K = stats.K;
    const double N = static_cast<double>(stats.N);
    CenteredDesign d;
    d.K = K;
    d.tss = stats.tss;
    d.tss_zero = !(stats.tss > 0.0);
    d.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    d.r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    d.scale = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    d.degenerate.assign(K, 0);

    // Centered moments from raw cross-moments: S[h,l] = x'x - N xbar_h xbar_l.
    Eigen::VectorXd xbar(static_cast<Eigen::Index>(K));
    Eigen::VectorXd css(static_cast<Eigen::Index>(K));
    for (std::size_t h = 0; h < K; ++h) {
        const Eigen::Index hi = static_cast<Eigen::Index>(h) + 1;
        xbar(static_cast<Eigen::Index>(h)) = stats.xtx(0, hi) / N;
        double s = stats.xtx(hi, hi) - N * xbar(static_cast<Eigen::Index>(h)) *
                                           xbar(static_cast<Eigen::Index>(h));
        css(static_cast<Eigen::Index>(h)) = s;
        // Relative zero-variance test against the raw second moment; a column
        // whose centered SS vanishes at this scale is constant.
        double raw = stats.xtx(hi, hi);
        if (!(s > 1e-12 * std::max(raw, 1e-300))) {
            d.degenerate[h] = 1;
            continue;
        }
        d.scale(static_cast<Eigen::Index>(h)) = std::sqrt(s);
    }

    const double sqrt_tss = d.tss_zero ? 0.0 : std::sqrt(d.tss);
    for (std::size_t h = 0; h < K; ++h) {
        if (d.degenerate[h]) continue;
        const Eigen::Index hE = static_cast<Eigen::Index>(h);
        const Eigen::Index hi = hE + 1;
        d.A(hE, hE) = 1.0;
        d.largest_diagonal = 1.0;
        for (std::size_t l = h + 1; l < K; ++l) {
            if (d.degenerate[l]) continue;
            const Eigen::Index lE = static_cast<Eigen::Index>(l);
            const Eigen::Index li = lE + 1;
            double s = stats.xtx(hi, li) - N * xbar(hE) * xbar(lE);
            double a = s / (d.scale(hE) * d.scale(lE));
            d.A(hE, lE) = a;
            d.A(lE, hE) = a;
        }
        if (!d.tss_zero) {
            double sxy = stats.xty(hi) - N * xbar(hE) * stats.ybar;
            d.r(hE) = sxy / (d.scale(hE) * sqrt_tss);
        }
    }
    return d;
}

SweepState::SweepState(const CenteredDesign& design, double rank_tol)
    : design_(&design), y_(static_cast<Eigen::Index>(design.K)) {
    tol_ = rank_tol * std::max(design.largest_diagonal, 0.0);
    const Eigen::Index P = y_ + 1;
    T_.resize(P, P);
    ucol_.resize(P);
    vrow_.resize(P);
    swept_.assign(design.K, 0);
    deferred_.assign(design.K, 0);
    set_mask(0);
}

void SweepState::set_mask(std::uint64_t mask) {
    T_.topLeftCorner(y_, y_) = design_->A;
    T_.col(y_).head(y_) = design_->r;
    T_.row(y_).head(y_) = design_->r.transpose();
    T_(y_, y_) = 1.0;
    std::fill(swept_.begin(), swept_.end(), 0);
    std::fill(deferred_.begin(), deferred_.end(), 0);
    swept_count_ = deferred_count_ = 0;
    mask_ = 0;
    for (std::size_t h = 0; h < design_->K; ++h)
        if (mask >> h & 1u) toggle(h);
}

double SweepState::rss_std() const {
    if (design_->tss_zero) return 1.0;
    double v = T_(y_, y_);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

void SweepState::sweep(std::size_t p) {
    const Eigen::Index pe = static_cast<Eigen::Index>(p);
    const double d = T_(pe, pe);
    ucol_ = T_.col(pe);
    vrow_ = T_.row(pe).transpose();
    T_.noalias() -= ucol_ * (vrow_.transpose() / d);
    T_.col(pe) = ucol_ / d;
    T_.row(pe) = (vrow_ / d).transpose();
    T_(pe, pe) = -1.0 / d;
}

void SweepState::revsweep(std::size_t p) {
    const Eigen::Index pe = static_cast<Eigen::Index>(p);
    const double d = T_(pe, pe);
    ucol_ = T_.col(pe);
    vrow_ = T_.row(pe).transpose();
    T_.noalias() -= ucol_ * (vrow_.transpose() / d);
    T_.col(pe) = -ucol_ / d;
    T_.row(pe) = (-vrow_ / d).transpose();
    T_(pe, pe) = -1.0 / d;
}

void SweepState::revive_deferred() {
    // Sweeping in only lowers other Schur diagonals, so one ascending pass
    // finds every pivot freed by the removal.
    for (std::size_t h = 0; h < design_->K; ++h) {
        if (!deferred_[h]) continue;
        if (design_->degenerate[h]) continue;
        if (T_(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h)) > tol_) {
            deferred_[h] = 0;
            --deferred_count_;
            sweep(h);
            swept_[h] = 1;
            ++swept_count_;
        }
    }
}

void SweepState::toggle(std::size_t h) {
    if (h >= design_->K) throw ConfigError("toggle index out of range");
    if (mask_ >> h & 1u) {
        mask_ &= ~(1ull << h);
        if (swept_[h]) {
            swept_[h] = 0;
            --swept_count_;
            revsweep(h);
            revive_deferred();
        } else {
            deferred_[h] = 0;
            --deferred_count_;
        }
        return;
    }
    mask_ |= 1ull << h;
    if (design_->degenerate[h] ||
        !(T_(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h)) > tol_)) {
        deferred_[h] = 1;
        ++deferred_count_;
        return;
    }
    sweep(h);
    swept_[h] = 1;
    ++swept_count_;
}

} // namespace dyadbma
