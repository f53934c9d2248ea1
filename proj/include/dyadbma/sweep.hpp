#pragma once

#include "dyadbma/sufficient_stats.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace dyadbma {

/// Centered cross-moments rescaled to unit diagonal (a correlation-like
/// system). Standardizing makes the rank tolerance relative to the largest
/// diagonal by construction and keeps fits scale-equivariant; raw-scale
/// coefficients are recovered through `scale` and `tss`.
struct CenteredDesign {
    std::size_t K = 0;
    double tss = 0.0;
    bool tss_zero = false;              // constant response: every R^2 defined as 0
    Eigen::MatrixXd A;                  // K x K, unit diagonal off the degenerate set
    Eigen::VectorXd r;                  // correlations of regressors with y
    Eigen::VectorXd scale;              // sqrt of centered SS per column; 0 if degenerate
    std::vector<char> degenerate;       // zero-variance columns, never sweepable
    double largest_diagonal = 0.0;      // of the standardized system (1 unless all degenerate)
};

CenteredDesign make_centered_design(const SufficientStats& stats);

/// Sweep-operator state over the (K+1)x(K+1) augmented matrix [[A, r],[r',1]].
/// Sweeping the pivots of a model's selected columns yields, in the trailing
/// cell, 1 - R^2 of that model; selected columns whose Schur diagonal falls
/// below tol stay "deferred": counted in the mask but contributing no fit and
/// no dimension penalty. Deferred pivots are revived in ascending order when
/// a removal frees them.
class SweepState {
public:
    explicit SweepState(const CenteredDesign& design, double rank_tol = 1e-10);

    /// Flip membership of column h (one SWEEP or REVSWEEP plus revivals).
    void toggle(std::size_t h);
    /// Rebuild from scratch and include the mask's columns in ascending order.
    void set_mask(std::uint64_t mask);

    std::uint64_t mask() const { return mask_; }
    std::size_t k_effective() const { return swept_count_; }
    bool rank_deficient() const { return deferred_count_ > 0; }

    double rss_std() const; // 1 - R^2, clamped to [0,1]
    double r2() const { return 1.0 - rss_std(); }

    bool is_swept(std::size_t h) const { return swept_[h] != 0; }
    /// Standardized OLS coefficient of swept column h.
    double beta_std(std::size_t h) const { return T_(static_cast<Eigen::Index>(h), y_); }
    /// Entry (h,l) of the inverse of the selected standardized submatrix.
    double inv_entry(std::size_t h, std::size_t l) const {
        return -T_(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(l));
    }

    const CenteredDesign& design() const { return *design_; }

private:
    void sweep(std::size_t p);
    void revsweep(std::size_t p);
    void revive_deferred();

    const CenteredDesign* design_;
    double tol_ = 0.0;
    Eigen::MatrixXd T_; // (K+1) x (K+1); y row/column at index K
    Eigen::Index y_ = 0;
    std::uint64_t mask_ = 0;
    std::vector<char> swept_, deferred_;
    std::size_t swept_count_ = 0, deferred_count_ = 0;
    Eigen::VectorXd ucol_, vrow_; // scratch for rank-1 updates
};

} // namespace dyadbma
