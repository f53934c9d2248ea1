#include "dyadbma/rng.hpp"
#include "dyadbma/sufficient_stats.hpp"
#include "dyadbma/sweep.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <bit>

using namespace dyadbma;

namespace {

// Fresh standardized solve for a mask: R^2 = r_S' A_SS^{-1} r_S.
double fresh_rss_std(const CenteredDesign& design, std::uint64_t mask) {
    std::vector<int> idx;
    for (std::size_t h = 0; h < design.K; ++h)
        if ((mask >> h & 1) && !design.degenerate[h]) idx.push_back(static_cast<int>(h));
    if (idx.empty() || design.tss_zero) return 1.0;
    Eigen::MatrixXd A(idx.size(), idx.size());
    Eigen::VectorXd r(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        r(a) = design.r(idx[a]);
        for (std::size_t b = 0; b < idx.size(); ++b) A(a, b) = design.A(idx[a], idx[b]);
    }
    return 1.0 - r.dot(A.ldlt().solve(r));
}

} // namespace

TEST_CASE("toggle matches fresh solves through a random walk") {
    Rng rng(2024);
    auto table = testsup::random_instance(rng, 120, 8);
    auto stats = compute_sufficient_stats(table);
    auto design = make_centered_design(stats);
    SweepState state(design);

    std::uint64_t mask = 0;
    for (int step = 0; step < 500; ++step) {
        std::size_t h = rng.uniform_int(8);
        state.toggle(h);
        mask ^= 1ull << h;
        REQUIRE(state.mask() == mask);
        CHECK(state.rss_std() == doctest::Approx(fresh_rss_std(design, mask)).epsilon(1e-11));
    }
}

TEST_CASE("set_mask equals a toggle path to the same mask") {
    Rng rng(77);
    auto table = testsup::random_instance(rng, 60, 6);
    auto design = make_centered_design(compute_sufficient_stats(table));

    for (std::uint64_t mask : {0x15ull, 0x3Full, 0x01ull, 0x2Aull}) {
        SweepState toggled(design);
        for (std::size_t h = 0; h < 6; ++h)
            if (mask >> h & 1) toggled.toggle(h);
        SweepState direct(design);
        direct.set_mask(mask);
        CHECK(direct.rss_std() == doctest::Approx(toggled.rss_std()).epsilon(1e-13));
        for (std::size_t h = 0; h < 6; ++h) {
            if (!(mask >> h & 1)) continue;
            CHECK(direct.beta_std(h) == doctest::Approx(toggled.beta_std(h)).epsilon(1e-12));
        }
    }
}

TEST_CASE("standardized coefficients match a dense solve") {
    Rng rng(5150);
    auto table = testsup::random_instance(rng, 90, 5);
    auto design = make_centered_design(compute_sufficient_stats(table));
    const std::uint64_t mask = 0b10110;
    SweepState state(design);
    state.set_mask(mask);

    std::vector<int> idx = {1, 2, 4};
    Eigen::MatrixXd A(3, 3);
    Eigen::VectorXd r(3);
    for (int a = 0; a < 3; ++a) {
        r(a) = design.r(idx[a]);
        for (int b = 0; b < 3; ++b) A(a, b) = design.A(idx[a], idx[b]);
    }
    Eigen::VectorXd beta = A.ldlt().solve(r);
    Eigen::MatrixXd Ainv = A.ldlt().solve(Eigen::MatrixXd::Identity(3, 3));
    for (int a = 0; a < 3; ++a) {
        CHECK(state.beta_std(idx[a]) == doctest::Approx(beta(a)).epsilon(1e-12));
        for (int b = 0; b < 3; ++b)
            CHECK(state.inv_entry(idx[a], idx[b]) == doctest::Approx(Ainv(a, b)).epsilon(1e-11));
    }
}

TEST_CASE("duplicated column defers instead of exploding") {
    Rng rng(31);
    auto table = testsup::random_instance(rng, 40, 3);
    for (auto& row : table.rows) row.x[2] = row.x[0]; // exact copy
    table.regressor_names[2] = "copy_of_x0";
    auto design = make_centered_design(compute_sufficient_stats(table));
    SweepState state(design);

    state.toggle(0);
    double rss_single = state.rss_std();
    state.toggle(2); // collinear with column 0: deferred
    CHECK(state.rank_deficient());
    CHECK(state.k_effective() == 1);
    CHECK(state.rss_std() == doctest::Approx(rss_single).epsilon(1e-13));

    // removing the first column revives the copy; fit is unchanged
    state.toggle(0);
    CHECK_FALSE(state.rank_deficient());
    CHECK(state.k_effective() == 1);
    CHECK(state.rss_std() == doctest::Approx(rss_single).epsilon(1e-10));
}

TEST_CASE("zero-variance column is permanently degenerate") {
    Rng rng(41);
    auto table = testsup::random_instance(rng, 30, 2);
    for (auto& row : table.rows) row.x[1] = 3.0;
    auto design = make_centered_design(compute_sufficient_stats(table));
    CHECK(design.degenerate[1]);
    SweepState state(design);
    state.toggle(1);
    CHECK(state.mask() == 0b10);
    CHECK(state.k_effective() == 0);
    CHECK(state.rss_std() == 1.0);
    state.toggle(0);
    CHECK(state.k_effective() == 1);
}

TEST_CASE("full gray walk stays consistent with fresh solves at checkpoints") {
    Rng rng(1234);
    auto table = testsup::random_instance(rng, 150, 10);
    auto design = make_centered_design(compute_sufficient_stats(table));
    SweepState state(design);

    std::uint64_t prev_gray = 0;
    for (std::uint64_t t = 1; t < (1ull << 10); ++t) {
        std::uint64_t gray = t ^ (t >> 1);
        state.toggle(static_cast<std::size_t>(std::countr_zero(gray ^ prev_gray)));
        prev_gray = gray;
        if (t % 97 == 0)
            CHECK(state.rss_std() == doctest::Approx(fresh_rss_std(design, gray)).epsilon(1e-11));
    }
}
