#include "dyadbma/g_prior.hpp"
#include "dyadbma/rng.hpp"
#include "dyadbma/sufficient_stats.hpp"
#include "support/fixtures.hpp"
#include "support/quadrature_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadbma;

namespace {

DyadTable line_instance() {
    // x = 1..6, y = (1,2,2,4,4,5)
    DyadTable t;
    t.regressor_names = {"x"};
    double ys[] = {1, 2, 2, 4, 4, 5};
    for (int r = 0; r < 6; ++r) {
        DyadRow row;
        row.i = "i" + std::to_string(r);
        row.j = "j" + std::to_string(r);
        row.x = {static_cast<double>(r + 1)};
        row.y = ys[r];
        t.rows.push_back(row);
    }
    return t;
}

} // namespace

TEST_CASE("null model has log Bayes factor exactly zero") {
    Rng rng(3);
    auto stats = compute_sufficient_stats(testsup::random_instance(rng, 50, 4));
    CHECK(log_bayes_factor(stats, 0, 50.0) == 0.0);
}

TEST_CASE("evidence matches numerical integration on the line instance") {
    auto table = line_instance();
    auto stats = compute_sufficient_stats(table);
    double engine = log_bayes_factor(stats, 1u, 6.0);
    auto oracle = testsup::quadrature_oracle(table, {0}, 6.0, 801, 20.0, 361, 12.0);
    CHECK(oracle.null_check < 1e-10);
    CHECK(engine == doctest::Approx(oracle.log_bf).epsilon(1e-6));
    CHECK(std::abs(engine - oracle.log_bf) < 1e-4);
}

TEST_CASE("conditional moments match quadrature at N=8, k=1") {
    Rng rng(17);
    auto table = testsup::random_instance(rng, 8, 1, 0.7);
    auto stats = compute_sufficient_stats(table);
    const double G = 8.0;
    auto cm = conditional_posterior_moments(stats, 1u, G);
    auto oracle = testsup::quadrature_oracle(table, {0}, G, 1201, 20.0, 481, 12.0);
    CHECK(std::abs(cm.mean(0) - oracle.mean(0)) < 1e-6);
    CHECK(std::abs(cm.cov(0, 0) - oracle.cov(0, 0)) < 1e-6);
}

TEST_CASE("duplicated regressor adds no evidence beyond the original") {
    Rng rng(23);
    auto table = testsup::random_instance(rng, 40, 3);
    for (auto& row : table.rows) row.x[2] = row.x[1];
    auto stats = compute_sufficient_stats(table);
    const double G = 40.0;
    CHECK(log_bayes_factor(stats, 0b010, G) ==
          doctest::Approx(log_bayes_factor(stats, 0b110, G)).epsilon(1e-12));
}

TEST_CASE("shrinkage limits of the conditional mean") {
    Rng rng(29);
    auto table = testsup::random_instance(rng, 60, 2);
    auto stats = compute_sufficient_stats(table);

    // OLS slope of the single-regressor model, computed directly
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : table.rows) {
        sx += row.x[0];
        sy += row.y;
        sxx += row.x[0] * row.x[0];
        sxy += row.x[0] * row.y;
    }
    const double n = static_cast<double>(table.rows.size());
    const double beta_ols = (sxy - sx * sy / n) / (sxx - sx * sx / n);

    auto huge = conditional_posterior_moments(stats, 0b01, 1e12);
    CHECK(huge.mean(0) == doctest::Approx(beta_ols).epsilon(1e-9));
    auto tiny = conditional_posterior_moments(stats, 0b01, 1e-12);
    CHECK(std::abs(tiny.mean(0)) < 1e-10);

    double last = 0.0;
    for (double G : {0.1, 1.0, 10.0, 100.0, 1e4, 1e8}) {
        auto cm = conditional_posterior_moments(stats, 0b01, G);
        CHECK(std::abs(cm.mean(0)) >= last - 1e-15);
        last = std::abs(cm.mean(0));
    }
}

TEST_CASE("moment scale follows the posterior variance formula") {
    Rng rng(37);
    auto table = testsup::random_instance(rng, 45, 2);
    auto stats = compute_sufficient_stats(table);
    const double G = 45.0;
    auto cm = conditional_posterior_moments(stats, 0b11, G);
    auto oracle = testsup::quadrature_oracle(table, {0, 1}, G, 801, 20.0, 241, 12.0);
    CHECK(std::abs(cm.mean(0) - oracle.mean(0)) < 1e-7);
    CHECK(std::abs(cm.mean(1) - oracle.mean(1)) < 1e-7);
    CHECK(std::abs(cm.cov(0, 0) - oracle.cov(0, 0)) < 1e-6);
    CHECK(std::abs(cm.cov(0, 1) - oracle.cov(0, 1)) < 1e-6);
    CHECK(std::abs(cm.cov(1, 1) - oracle.cov(1, 1)) < 1e-6);
}
