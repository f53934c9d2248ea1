#include "dyadbma/errors.hpp"
#include "dyadbma/rng.hpp"
#include "dyadbma/wals.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

using namespace dyadbma;

namespace {

std::map<std::string, WalsRow> row_map(const WalsResult& r) {
    std::map<std::string, WalsRow> m;
    for (const auto& row : r.rows) m[row.name] = row;
    return m;
}

// Plain OLS with intercept; returns (coef, se) per column, intercept first.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ols(const DyadTable& table) {
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    const auto k = static_cast<Eigen::Index>(table.regressor_names.size());
    Eigen::MatrixXd X(n, k + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        X(r, 0) = 1.0;
        for (Eigen::Index h = 0; h < k; ++h) X(r, h + 1) = table.rows[r].x[h];
        y(r) = table.rows[r].y;
    }
    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::VectorXd beta = xtx.ldlt().solve(X.transpose() * y);
    double rss = (y - X * beta).squaredNorm();
    double s2 = rss / static_cast<double>(n - (k + 1));
    Eigen::VectorXd se = (s2 * xtx.inverse().diagonal()).cwiseSqrt();
    return {beta, se};
}

} // namespace

TEST_CASE("shrinkage function: sign symmetry, contraction, asymptote") {
    auto [m0, v0] = laplace_shrink(0.0);
    CHECK(std::abs(m0) < 1e-12);
    CHECK(v0 > 0.0);

    double prev = 0.0;
    for (double x = 0.25; x <= 10.0; x += 0.25) {
        auto [mp, vp] = laplace_shrink(x);
        auto [mn, vn] = laplace_shrink(-x);
        CHECK(mp == doctest::Approx(-mn).epsilon(1e-12));
        CHECK(vp == doctest::Approx(vn).epsilon(1e-12));
        CHECK(std::abs(mp) < std::abs(x)); // posterior mean contracts toward zero
        CHECK(mp > prev);                  // strictly increasing in x
        CHECK(vp > 0.0);
        prev = mp;
    }

    // for large |x| the kink is irrelevant: m(x) -> x - c
    auto [m8, v8] = laplace_shrink(8.0);
    CHECK(std::abs(m8 - (8.0 - kLaplaceCDefault)) < 1e-3);
    CHECK(v8 == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("shrinkage quadrature has converged at the default resolution") {
    for (double x : {0.0, 0.7, 1.9, 3.3, 6.0}) {
        auto [m1, v1] = laplace_shrink(x);
        auto [m2, v2] = laplace_shrink(x, kLaplaceCDefault, 4001);
        CHECK(std::abs(m1 - m2) < 1e-10);
        CHECK(std::abs(v1 - v2) < 1e-10);
    }
}

TEST_CASE("with no auxiliaries the fit is exactly OLS") {
    Rng rng(81);
    auto table = testsup::random_instance(rng, 120, 4);
    WalsConfig config;
    config.focus = table.regressor_names;
    auto result = wals_fit(table, config);
    auto [beta, se] = ols(table);

    REQUIRE(result.rows.size() == 5); // intercept + 4 focus
    CHECK(result.rows[0].name == "(Intercept)");
    CHECK(result.rows[0].coef == doctest::Approx(beta(0)).epsilon(1e-12));
    CHECK(result.rows[0].se == doctest::Approx(se(0)).epsilon(1e-12));
    for (int h = 0; h < 4; ++h) {
        const auto& row = result.rows[static_cast<std::size_t>(h) + 1];
        CHECK(row.name == table.regressor_names[static_cast<std::size_t>(h)]);
        CHECK(row.focus);
        CHECK(row.coef == doctest::Approx(beta(h + 1)).epsilon(1e-12));
        CHECK(row.se == doctest::Approx(se(h + 1)).epsilon(1e-12));
        CHECK(row.t == doctest::Approx(beta(h + 1) / se(h + 1)).epsilon(1e-12));
    }
}

TEST_CASE("strong auxiliary signals survive shrinkage nearly intact") {
    Rng rng(82);
    auto table = testsup::random_instance(rng, 2000, 3, 0.3);
    WalsConfig config; // everything auxiliary
    auto result = wals_fit(table, config);
    auto [beta, se] = ols(table);
    auto rows = row_map(result);
    for (int h = 0; h < 3; ++h) {
        const auto& row = rows.at(table.regressor_names[static_cast<std::size_t>(h)]);
        if (std::abs(beta(h + 1) / se(h + 1)) > 8.0)
            CHECK(row.coef == doctest::Approx(beta(h + 1)).epsilon(0.03));
        CHECK(!row.focus);
    }
}

TEST_CASE("result does not depend on the column order of the input") {
    Rng rng(83);
    auto table = testsup::random_instance(rng, 150, 5);
    WalsConfig config;
    config.focus = {table.regressor_names[2]};

    DyadTable shuffled;
    std::vector<std::size_t> perm = {4, 0, 2, 1, 3};
    for (auto p : perm) shuffled.regressor_names.push_back(table.regressor_names[p]);
    for (const auto& row : table.rows) {
        DyadRow s = row;
        s.x.clear();
        for (auto p : perm) s.x.push_back(row.x[p]);
        shuffled.rows.push_back(s);
    }

    auto a = row_map(wals_fit(table, config));
    auto b = row_map(wals_fit(shuffled, config));
    REQUIRE(a.size() == b.size());
    for (const auto& [name, row] : a) {
        CHECK(b.at(name).coef == doctest::Approx(row.coef).epsilon(1e-9));
        CHECK(b.at(name).se == doctest::Approx(row.se).epsilon(1e-9));
    }
}

TEST_CASE("rescaling an auxiliary rescales its coefficient, not its t") {
    Rng rng(84);
    auto table = testsup::random_instance(rng, 200, 4);
    DyadTable scaled = table;
    const double c = 40.0;
    for (auto& row : scaled.rows) row.x[1] *= c;

    WalsConfig config;
    config.focus = {table.regressor_names[0]};
    auto a = row_map(wals_fit(table, config));
    auto b = row_map(wals_fit(scaled, config));
    const std::string& name = table.regressor_names[1];
    CHECK(b.at(name).coef == doctest::Approx(a.at(name).coef / c).epsilon(1e-9));
    CHECK(b.at(name).se == doctest::Approx(a.at(name).se / c).epsilon(1e-9));
    CHECK(b.at(name).t == doctest::Approx(a.at(name).t).epsilon(1e-9));
}

TEST_CASE("unknown focus name is a configuration error") {
    Rng rng(85);
    auto table = testsup::random_instance(rng, 60, 3);
    WalsConfig config;
    config.focus = {"no_such_regressor"};
    CHECK_THROWS_AS(wals_fit(table, config), ConfigError);
}

TEST_CASE("too few rows for the error variance is refused") {
    Rng rng(86);
    auto table = testsup::random_instance(rng, 60, 3);
    table.rows.resize(4); // n = k+1 leaves no residual degrees of freedom
    WalsConfig config;
    CHECK_THROWS_AS(wals_fit(table, config), InsufficientDataError);
}

TEST_CASE("auxiliary inside the focus span is zeroed with a warning") {
    Rng rng(87);
    auto table = testsup::random_instance(rng, 100, 2);
    table.regressor_names.push_back("copy_of_first");
    for (auto& row : table.rows) row.x.push_back(row.x[0]);
    WalsConfig config;
    config.focus = {table.regressor_names[0]};
    auto result = wals_fit(table, config);
    auto rows = row_map(result);
    CHECK(rows.at("copy_of_first").coef == 0.0);
    CHECK(!result.warnings.empty());
}

TEST_CASE("an exact fit leaves no error scale to estimate") {
    DyadTable table;
    table.regressor_names = {"x"};
    for (int r = 0; r < 30; ++r) {
        DyadRow row;
        row.i = "a" + std::to_string(r);
        row.j = "b" + std::to_string(r);
        double v = static_cast<double>(r);
        row.x = {v};
        row.y = 2.0 + 3.0 * v; // exactly linear
        table.rows.push_back(row);
    }
    WalsConfig config;
    CHECK_THROWS_AS(wals_fit(table, config), NumericalError);
}

TEST_CASE("rows are reported intercept first, then focus, then named auxiliaries") {
    Rng rng(88);
    auto table = testsup::random_instance(rng, 90, 4);
    table.regressor_names = {"delta", "alpha", "gamma", "beta"};
    WalsConfig config;
    config.focus = {"gamma"};
    auto result = wals_fit(table, config);
    REQUIRE(result.rows.size() == 5);
    CHECK(result.rows[0].name == "(Intercept)");
    CHECK(result.rows[1].name == "gamma");
    CHECK(result.rows[2].name == "alpha");
    CHECK(result.rows[3].name == "beta");
    CHECK(result.rows[4].name == "delta");
}
