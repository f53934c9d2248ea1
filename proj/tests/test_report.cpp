#include "dyadbma/errors.hpp"
#include "dyadbma/report.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

using namespace dyadbma;

#ifndef DYADBMA_GOLDEN_DIR
#error "build must define DYADBMA_GOLDEN_DIR"
#endif

TEST_CASE("ranked table reproduces the frozen reference bytes") {
    auto result = testsup::golden_fixture_result();
    std::string rendered = render_ranked_table(result, 0.8);
    std::string golden = testsup::read_file(std::string(DYADBMA_GOLDEN_DIR) + "/ranked_table.csv");
    CHECK(rendered == golden);
    // rendering is a pure function of the result
    CHECK(render_ranked_table(result, 0.8) == rendered);
}

TEST_CASE("ranking: PIP first, then effect magnitude, then name") {
    auto result = testsup::golden_fixture_result();
    auto rows = ranked_rows(result, 0.8);
    REQUIRE(rows.size() == 20);
    CHECK(rows[0].name == "Common Gender");
    CHECK(rows[1].name == "Common Section");
    CHECK(rows[2].name == "Friends_t-1");
    CHECK(rows[3].name == "Both Smokers");
    CHECK(rows[4].name == "Inconsistent diff.");
    // PIP tie at 0.02 is broken by |post_mean|
    CHECK(rows[8].name == "Time pref. diff.");
    CHECK(rows[9].name == "Income diff.");
    CHECK(rows.back().name == "Both right");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].pip >= rows[i].pip);

    int robust = 0;
    for (const auto& row : rows) robust += row.robust ? 1 : 0;
    CHECK(robust == 4);
}

TEST_CASE("threshold above one marks nothing robust") {
    auto result = testsup::golden_fixture_result();
    auto rows = ranked_rows(result, 1.01);
    CHECK(std::none_of(rows.begin(), rows.end(), [](const RankedRow& r) { return r.robust; }));
}

TEST_CASE("full PIP ties fall back to the name order") {
    BmaResult result;
    result.names = {"bb", "aa", "cc"};
    result.pip = {0.5, 0.5, 0.5};
    result.post_mean = {0.1, 0.1, 0.1};
    result.post_sd = {0.01, 0.01, 0.01};
    result.N = 10;
    result.K = 3;
    auto rows = ranked_rows(result, 0.8);
    CHECK(rows[0].name == "aa");
    CHECK(rows[1].name == "bb");
    CHECK(rows[2].name == "cc");
}

TEST_CASE("mismatched result lengths are an integrity error") {
    BmaResult result;
    result.names = {"a", "b"};
    result.pip = {0.5};
    result.post_mean = {0.1, 0.2};
    result.post_sd = {0.01, 0.02};
    CHECK_THROWS_AS(ranked_rows(result, 0.8), IntegrityError);
}

TEST_CASE("prior comparison emits one record per regressor and prior") {
    auto base = testsup::golden_fixture_result();
    auto alt = base;
    std::reverse(alt.pip.begin(), alt.pip.end()); // same names, different numbers
    auto third = base;

    std::vector<std::pair<std::string, BmaResult>> results = {
        {"uniform", base}, {"fixed", alt}, {"random", third}};
    auto records = render_prior_comparison(results);
    REQUIRE(records.size() == 60);

    // outer order follows the first result's ranking, inner follows input order
    CHECK(records[0].regressor == "Common Gender");
    CHECK(records[0].prior_label == "uniform");
    CHECK(records[1].prior_label == "fixed");
    CHECK(records[2].prior_label == "random");
    CHECK(records[3].regressor == "Common Section");
    CHECK(records[57].regressor == "Both right");

    auto csv = prior_comparison_csv(records);
    CHECK(csv.rfind("regressor,prior,pip\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
}

TEST_CASE("prior comparison refuses mismatched regressor sets") {
    auto base = testsup::golden_fixture_result();
    auto odd = base;
    odd.names[3] = "renamed";
    std::vector<std::pair<std::string, BmaResult>> results = {{"a", base}, {"b", odd}};
    CHECK_THROWS_AS(render_prior_comparison(results), SchemaError);
}

TEST_CASE("prior comparison requires at least one result") {
    std::vector<std::pair<std::string, BmaResult>> empty;
    CHECK_THROWS_AS(render_prior_comparison(empty), ConfigError);
}
