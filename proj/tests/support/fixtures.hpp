// Shared test fixtures: temp directories, the 6-node hand-enumerated network,
// random regression instances, and the frozen ranked-report input.
#pragma once

#include "dyadbma/attributes.hpp"
#include "dyadbma/bma.hpp"
#include "dyadbma/dyads.hpp"
#include "dyadbma/nominations.hpp"
#include "dyadbma/rng.hpp"
#include "dyadbma/variable_spec.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

namespace testsup {

class TempDir {
public:
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("dyadbma_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("fixture write failed: " + path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fixture read failed: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// 6 nodes a..f with (female, bmi, smoker); d has Missing bmi. Period 1 has one
// reciprocal pair {a,b} plus an unreciprocated c->a; period 2 has reciprocal
// {a,b}, {a,e}, {c,f} plus an unreciprocated d->e.
inline dyadbma::AttributeTable six_node_attributes() {
    using dyadbma::Cell;
    dyadbma::AttributeTable attrs;
    attrs.node_ids = {"a", "b", "c", "d", "e", "f"};
    attrs.column_names = {"female", "bmi", "smoker"};
    attrs.column_kinds = {dyadbma::ColumnKind::binary, dyadbma::ColumnKind::numeric,
                          dyadbma::ColumnKind::binary};
    attrs.columns = {
        {Cell(1.0), Cell(1.0), Cell(0.0), Cell(0.0), Cell(1.0), Cell(0.0)},
        {Cell(20.0), Cell(22.5), Cell(25.0), Cell(), Cell(30.0), Cell(21.0)},
        {Cell(1.0), Cell(0.0), Cell(1.0), Cell(0.0), Cell(1.0), Cell(0.0)},
    };
    attrs.rebuild_indexes();
    return attrs;
}

inline dyadbma::PairSet six_node_period1() {
    return {{"a", "b"}};
}

inline dyadbma::PairSet six_node_period2() {
    return {{"a", "b"}, {"a", "e"}, {"c", "f"}};
}

inline std::vector<dyadbma::VariableSpec> six_node_specs() {
    using dyadbma::Role;
    using dyadbma::Transform;
    return {
        {"BothFemale", "female", Transform::shared_dummy, Role::candidate},
        {"BmiDiff", "bmi", Transform::abs_diff, Role::candidate},
        {"BothSmokers", "smoker", Transform::shared_dummy, Role::candidate},
        {dyadbma::kLagRegressorName, "", Transform::lag, Role::candidate},
    };
}

// Random linear-model instance: iid standard-normal regressors (the last one
// correlated with the first to exercise non-orthogonal designs), response
// beta'x + noise. Suitable for oracle comparisons.
inline dyadbma::DyadTable random_instance(dyadbma::Rng& rng, std::size_t N, std::size_t K,
                                          double noise_sd = 1.0, bool binary_response = false) {
    dyadbma::DyadTable table;
    for (std::size_t h = 0; h < K; ++h) table.regressor_names.push_back("x" + std::to_string(h));
    std::vector<double> beta(K);
    for (std::size_t h = 0; h < K; ++h) beta[h] = (h % 3 == 0) ? 0.8 : (h % 3 == 1 ? -0.3 : 0.0);
    for (std::size_t r = 0; r < N; ++r) {
        dyadbma::DyadRow row;
        row.i = "n" + std::to_string(r);
        row.j = "m" + std::to_string(r);
        row.x.resize(K);
        for (std::size_t h = 0; h < K; ++h) row.x[h] = rng.gaussian();
        if (K >= 2) row.x[K - 1] = 0.6 * row.x[0] + 0.8 * row.x[K - 1];
        double index = 0.0;
        for (std::size_t h = 0; h < K; ++h) index += beta[h] * row.x[h];
        if (binary_response) {
            double p = 1.0 / (1.0 + std::exp(-index));
            row.y = rng.uniform() < p ? 1.0 : 0.0;
        } else {
            row.y = index + noise_sd * rng.gaussian();
        }
        row.lagged = 0.0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Frozen ranked-report input: the PIP pattern of the motivating study's main
// table. The three PIP = 1 rows share a posterior mean so the name tie-break
// fixes their order; remaining rows descend in |posterior mean| within PIP
// ties. N matches the study's observation count.
inline dyadbma::BmaResult golden_fixture_result() {
    dyadbma::BmaResult r;
    r.names = {"Common Gender",  "Common Section", "Friends_t-1",
               "Both Smokers",   "Inconsistent diff.", "Altruism diff.",
               "CRT diff.",      "Both Reflective", "Time pref. diff.",
               "Income diff.",   "Risk diff.",      "Reciprocity diff.",
               "Self-confidence diff.", "BMI diff.", "Parent educ. diff.",
               "Both volunteers", "Both STEM best grade", "Both STEM pref.",
               "Both altruism learner", "Both right"};
    r.pip = {1.0, 1.0, 1.0, 0.97, 0.22, 0.08, 0.04, 0.03, 0.02, 0.02,
             0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
    r.post_mean = {0.1,     0.1,    0.1,    0.034,  -0.022, -0.003, -0.0001,
                   0.0002,  -0.0002, -0.0001, 0.0001, 9e-05,  -8e-05, -7e-05,
                   -6e-05,  -5e-05,  4e-05,  3e-05,  -2e-05, 1e-05};
    r.post_sd = {0.003,  0.003,  0.023,  0.01,   0.005,  0.001,  0.0008,
                 0.011,  0.0001, 0.0003, 0.0001, 0.0002, 0.0002, 0.0001,
                 0.0001, 0.0012, 0.0006, 0.0006, 0.0003, 0.0004};
    r.N = 8515;
    r.K = r.names.size();
    r.engine = "fixture";
    return r;
}

} // namespace testsup
