#pragma once

#include "dyadbma/attributes.hpp"
#include "dyadbma/nominations.hpp"
#include "dyadbma/variable_spec.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dyadbma {

enum class FilterKind {
    all,
    ego_gender,                         // keep rows whose ego (node i) matches a gender value
    exclude_nodes_with_period1_friends, // drop rows touching any node with a period-1 link
    exclude_period1_friend_pairs        // drop rows with lagged = 1
};

struct DyadFilter {
    FilterKind kind = FilterKind::all;
    std::string gender_column; // ego_gender only; Binary, 1 = female
    bool female = true;        // ego_gender only
};

/// Parse a filter token: "all", "ego-gender:<column>:<female|male>",
/// "exclude-p1-nodes", "exclude-p1-pairs".
DyadFilter parse_filter(const std::string& text);

struct DyadRow {
    std::string i, j; // i < j lexicographically
    double y = 0.0;
    double lagged = 0.0;
    std::vector<double> x; // K regressor values
};

struct DyadTable {
    std::vector<std::string> regressor_names; // K
    std::vector<DyadRow> rows;
    std::vector<std::string> deletion_log; // human-readable listwise/filter audit lines

    std::size_t n() const { return rows.size(); }
    std::size_t k() const { return regressor_names.size(); }
};

/// Build one row per unordered node pair: listwise deletion on Missing spec
/// columns, transforms per spec, y from the period-2 reciprocal set, lagged
/// from the period-1 set, then filters applied left to right. The lag
/// regressor, when specified, is appended last.
DyadTable build_dyads(const AttributeTable& attrs, const std::vector<VariableSpec>& specs,
                      const PairSet& response, const PairSet& lag,
                      const std::vector<DyadFilter>& filters);

/// Dyads file: header i,j,y,lagged,<regressors...>; values written with
/// round-trip precision so a write/read cycle is lossless.
void write_dyads(const DyadTable& table, const std::string& path);
DyadTable read_dyads(const std::string& path);

} // namespace dyadbma
