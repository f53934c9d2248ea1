#include "dyadbma/dyads.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace dyadbma {

DyadFilter parse_filter(const std::string& text) {
    if (text == "all") return {FilterKind::all, "", true};
    if (text == "exclude-p1-nodes") return {FilterKind::exclude_nodes_with_period1_friends, "", true};
    if (text == "exclude-p1-pairs") return {FilterKind::exclude_period1_friend_pairs, "", true};
    const std::string prefix = "ego-gender:";
    if (text.rfind(prefix, 0) == 0) {
        std::string rest = text.substr(prefix.size());
        std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw ConfigError("ego-gender filter needs '<column>:<female|male>', got '" + text + "'");
        DyadFilter f{FilterKind::ego_gender, rest.substr(0, colon), true};
        std::string side = rest.substr(colon + 1);
        if (side == "female") f.female = true;
        else if (side == "male") f.female = false;
        else throw ConfigError("ego-gender side must be female or male, got '" + side + "'");
        if (f.gender_column.empty()) throw ConfigError("ego-gender filter needs a column name");
        return f;
    }
    throw ConfigError("unknown filter '" + text +
                      "' (expected all, ego-gender:<column>:<female|male>, "
                      "exclude-p1-nodes, exclude-p1-pairs)");
}

namespace {

void validate_pairs_known(const PairSet& pairs, const AttributeTable& attrs, const char* what) {
    for (const auto& p : pairs) {
        if (!attrs.has_node(p.first))
            throw IntegrityError(std::string(what) + " pair references unknown node: " + p.first);
        if (!attrs.has_node(p.second))
            throw IntegrityError(std::string(what) + " pair references unknown node: " + p.second);
    }
}

std::set<std::string> nodes_with_links(const PairSet& pairs) {
    std::set<std::string> out;
    for (const auto& p : pairs) {
        out.insert(p.first);
        out.insert(p.second);
    }
    return out;
}

} // namespace

DyadTable build_dyads(const AttributeTable& attrs, const std::vector<VariableSpec>& specs,
                      const PairSet& response, const PairSet& lag,
                      const std::vector<DyadFilter>& filters) {
    validate_specs(specs, attrs);
    validate_pairs_known(response, attrs, "response");
    validate_pairs_known(lag, attrs, "lag");

    // Attribute-backed specs in declared order; the lag regressor goes last.
    std::vector<const VariableSpec*> attr_specs;
    bool has_lag = false;
    for (const auto& s : specs) {
        if (s.transform == Transform::lag) has_lag = true;
        else attr_specs.push_back(&s);
    }
    std::vector<std::size_t> spec_cols;
    spec_cols.reserve(attr_specs.size());
    for (const auto* s : attr_specs) spec_cols.push_back(attrs.column(s->source_column));

    for (const auto& f : filters)
        if (f.kind == FilterKind::ego_gender) {
            std::size_t c = attrs.column(f.gender_column);
            if (attrs.column_kinds[c] != ColumnKind::binary)
                throw ConfigError("ego-gender filter column '" + f.gender_column +
                                  "' must be Binary");
        }

    DyadTable table;
    for (const auto* s : attr_specs) table.regressor_names.push_back(s->name);
    if (has_lag) table.regressor_names.push_back(kLagRegressorName);

    // Fixed lexicographic node order makes row order byte-stable.
    std::vector<std::string> ids = attrs.node_ids;
    std::sort(ids.begin(), ids.end());

    std::map<std::string, std::size_t> missing_drops; // spec column -> dropped pair count
    std::size_t dropped_pairs = 0;
    for (std::size_t a = 0; a < ids.size(); ++a) {
        std::size_t ra = attrs.node_row(ids[a]);
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            std::size_t rb = attrs.node_row(ids[b]);
            bool missing = false;
            for (std::size_t s = 0; s < attr_specs.size(); ++s) {
                if (attrs.cell(ra, spec_cols[s]) && attrs.cell(rb, spec_cols[s])) continue;
                missing_drops[attr_specs[s]->source_column] += 1;
                missing = true;
            }
            if (missing) {
                ++dropped_pairs;
                continue;
            }
            DyadRow row;
            row.i = ids[a];
            row.j = ids[b];
            row.x.reserve(table.regressor_names.size());
            for (std::size_t s = 0; s < attr_specs.size(); ++s)
                row.x.push_back(transform_value(attr_specs[s]->transform,
                                                *attrs.cell(ra, spec_cols[s]),
                                                *attrs.cell(rb, spec_cols[s])));
            NodePair key{row.i, row.j};
            row.y = response.count(key) ? 1.0 : 0.0;
            row.lagged = lag.count(key) ? 1.0 : 0.0;
            if (has_lag) row.x.push_back(row.lagged);
            table.rows.push_back(std::move(row));
        }
    }
    if (dropped_pairs > 0) {
        table.deletion_log.push_back("listwise deletion dropped " + std::to_string(dropped_pairs) +
                                     " pairs");
        for (const auto& [column, count] : missing_drops)
            table.deletion_log.push_back("  column '" + column + "' missing for " +
                                         std::to_string(count) + " pairs");
    }

    for (const auto& f : filters) {
        std::size_t before = table.rows.size();
        switch (f.kind) {
            case FilterKind::all:
                break;
            case FilterKind::ego_gender: {
                std::size_t c = attrs.column(f.gender_column);
                double want = f.female ? 1.0 : 0.0;
                std::erase_if(table.rows, [&](const DyadRow& row) {
                    const Cell& cell = attrs.cell(attrs.node_row(row.i), c);
                    return !cell || *cell != want;
                });
                table.deletion_log.push_back("filter ego-gender:" + f.gender_column + ":" +
                                             (f.female ? "female" : "male") + " removed " +
                                             std::to_string(before - table.rows.size()) + " rows");
                break;
            }
            case FilterKind::exclude_nodes_with_period1_friends: {
                std::set<std::string> linked = nodes_with_links(lag);
                std::erase_if(table.rows, [&](const DyadRow& row) {
                    return linked.count(row.i) || linked.count(row.j);
                });
                table.deletion_log.push_back("filter exclude-p1-nodes removed " +
                                             std::to_string(before - table.rows.size()) + " rows");
                break;
            }
            case FilterKind::exclude_period1_friend_pairs: {
                std::erase_if(table.rows, [](const DyadRow& row) { return row.lagged == 1.0; });
                table.deletion_log.push_back("filter exclude-p1-pairs removed " +
                                             std::to_string(before - table.rows.size()) + " rows");
                break;
            }
        }
    }

    if (table.rows.empty())
        throw EmptyResultError("no dyads survived missing-data deletion and filters");
    return table;
}

void write_dyads(const DyadTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << "i,j,y,lagged";
    for (const auto& name : table.regressor_names) out << ',' << name;
    out << '\n';
    for (const auto& row : table.rows) {
        out << row.i << ',' << row.j << ',' << format_roundtrip(row.y) << ','
            << format_roundtrip(row.lagged);
        for (double v : row.x) out << ',' << format_roundtrip(v);
        out << '\n';
    }
    if (!out) throw ParseError("write failed: " + path);
}

DyadTable read_dyads(const std::string& path) {
    DelimFile file = read_delim_file(path);
    if (file.header.size() < 4 || file.header[0] != "i" || file.header[1] != "j" ||
        file.header[2] != "y" || file.header[3] != "lagged")
        throw SchemaError(path + ": expected header starting 'i,j,y,lagged'");

    DyadTable table;
    table.regressor_names.assign(file.header.begin() + 4, file.header.end());
    PairSet seen;
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const std::string where = path + ":" + std::to_string(file.line_numbers[r]);
        const auto& cells = file.rows[r];
        DyadRow row;
        row.i = cells[0];
        row.j = cells[1];
        if (row.i.empty() || row.j.empty()) throw IntegrityError(where + ": empty node id");
        if (!(row.i < row.j)) throw IntegrityError(where + ": rows must satisfy i < j");
        if (!seen.insert({row.i, row.j}).second)
            throw IntegrityError(where + ": duplicate pair " + row.i + "," + row.j);
        row.y = parse_double(cells[2], where + " y");
        row.lagged = parse_double(cells[3], where + " lagged");
        if (row.y != 0.0 && row.y != 1.0) throw SchemaError(where + ": y must be 0 or 1");
        if (row.lagged != 0.0 && row.lagged != 1.0)
            throw SchemaError(where + ": lagged must be 0 or 1");
        row.x.reserve(table.regressor_names.size());
        for (std::size_t c = 4; c < cells.size(); ++c)
            row.x.push_back(parse_double(cells[c], where + " column '" + file.header[c] + "'"));
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw EmptyResultError(path + ": no dyad rows");
    return table;
}

} // namespace dyadbma
