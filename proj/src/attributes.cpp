#include "dyadbma/attributes.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dyadbma {

std::size_t AttributeTable::node_row(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw IntegrityError("unknown node id: " + id);
    return it->second;
}

std::size_t AttributeTable::find_column(const std::string& name) const {
    auto it = column_index_.find(name);
    return it == column_index_.end() ? npos : it->second;
}

std::size_t AttributeTable::column(const std::string& name) const {
    std::size_t c = find_column(name);
    if (c == npos) throw SpecError("unknown attribute column: " + name);
    return c;
}

void AttributeTable::rebuild_indexes() {
    node_index_.clear();
    column_index_.clear();
    for (std::size_t r = 0; r < node_ids.size(); ++r) node_index_.emplace(node_ids[r], r);
    for (std::size_t c = 0; c < column_names.size(); ++c) column_index_.emplace(column_names[c], c);
}

AttributeTable load_attributes(const std::string& path, const std::vector<ColumnSchema>& schema) {
    DelimFile file = read_delim_file(path);

    AttributeTable table;
    const std::size_t ncols = file.header.size();
    if (ncols < 1) throw ParseError(path + ": header must name at least the id column");

    table.column_names.assign(file.header.begin() + 1, file.header.end());
    table.column_kinds.assign(table.column_names.size(), ColumnKind::numeric);
    for (const auto& entry : schema) {
        auto it = std::find(table.column_names.begin(), table.column_names.end(), entry.name);
        if (it == table.column_names.end())
            throw SchemaError(path + ": schema column '" + entry.name + "' not present in file");
        table.column_kinds[static_cast<std::size_t>(it - table.column_names.begin())] = entry.kind;
    }
    table.columns.assign(table.column_names.size(), {});

    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const auto& row = file.rows[r];
        const std::string where = path + ":" + std::to_string(file.line_numbers[r]);
        const std::string& id = row[0];
        if (id.empty()) throw IntegrityError(where + ": empty node id");
        table.node_ids.push_back(id);
        for (std::size_t c = 0; c + 1 < ncols; ++c) {
            const std::string& text = row[c + 1];
            if (text.empty()) {
                table.columns[c].push_back(std::nullopt);
                continue;
            }
            double v = parse_double(text, where + " column '" + table.column_names[c] + "'");
            if (table.column_kinds[c] == ColumnKind::binary && v != 0.0 && v != 1.0)
                throw SchemaError(where + ": column '" + table.column_names[c] +
                                  "' is Binary but holds '" + text + "'");
            table.columns[c].push_back(v);
        }
    }

    table.rebuild_indexes();
    for (std::size_t r = 0; r < table.node_ids.size(); ++r)
        if (table.node_row(table.node_ids[r]) != r)
            throw IntegrityError(path + ": duplicate node id: " + table.node_ids[r]);
    return table;
}

std::vector<ColumnSummary> summarize(const AttributeTable& attrs) {
    if (attrs.n_nodes() == 0) throw EmptyResultError("cannot summarize an empty attribute table");
    std::vector<ColumnSummary> out;
    out.reserve(attrs.n_columns());
    for (std::size_t c = 0; c < attrs.n_columns(); ++c) {
        ColumnSummary s;
        s.name = attrs.column_names[c];
        s.kind = attrs.column_kinds[c];
        long double sum = 0.0L;
        for (const Cell& cell : attrs.columns[c]) {
            if (!cell) continue;
            double v = *cell;
            ++s.n;
            sum += v;
            if (!s.min || v < *s.min) s.min = v;
            if (!s.max || v > *s.max) s.max = v;
        }
        if (s.n > 0) {
            double mean = static_cast<double>(sum / static_cast<long double>(s.n));
            s.mean = mean;
            if (s.n > 1) {
                long double ss = 0.0L;
                for (const Cell& cell : attrs.columns[c]) {
                    if (!cell) continue;
                    long double d = static_cast<long double>(*cell) - mean;
                    ss += d * d;
                }
                s.sd = std::sqrt(static_cast<double>(ss / static_cast<long double>(s.n - 1)));
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace dyadbma
