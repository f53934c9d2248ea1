#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dyadbma {

enum class ColumnKind { numeric, binary };

/// Missing cells are represented by an empty optional.
using Cell = std::optional<double>;

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
};

/// Per-node attribute storage, column-major. Node ids are unique and ordered
/// as in the source file; lookups go through the indexes.
class AttributeTable {
public:
    std::vector<std::string> node_ids;
    std::vector<std::string> column_names;
    std::vector<ColumnKind> column_kinds;
    std::vector<std::vector<Cell>> columns; // columns[c][row]

    std::size_t n_nodes() const { return node_ids.size(); }
    std::size_t n_columns() const { return column_names.size(); }

    bool has_node(const std::string& id) const { return node_index_.count(id) != 0; }
    std::size_t node_row(const std::string& id) const;
    /// Column lookup; returns npos when absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_column(const std::string& name) const;
    /// Column lookup that throws SpecError when absent.
    std::size_t column(const std::string& name) const;

    const Cell& cell(std::size_t row, std::size_t col) const { return columns[col][row]; }

    void rebuild_indexes();

private:
    std::unordered_map<std::string, std::size_t> node_index_;
    std::unordered_map<std::string, std::size_t> column_index_;
};

/// Load a delimited nodes file. The first header cell names the id column;
/// every other file column becomes an attribute column. Schema entries pin
/// column kinds (and must exist in the file); unlisted columns default to
/// Numeric. Empty cells load as Missing.
AttributeTable load_attributes(const std::string& path, const std::vector<ColumnSchema>& schema);

struct ColumnSummary {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    std::size_t n = 0; // non-Missing count
    std::optional<double> mean, sd, min, max; // sd undefined when n < 2; others when n == 0
};

/// Per-column statistics over non-Missing cells; sd uses divisor n-1.
std::vector<ColumnSummary> summarize(const AttributeTable& attrs);

} // namespace dyadbma
