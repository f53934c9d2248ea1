#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dyadbma {

// Delimited-text conventions shared by every file format in the toolkit:
// comma-separated, UTF-8, header row, no quoting, "" = missing value.

struct DelimFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // each row has header.size() cells
    std::vector<std::size_t> line_numbers;      // 1-based source line per row
};

/// Split one line on `delim`, trimming surrounding whitespace from each cell.
std::vector<std::string> split_delim_line(const std::string& line, char delim = ',');

/// Read a whole delimited file. Throws ParseError on missing file, empty file,
/// or any row whose arity differs from the header.
DelimFile read_delim_file(const std::string& path, char delim = ',');

/// Format with 6 significant digits (report convention; stable across runs).
std::string format_sig(double value, int significant = 6);

/// Shortest decimal form that round-trips to the same double (data-file convention).
std::string format_roundtrip(double value);

/// Strict double parse of a whole cell; `what` names the cell in error messages.
double parse_double(const std::string& cell, const std::string& what);

/// Strict integer parse of a whole cell.
long long parse_int(const std::string& cell, const std::string& what);

} // namespace dyadbma
