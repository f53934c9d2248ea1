#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace dyadbma {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

std::vector<std::string> split_delim_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

DelimFile read_delim_file(const std::string& path, char delim) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    DelimFile out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (out.header.empty()) {
            out.header = split_delim_line(line, delim);
            if (out.header.empty() || (out.header.size() == 1 && out.header[0].empty()))
                throw ParseError(path + ": empty header row");
            continue;
        }
        if (trim(line).empty()) continue; // skip blank lines
        auto cells = split_delim_line(line, delim);
        if (cells.size() != out.header.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(out.header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        out.rows.push_back(std::move(cells));
        out.line_numbers.push_back(lineno);
    }
    if (out.header.empty()) throw ParseError(path + ": file is empty");
    return out;
}

std::string format_sig(double value, int significant) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0; // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value,
                             std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

std::string format_roundtrip(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, const std::string& what) {
    if (cell.empty()) throw ParseError(what + ": empty cell where a number is required");
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(what + ": not a number: '" + cell + "'");
    if (!std::isfinite(v))
        throw ParseError(what + ": non-finite value: '" + cell + "'");
    return v;
}

long long parse_int(const std::string& cell, const std::string& what) {
    if (cell.empty()) throw ParseError(what + ": empty cell where an integer is required");
    long long v = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(what + ": not an integer: '" + cell + "'");
    return v;
}

} // namespace dyadbma
