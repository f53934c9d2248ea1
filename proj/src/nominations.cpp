#include "dyadbma/nominations.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <set>

namespace dyadbma {

void validate_nominations(const NominationList& nominations) {
    if (nominations.period != 1 && nominations.period != 2)
        throw SchemaError("nomination period must be 1 or 2, got " +
                          std::to_string(nominations.period));
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : nominations.edges) {
        if (e.first.empty() || e.second.empty())
            throw IntegrityError("nomination with empty node id");
        if (e.first == e.second)
            throw IntegrityError("self-nomination by node " + e.first);
        if (!seen.insert(e).second)
            throw IntegrityError("duplicate nomination " + e.first + " -> " + e.second +
                                 " in period " + std::to_string(nominations.period));
    }
}

PairSet reciprocal_links(const NominationList& nominations) {
    validate_nominations(nominations);
    std::set<std::pair<std::string, std::string>> directed(nominations.edges.begin(),
                                                           nominations.edges.end());
    PairSet out;
    for (const auto& e : directed)
        if (e.first < e.second && directed.count({e.second, e.first}))
            out.insert(e);
    return out;
}

std::pair<NominationList, NominationList> load_nominations(const std::string& path) {
    DelimFile file = read_delim_file(path);
    if (file.header.size() != 3 || file.header[0] != "period" ||
        file.header[1] != "nominator" || file.header[2] != "nominee")
        throw SchemaError(path + ": expected header 'period,nominator,nominee'");

    NominationList p1{1, {}}, p2{2, {}};
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const std::string where = path + ":" + std::to_string(file.line_numbers[r]);
        long long period = parse_int(file.rows[r][0], where + " period");
        if (period == 1)
            p1.edges.emplace_back(file.rows[r][1], file.rows[r][2]);
        else if (period == 2)
            p2.edges.emplace_back(file.rows[r][1], file.rows[r][2]);
        else
            throw SchemaError(where + ": period must be 1 or 2, got " + file.rows[r][0]);
    }
    validate_nominations(p1);
    validate_nominations(p2);
    return {std::move(p1), std::move(p2)};
}

} // namespace dyadbma
