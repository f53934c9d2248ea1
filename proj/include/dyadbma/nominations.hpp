#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dyadbma {

/// Directed friendship nominations for one period.
struct NominationList {
    int period = 0; // 1 or 2
    std::vector<std::pair<std::string, std::string>> edges; // (nominator, nominee), unique
};

/// Unordered node pair, stored with first < second.
using NodePair = std::pair<std::string, std::string>;
using PairSet = std::set<NodePair>;

inline NodePair make_pair_sorted(const std::string& a, const std::string& b) {
    return a < b ? NodePair{a, b} : NodePair{b, a};
}

/// A link exists only when both directions were nominated.
PairSet reciprocal_links(const NominationList& nominations);

/// Throws IntegrityError on self-nominations or duplicate ordered pairs,
/// SchemaError on a period outside {1,2}.
void validate_nominations(const NominationList& nominations);

/// Load a nominations file with columns (period, nominator, nominee) covering
/// both periods; returns the validated per-period lists.
std::pair<NominationList, NominationList> load_nominations(const std::string& path);

} // namespace dyadbma
