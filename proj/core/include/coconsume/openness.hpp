#pragma once

#include "coconsume/ingest.hpp"
#include "coconsume/table.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coconsume {

/// Composite diversity of one country's co-listing neighbourhood.
struct OpennessScore {
    std::string country;
    std::size_t breadth = 0;                     ///< |N(C)|
    double score = 0.0;
    std::map<std::string, double> neighborWeights; ///< w(C, i), sums to 1 when breadth >= 1
};

/// Countries sharing at least one item with `country`, mapped to the number of
/// shared items. The country itself is never included.
std::map<std::string, std::size_t> neighborOverlaps(const BipartiteGraph &graph, std::string_view country);

/// 1 - |N(i) & N(j)| / |N(i) | N(j)| over co-listing neighbour sets. Throws
/// AnalysisError when both sets are empty.
double jaccardDissimilarity(const BipartiteGraph &graph, std::string_view i, std::string_view j);

/// Sum over unordered pairs {i, j} of N(C) of w(C,i) w(C,j) d(i,j), with w the
/// overlap counts normalized to sum to one. Lies in [0, 0.5].
OpennessScore compositeOpenness(const BipartiteGraph &graph, std::string_view country);

/// Scores for every country, in country order. Neighbour sets are built once.
std::vector<OpennessScore> opennessScores(const BipartiteGraph &graph);

/// Columns country, breadth, openness_score.
Table opennessTable(const std::vector<OpennessScore> &scores);

} // namespace coconsume
