#pragma once

#include "coconsume/graph.hpp"
#include "coconsume/ingest.hpp"
#include "coconsume/table.hpp"

#include <string_view>

namespace coconsume {

/**
 * Inverse-popularity co-listing weight between two countries: the sum over
 * items listed by both of 1 / (n_k - 1). Returns 0 when nothing is co-listed.
 * Throws AnalysisError when i == j or either code is unknown.
 */
Rational edgeWeight(const BipartiteGraph &graph, std::string_view i, std::string_view j);

/// One-mode projection onto countries. Every country of `graph` is a node, edgeless
/// or not; an edge exists exactly when the pair co-lists at least one item.
WeightedCountryGraph project(const BipartiteGraph &graph);

/// Rows (i, j, weight) sorted lexically, with i < j. The TSV form has no header.
Table edgeListTable(const WeightedCountryGraph &graph);

/// Reads "i<TAB>j<TAB>weight" lines (no header) back into a graph whose nodes
/// are the endpoints that appear. Throws AnalysisError on a malformed line.
WeightedCountryGraph readEdgeList(std::istream &in);

/// JSON export: nodes plus edges carrying both the decimal and the exact weight.
void writeProjectionJson(std::ostream &out, const WeightedCountryGraph &graph);

} // namespace coconsume
