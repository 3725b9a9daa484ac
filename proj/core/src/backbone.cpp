#include "coconsume/backbone.hpp"

#include "coconsume/error.hpp"
#include "coconsume/random.hpp"

#include <algorithm>
#include <cmath>

namespace coconsume {

BackboneMethod parseBackboneMethod(std::string_view name) {
    if (name == "analytic")
        return BackboneMethod::Analytic;
    if (name == "montecarlo")
        return BackboneMethod::MonteCarlo;
    throw IoError("unknown backbone method '" + std::string(name) + "' (expected analytic or montecarlo)");
}

std::string_view toString(BackboneMethod method) {
    return method == BackboneMethod::Analytic ? "analytic" : "montecarlo";
}

double disparityPValue(double share, std::size_t degree) {
    if (degree <= 1)
        return 1.0;
    return std::pow(1.0 - share, static_cast<double>(degree - 1));
}

double monteCarloPValue(double share, std::size_t degree, std::size_t samples, std::uint64_t seed,
                        std::uint64_t stream) {
    if (samples < 1000)
        throw AnalysisError("Monte-Carlo significance needs at least 1000 samples, got " + std::to_string(samples));
    if (degree <= 1)
        return 1.0;
    Rng rng(seed, stream);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        // The edge owns the first segment of the partition, which ends at the
        // smallest break point.
        double firstBreak = 1.0;
        for (std::size_t b = 0; b + 1 < degree; ++b)
            firstBreak = std::min(firstBreak, rng.uniform());
        if (firstBreak >= share)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

double edgeSignificance(const WeightedCountryGraph &graph, std::size_t edge, std::size_t endpoint,
                        const SignificanceOptions &options) {
    if (edge >= graph.edgeCount())
        throw AnalysisError("edge index out of range");
    const auto &e = graph.edges()[edge];
    if (endpoint != e.u && endpoint != e.v)
        throw AnalysisError("node '" + graph.nodes()[endpoint] + "' is not an endpoint of the edge");
    if (!(e.weight > 0.0))
        throw AnalysisError("non-positive weight on edge " + graph.nodes()[e.u] + "-" + graph.nodes()[e.v]);
    const double strength = graph.strength(endpoint);
    if (!(strength > 0.0))
        throw AnalysisError("zero strength at '" + graph.nodes()[endpoint] + "'");
    const double share = e.weight / strength;
    const std::size_t degree = graph.degree(endpoint);

    if (options.method == BackboneMethod::Analytic)
        return disparityPValue(share, degree);

    std::uint64_t stream = fnv1a64(graph.nodes()[e.u]);
    stream = fnv1a64("\t", stream);
    stream = fnv1a64(graph.nodes()[e.v], stream);
    stream = fnv1a64(endpoint == e.u ? "\tu" : "\tv", stream);
    return monteCarloPValue(share, degree, options.samples, options.seed, stream);
}

WeightedCountryGraph BackboneGraph::retainedGraph() const {
    std::vector<bool> keep(significance.size());
    for (std::size_t i = 0; i < significance.size(); ++i)
        keep[i] = significance[i].retained;
    return full.subgraph(keep);
}

std::size_t BackboneGraph::retainedCount() const {
    return static_cast<std::size_t>(
        std::count_if(significance.begin(), significance.end(), [](const auto &s) { return s.retained; }));
}

BackboneGraph extractBackbone(const WeightedCountryGraph &graph, const BackboneOptions &options) {
    if (!(options.significance > 0.0 && options.significance < 1.0))
        throw AnalysisError("significance threshold must lie in (0, 1)");
    if (graph.nodeCount() == 0)
        throw EmptyGraphError("cannot extract the backbone of an empty graph");
    if (options.test.method == BackboneMethod::MonteCarlo && options.test.samples < 1000)
        throw AnalysisError("Monte-Carlo significance needs at least 1000 samples");

    BackboneGraph backbone{graph, {}, options.significance};
    backbone.significance.reserve(graph.edgeCount());
    for (std::size_t i = 0; i < graph.edgeCount(); ++i) {
        const auto &e = graph.edges()[i];
        EdgeSignificance s;
        s.pU = edgeSignificance(graph, i, e.u, options.test);
        s.pV = edgeSignificance(graph, i, e.v, options.test);
        s.retained = std::min(s.pU, s.pV) < options.significance;
        backbone.significance.push_back(s);
    }
    return backbone;
}

Table backboneTable(const BackboneGraph &backbone) {
    Table table{{"i", "j", "weight", "p_i", "p_j", "retained"}, {}};
    const auto &g = backbone.full;
    for (std::size_t i = 0; i < g.edgeCount(); ++i) {
        const auto &e = g.edges()[i];
        const auto &s = backbone.significance[i];
        table.rows.push_back({g.nodes()[e.u], g.nodes()[e.v], e.weight, s.pU, s.pV,
                              static_cast<std::int64_t>(s.retained ? 1 : 0)});
    }
    return table;
}

} // namespace coconsume
