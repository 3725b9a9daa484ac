#include "coconsume/projection.hpp"

#include "coconsume/error.hpp"

#include <json.hpp>

#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <ostream>

namespace coconsume {

Rational edgeWeight(const BipartiteGraph &graph, std::string_view i, std::string_view j) {
    const auto a = graph.requireCountry(i);
    const auto b = graph.requireCountry(j);
    if (a == b)
        throw AnalysisError("edge weight needs two distinct countries, got '" + std::string(i) + "' twice");

    Rational total = 0;
    const auto &itemsA = graph.itemsOf(a);
    const auto &itemsB = graph.itemsOf(b);
    // Both lists are sorted: walk them in step.
    auto p = itemsA.begin();
    auto q = itemsB.begin();
    while (p != itemsA.end() && q != itemsB.end()) {
        if (*p < *q) {
            ++p;
        } else if (*q < *p) {
            ++q;
        } else {
            total += Rational(1, static_cast<long long>(graph.outDegree(*p) - 1));
            ++p;
            ++q;
        }
    }
    return total;
}

WeightedCountryGraph project(const BipartiteGraph &graph) {
    std::map<std::pair<std::size_t, std::size_t>, Rational> weights;
    for (std::size_t k = 0; k < graph.itemCount(); ++k) {
        const auto &listing = graph.countriesOf(k);
        if (listing.size() < 2)
            continue;
        const Rational share(1, static_cast<long long>(listing.size() - 1));
        for (std::size_t x = 0; x < listing.size(); ++x)
            for (std::size_t y = x + 1; y < listing.size(); ++y)
                weights[{listing[x], listing[y]}] += share;
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(weights.size());
    for (auto &[pair, w] : weights)
        edges.push_back({pair.first, pair.second, static_cast<double>(w), std::move(w)});
    return WeightedCountryGraph(graph.countries(), std::move(edges));
}

Table edgeListTable(const WeightedCountryGraph &graph) {
    Table table{{"i", "j", "weight"}, {}};
    table.rows.reserve(graph.edgeCount());
    // Nodes are sorted and u < v, so the stored edge order is already lexical.
    for (const auto &e : graph.edges())
        table.rows.push_back({graph.nodes()[e.u], graph.nodes()[e.v], e.weight});
    return table;
}

WeightedCountryGraph readEdgeList(std::istream &in) {
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::set<std::string> names;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string a, b, w;
        if (!std::getline(fields, a, '\t') || !std::getline(fields, b, '\t') || !std::getline(fields, w, '\t'))
            throw AnalysisError("edge list line " + std::to_string(lineNo) + ": expected i, j, weight");
        double weight = 0.0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
        if (ec != std::errc() || ptr != w.data() + w.size())
            throw AnalysisError("edge list line " + std::to_string(lineNo) + ": bad weight '" + w + "'");
        names.insert(a);
        names.insert(b);
        edges.emplace_back(std::move(a), std::move(b), weight);
    }
    return WeightedCountryGraph::fromNamedEdges({names.begin(), names.end()}, edges);
}

void writeProjectionJson(std::ostream &out, const WeightedCountryGraph &graph) {
    nlohmann::ordered_json doc;
    doc["nodes"] = graph.nodes();
    auto edges = nlohmann::ordered_json::array();
    for (const auto &e : graph.edges()) {
        nlohmann::ordered_json edge;
        edge["i"] = graph.nodes()[e.u];
        edge["j"] = graph.nodes()[e.v];
        edge["weight"] = e.weight;
        if (e.exact)
            edge["exact"] = e.exact->str();
        edges.push_back(std::move(edge));
    }
    doc["edges"] = std::move(edges);
    out << doc.dump(2) << '\n';
}

} // namespace coconsume
