#pragma once

// Independent reference implementations used by the unit and acceptance tests.
// None of these share code paths with the library routines they check.

#include "coconsume/graph.hpp"
#include "coconsume/ingest.hpp"
#include "coconsume/random.hpp"
#include "coconsume/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using coconsume::Rational;

/// Raw incidence: (country, item) pairs.
using Incidence = std::set<std::pair<std::string, std::string>>;

inline Incidence incidenceOf(const std::vector<coconsume::ListingRecord> &records) {
    Incidence pairs;
    for (const auto &r : records)
        pairs.emplace(r.country.str(), r.itemId);
    return pairs;
}

inline std::vector<coconsume::ListingRecord> recordsFrom(const Incidence &pairs) {
    std::vector<coconsume::ListingRecord> records;
    for (const auto &[c, item] : pairs)
        records.push_back({{2016, 1, 1}, coconsume::CountryCode(c), item, std::nullopt});
    return records;
}

/// Random incidence over `countries` x `items` with the given density.
inline Incidence randomIncidence(coconsume::Rng &rng, std::size_t countries, std::size_t items, double density) {
    Incidence pairs;
    for (std::size_t c = 0; c < countries; ++c)
        for (std::size_t k = 0; k < items; ++k)
            if (rng.uniform() < density) {
                std::string code(3, 'A');
                code[1] = static_cast<char>('A' + c / 26);
                code[2] = static_cast<char>('A' + c % 26);
                pairs.emplace(code, "item" + std::to_string(k));
            }
    return pairs;
}

/// Double loop over every country pair and every item.
inline std::map<std::pair<std::string, std::string>, Rational> naiveProjection(const Incidence &pairs) {
    std::set<std::string> countries, items;
    for (const auto &[c, k] : pairs) {
        countries.insert(c);
        items.insert(k);
    }
    std::map<std::pair<std::string, std::string>, Rational> weights;
    for (const auto &a : countries)
        for (const auto &b : countries) {
            if (!(a < b))
                continue;
            Rational w = 0;
            for (const auto &k : items) {
                if (!pairs.contains({a, k}) || !pairs.contains({b, k}))
                    continue;
                long long listers = 0;
                for (const auto &c : countries)
                    listers += pairs.contains({c, k}) ? 1 : 0;
                w += Rational(1, listers - 1);
            }
            if (w > 0)
                weights[{a, b}] = w;
        }
    return weights;
}

inline bool sameCost(double a, double b) {
    return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

/// All-pairs shortest-path facts from exhaustive simple-path enumeration.
struct PathEnumeration {
    std::size_t n = 0;
    std::vector<std::vector<double>> distance;
    std::vector<std::vector<double>> count;
    /// through[s][t][v]: minimum-cost s-t paths with v as an interior node.
    std::vector<std::vector<std::vector<double>>> through;

    std::vector<double> closeness() const {
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && std::isfinite(distance[i][j]))
                    total += distance[i][j];
            c[i] = total > 0.0 ? 1.0 / total : 0.0;
        }
        return c;
    }

    std::vector<double> betweenness() const {
        std::vector<double> b(n, 0.0);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t)
                if (count[s][t] > 0)
                    for (std::size_t v = 0; v < n; ++v)
                        b[v] += through[s][t][v] / count[s][t];
        return b;
    }
};

/// `cost[i][j]` is the traversal cost of edge {i,j}, or +inf when absent.
inline PathEnumeration enumeratePaths(const std::vector<std::vector<double>> &cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    PathEnumeration e;
    e.n = n;
    e.distance.assign(n, std::vector<double>(n, inf));
    e.count.assign(n, std::vector<double>(n, 0.0));
    e.through.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));

    for (std::size_t s = 0; s < n; ++s) {
        // Collect (target, cost, interior nodes) of every simple path from s.
        std::vector<std::tuple<std::size_t, double, std::vector<std::size_t>>> found;
        std::vector<std::size_t> path{s};
        std::vector<bool> onPath(n, false);
        onPath[s] = true;
        std::function<void(std::size_t, double)> walk = [&](std::size_t u, double acc) {
            for (std::size_t v = 0; v < n; ++v) {
                if (onPath[v] || !std::isfinite(cost[u][v]))
                    continue;
                const double c = acc + cost[u][v];
                found.emplace_back(v, c, std::vector<std::size_t>(path.begin() + 1, path.end()));
                onPath[v] = true;
                path.push_back(v);
                walk(v, c);
                path.pop_back();
                onPath[v] = false;
            }
        };
        walk(s, 0.0);
        e.distance[s][s] = 0.0;
        for (const auto &[t, c, interior] : found)
            e.distance[s][t] = std::min(e.distance[s][t], c);
        for (const auto &[t, c, interior] : found) {
            if (!sameCost(c, e.distance[s][t]))
                continue;
            e.count[s][t] += 1.0;
            for (std::size_t v : interior)
                e.through[s][t][v] += 1.0;
        }
    }
    return e;
}

inline std::vector<std::vector<double>> costMatrix(const coconsume::WeightedCountryGraph &g, double alpha) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(g.nodeCount(), std::vector<double>(g.nodeCount(), inf));
    for (const auto &e : g.edges()) {
        const double c = std::pow(e.weight, -alpha);
        cost[e.u][e.v] = cost[e.v][e.u] = c;
    }
    return cost;
}

/// Hop distances and shortest-path counts by plain BFS.
struct Bfs {
    std::vector<std::vector<long long>> hops;   ///< -1 when unreachable
    std::vector<std::vector<long long>> paths;
};

inline Bfs allPairsBfs(const coconsume::WeightedCountryGraph &g) {
    const std::size_t n = g.nodeCount();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto &e : g.edges()) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    Bfs out;
    out.hops.assign(n, std::vector<long long>(n, -1));
    out.paths.assign(n, std::vector<long long>(n, 0));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> frontier{s};
        out.hops[s][s] = 0;
        out.paths[s][s] = 1;
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (std::size_t u : frontier)
                for (std::size_t v : adj[u]) {
                    if (out.hops[s][v] == -1) {
                        out.hops[s][v] = out.hops[s][u] + 1;
                        next.push_back(v);
                    }
                    if (out.hops[s][v] == out.hops[s][u] + 1)
                        out.paths[s][v] += out.paths[s][u];
                }
            frontier = std::move(next);
        }
    }
    return out;
}

/// Pair-dependency betweenness from BFS counts: sigma_sv * sigma_vt / sigma_st.
inline std::vector<double> bfsBetweenness(const Bfs &bfs) {
    const std::size_t n = bfs.hops.size();
    std::vector<double> b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            if (bfs.hops[s][t] <= 0)
                continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (v == s || v == t || bfs.hops[s][v] < 0 || bfs.hops[v][t] < 0)
                    continue;
                if (bfs.hops[s][v] + bfs.hops[v][t] == bfs.hops[s][t])
                    b[v] += static_cast<double>(bfs.paths[s][v] * bfs.paths[v][t]) /
                            static_cast<double>(bfs.paths[s][t]);
            }
        }
    return b;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline coconsume::WeightedCountryGraph randomConnectedGraph(coconsume::Rng &rng, std::size_t n, double extraDensity,
                                                            double minWeight = 0.1, double maxWeight = 10.0) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(coconsume::syntheticCountryCode(i));
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t v = 1; v < n; ++v) {
        const auto u = static_cast<std::size_t>(rng.below(v));
        pairs.emplace(u, v);
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rng.uniform() < extraDensity)
                pairs.emplace(u, v);
    std::vector<coconsume::WeightedEdge> edges;
    for (const auto &[u, v] : pairs)
        edges.push_back({u, v, minWeight + (maxWeight - minWeight) * rng.uniform(), std::nullopt});
    return coconsume::WeightedCountryGraph(names, edges);
}

/// Composite openness straight from the definition: neighbour sets from the raw
/// incidence, then an ordered-pair triple loop halved.
inline std::map<std::string, double> naiveOpenness(const Incidence &pairs) {
    std::map<std::string, std::set<std::string>> itemsOf;
    std::set<std::string> countries;
    for (const auto &[c, k] : pairs) {
        itemsOf[c].insert(k);
        countries.insert(c);
    }
    auto shared = [&](const std::string &a, const std::string &b) {
        std::size_t n = 0;
        for (const auto &k : itemsOf[a])
            n += itemsOf[b].contains(k) ? 1 : 0;
        return n;
    };
    std::map<std::string, std::set<std::string>> neighbors;
    for (const auto &a : countries)
        for (const auto &b : countries)
            if (a != b && shared(a, b) > 0)
                neighbors[a].insert(b);
    auto jaccard = [&](const std::string &a, const std::string &b) {
        const auto &na = neighbors[a];
        const auto &nb = neighbors[b];
        std::set<std::string> uni(na.begin(), na.end());
        uni.insert(nb.begin(), nb.end());
        std::size_t inter = 0;
        for (const auto &x : na)
            inter += nb.contains(x) ? 1 : 0;
        return 1.0 - static_cast<double>(inter) / static_cast<double>(uni.size());
    };
    std::map<std::string, double> score;
    for (const auto &c : countries) {
        double total = 0.0;
        for (const auto &i : neighbors[c])
            total += static_cast<double>(shared(c, i));
        double s = 0.0;
        for (const auto &i : neighbors[c])
            for (const auto &j : neighbors[c])
                if (i != j)
                    s += static_cast<double>(shared(c, i)) / total * static_cast<double>(shared(c, j)) / total *
                         jaccard(i, j);
        score[c] = s / 2.0;
    }
    return score;
}

/// Modularity from the pairwise definition (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double pairwiseModularity(const coconsume::WeightedCountryGraph &g, const std::vector<std::size_t> &labels) {
    const std::size_t n = g.nodeCount();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto &e : g.edges())
        a[e.u][e.v] = a[e.v][e.u] = e.weight;
    std::vector<double> k(n, 0.0);
    double twoM = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
            twoM += a[i][j];
        }
    if (twoM == 0.0)
        return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (labels[i] == labels[j])
                q += a[i][j] - k[i] * k[j] / twoM;
    return q / twoM;
}

/// Adjusted Rand index between two labelings.
inline double adjustedRand(const std::vector<std::size_t> &x, const std::vector<std::size_t> &y) {
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> rows, cols;
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[{x[i], y[i]}] += 1;
        rows[x[i]] += 1;
        cols[y[i]] += 1;
    }
    auto choose2 = [](double v) { return v * (v - 1) / 2; };
    double index = 0, a = 0, b = 0;
    for (const auto &[k, v] : joint)
        index += choose2(v);
    for (const auto &[k, v] : rows)
        a += choose2(v);
    for (const auto &[k, v] : cols)
        b += choose2(v);
    const double expected = a * b / choose2(static_cast<double>(x.size()));
    const double maximum = (a + b) / 2;
    if (maximum == expected)
        return 1.0;
    return (index - expected) / (maximum - expected);
}

/// Least squares by normal equations solved with Gauss-Jordan in long double.
struct NormalEquationsFit {
    std::vector<long double> beta;
    std::vector<long double> fitted;
    long double rSquared = 0; ///< centered
};

inline NormalEquationsFit normalEquations(const std::vector<double> &y, const std::vector<std::vector<double>> &columns,
                                          bool intercept) {
    const std::size_t n = y.size();
    std::vector<std::vector<long double>> x;
    if (intercept)
        x.emplace_back(n, 1.0L);
    for (const auto &c : columns)
        x.emplace_back(c.begin(), c.end());
    const std::size_t k = x.size();
    std::vector<std::vector<long double>> m(k, std::vector<long double>(k + 1, 0.0L));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < n; ++i)
                m[a][b] += x[a][i] * x[b][i];
        for (std::size_t i = 0; i < n; ++i)
            m[a][k] += x[a][i] * y[i];
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col]))
                pivot = r;
        std::swap(m[col], m[pivot]);
        const long double d = m[col][col];
        for (auto &v : m[col])
            v /= d;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col)
                continue;
            const long double f = m[r][col];
            for (std::size_t c = col; c <= k; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    NormalEquationsFit fit;
    for (std::size_t a = 0; a < k; ++a)
        fit.beta.push_back(m[a][k]);
    long double mean = 0;
    for (double v : y)
        mean += v;
    mean /= static_cast<long double>(n);
    long double sse = 0, sst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        long double f = 0;
        for (std::size_t a = 0; a < k; ++a)
            f += fit.beta[a] * x[a][i];
        fit.fitted.push_back(f);
        sse += (y[i] - f) * (y[i] - f);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    fit.rSquared = 1.0L - sse / sst;
    return fit;
}

} // namespace oracle
