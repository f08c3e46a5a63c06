#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "svmnet/graph.hpp"

namespace svmnet::metrics {

struct NonpositiveWeight : DataError {
    NonpositiveWeight() : DataError("edge weights must be positive for path metrics") {}
};

struct NoConvergence : NumericError {
    explicit NoConvergence(long iters)
        : NumericError("power iteration did not converge in " + std::to_string(iters) +
                       " iterations") {}
};

// Per-node centrality vector. Weights are read as distances for closeness
// and betweenness and as connection strengths for weighted degree and
// eigenvector centrality.
struct NodeMetrics {
    std::vector<double> clustering;
    std::vector<int> degree;
    std::vector<double> weighted_degree;
    std::vector<double> closeness;
    std::vector<double> betweenness;
    std::vector<double> eigenvector;

    static const std::vector<std::string>& column_names() {
        static const std::vector<std::string> names = {"clustering_coef", "degree",
                                                       "weighted_degree", "closeness",
                                                       "betweenness",     "eigenvector"};
        return names;
    }

    std::vector<double> column(const std::string& name) const {
        if (name == "clustering_coef") return clustering;
        if (name == "degree") return std::vector<double>(degree.begin(), degree.end());
        if (name == "weighted_degree") return weighted_degree;
        if (name == "closeness") return closeness;
        if (name == "betweenness") return betweenness;
        if (name == "eigenvector") return eigenvector;
        throw DataError("unknown metric column: " + name);
    }
};

namespace detail {

struct ShortestPaths {
    std::vector<double> dist;            // inf when unreachable
    std::vector<double> sigma;           // shortest-path counts
    std::vector<std::vector<int>> pred;  // predecessors on shortest paths
    std::vector<int> settle_order;
};

inline void check_weights(const Graph& g) {
    if (!g.weighted()) return;
    for (const auto& [u, v] : g.edges())
        if (!(g.weight(u, v) > 0.0)) throw NonpositiveWeight();
}

// Dijkstra with shortest-path counting (lazy-deletion binary heap).
inline ShortestPaths dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj, int s) {
    const double inf = std::numeric_limits<double>::infinity();
    size_t n = adj.size();
    ShortestPaths sp;
    sp.dist.assign(n, inf);
    sp.sigma.assign(n, 0.0);
    sp.pred.assign(n, {});
    sp.dist[s] = 0.0;
    sp.sigma[s] = 1.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, s});
    std::vector<bool> settled(n, false);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u]) continue;
        settled[u] = true;
        sp.settle_order.push_back(u);
        for (const auto& [v, w] : adj[u]) {
            double nd = d + w;
            if (nd < sp.dist[v]) {
                sp.dist[v] = nd;
                sp.sigma[v] = sp.sigma[u];
                sp.pred[v].assign(1, u);
                heap.push({nd, v});
            } else if (nd == sp.dist[v]) {
                sp.sigma[v] += sp.sigma[u];
                sp.pred[v].push_back(u);
            }
        }
    }
    return sp;
}

}  // namespace detail

// Fraction of a node's neighbor pairs that are adjacent; 0 for degree < 2.
inline std::vector<double> local_clustering(const Graph& g) {
    auto adj = g.adjacency();
    int n = g.node_count();
    std::vector<double> out(n, 0.0);
    for (int v = 0; v < n; ++v) {
        size_t d = adj[v].size();
        if (d < 2) continue;
        long links = 0;
        for (size_t i = 0; i < d; ++i)
            for (size_t j = i + 1; j < d; ++j)
                if (g.has_edge(adj[v][i].first, adj[v][j].first)) ++links;
        out[v] = static_cast<double>(links) / (0.5 * static_cast<double>(d) * static_cast<double>(d - 1));
    }
    return out;
}

struct DegreeMetrics {
    std::vector<int> degree;
    std::vector<double> weighted_degree;
};

inline DegreeMetrics degree_metrics(const Graph& g) {
    DegreeMetrics dm;
    dm.degree = g.degrees();
    dm.weighted_degree.assign(g.node_count(), 0.0);
    for (const auto& [u, v] : g.edges()) {
        double w = g.weight(u, v);
        dm.weighted_degree[u] += w;
        dm.weighted_degree[v] += w;
    }
    return dm;
}

// Reachable-fraction-scaled inverse average distance:
// (r/(n-1)) * (r/S) for r reachable others at total distance S; 0 if isolated.
inline std::vector<double> closeness(const Graph& g) {
    detail::check_weights(g);
    auto adj = g.adjacency();
    int n = g.node_count();
    std::vector<double> out(n, 0.0);
    for (int s = 0; s < n; ++s) {
        auto sp = detail::dijkstra(adj, s);
        double total = 0.0;
        int reach = 0;
        for (int v = 0; v < n; ++v) {
            if (v == s || std::isinf(sp.dist[v])) continue;
            total += sp.dist[v];
            ++reach;
        }
        if (reach > 0)
            out[s] = (static_cast<double>(reach) / (n - 1)) * (static_cast<double>(reach) / total);
    }
    return out;
}

// Brandes accumulation over shortest-path DAGs; unordered pairs, unnormalized.
inline std::vector<double> betweenness(const Graph& g) {
    detail::check_weights(g);
    auto adj = g.adjacency();
    int n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<double> delta(n);
    for (int s = 0; s < n; ++s) {
        auto sp = detail::dijkstra(adj, s);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = sp.settle_order.rbegin(); it != sp.settle_order.rend(); ++it) {
            int w = *it;
            for (int v : sp.pred[w]) delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    for (auto& b : bc) b *= 0.5;  // each unordered pair was counted from both ends
    return bc;
}

// Dominant eigenvector of the weighted adjacency matrix, rescaled to max 1.
// The iteration applies A + I; the unit shift leaves eigenvectors unchanged
// and makes the dominant eigenvalue strictly largest in magnitude on
// bipartite graphs, where iterating A alone oscillates.
inline std::vector<double> eigenvector(const Graph& g, double tol = 1e-10, long max_iter = 10000) {
    int n = g.node_count();
    if (n == 0) throw DataError("empty graph");
    auto adj = g.adjacency();
    std::vector<double> x(n, 1.0 / n), next(n);
    for (long it = 0; it < max_iter; ++it) {
        for (int v = 0; v < n; ++v) {
            double acc = x[v];
            for (const auto& [u, w] : adj[v]) acc += w * x[u];
            next[v] = acc;
        }
        double mx = 0.0;
        for (double v : next) mx = std::max(mx, std::abs(v));
        if (mx == 0.0) return std::vector<double>(n, 1.0);  // zero matrix: all nodes equal
        double diff = 0.0;
        for (int v = 0; v < n; ++v) {
            next[v] /= mx;
            diff = std::max(diff, std::abs(next[v] - x[v]));
            x[v] = next[v];
        }
        if (diff < tol) return x;
    }
    throw NoConvergence(max_iter);
}

struct GlobalDiagnostics {
    double avg_path_length = 0.0;  // mean over reachable unordered pairs
    double global_clustering = 0.0;  // mean of local clustering
};

inline GlobalDiagnostics global_diagnostics(const Graph& g) {
    detail::check_weights(g);
    auto adj = g.adjacency();
    int n = g.node_count();
    double total = 0.0;
    long pairs = 0;
    for (int s = 0; s < n; ++s) {
        auto sp = detail::dijkstra(adj, s);
        for (int v = s + 1; v < n; ++v) {
            if (std::isinf(sp.dist[v])) continue;
            total += sp.dist[v];
            ++pairs;
        }
    }
    GlobalDiagnostics d;
    d.avg_path_length = pairs > 0 ? total / static_cast<double>(pairs) : 0.0;
    auto lc = local_clustering(g);
    double sum = 0.0;
    for (double c : lc) sum += c;
    d.global_clustering = n > 0 ? sum / n : 0.0;
    return d;
}

inline NodeMetrics compute_all(const Graph& g) {
    NodeMetrics m;
    m.clustering = local_clustering(g);
    auto dm = degree_metrics(g);
    m.degree = std::move(dm.degree);
    m.weighted_degree = std::move(dm.weighted_degree);
    m.closeness = closeness(g);
    m.betweenness = betweenness(g);
    m.eigenvector = eigenvector(g);
    return m;
}

inline std::string write_metrics_csv(const NodeMetrics& m) {
    std::string out = "node_id,clustering_coef,degree,weighted_degree,closeness,betweenness,eigenvector\n";
    for (size_t v = 0; v < m.clustering.size(); ++v) {
        out += std::to_string(v);
        out += ',' + csv::format_double(m.clustering[v]);
        out += ',' + std::to_string(m.degree[v]);
        out += ',' + csv::format_double(m.weighted_degree[v]);
        out += ',' + csv::format_double(m.closeness[v]);
        out += ',' + csv::format_double(m.betweenness[v]);
        out += ',' + csv::format_double(m.eigenvector[v]);
        out += '\n';
    }
    return out;
}

inline NodeMetrics read_metrics_csv(const std::string& text) {
    auto lines = csv::split_lines(text);
    if (lines.empty() ||
        lines[0] != "node_id,clustering_coef,degree,weighted_degree,closeness,betweenness,eigenvector")
        throw DataError("bad metrics csv header");
    NodeMetrics m;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto f = csv::split_line(lines[i]);
        if (f.size() != 7) throw DataError("bad metrics csv line: " + lines[i]);
        if (std::stoul(f[0]) != i - 1) throw DataError("metrics csv rows must be in node order");
        double vals[6];
        for (int k = 0; k < 6; ++k)
            if (!csv::parse_double(f[k + 1], vals[k])) throw DataError("bad metrics value: " + f[k + 1]);
        m.clustering.push_back(vals[0]);
        m.degree.push_back(static_cast<int>(vals[1]));
        m.weighted_degree.push_back(vals[2]);
        m.closeness.push_back(vals[3]);
        m.betweenness.push_back(vals[4]);
        m.eigenvector.push_back(vals[5]);
    }
    return m;
}

}  // namespace svmnet::metrics
