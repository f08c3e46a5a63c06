#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "svmnet/csv.hpp"
#include "svmnet/errors.hpp"

namespace svmnet::net {

struct SelfLoop : DataError {
    explicit SelfLoop(int u) : DataError("self loop at node " + std::to_string(u)) {}
};

struct DuplicateEdge : DataError {
    DuplicateEdge(int u, int v)
        : DataError("duplicate edge " + std::to_string(u) + "," + std::to_string(v)) {}
};

struct MalformedLine : DataError {
    explicit MalformedLine(const std::string& line) : DataError("malformed edge line: " + line) {}
};

using Edge = std::pair<int, int>;  // u < v

inline Edge make_edge(int u, int v) {
    if (u == v) throw SelfLoop(u);
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Undirected simple graph over node ids 0..n-1, optionally with positive
// edge weights. Edges are kept in canonical (u < v) sorted order.
class Graph {
public:
    explicit Graph(int n) : n_(n) {
        if (n < 0) throw DataError("negative node count");
    }

    int node_count() const { return n_; }
    size_t edge_count() const { return edges_.size(); }
    bool weighted() const { return !weights_.empty(); }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        return edges_.count(make_edge(u, v)) > 0;
    }

    void add_edge(int u, int v) {
        check_node(u);
        check_node(v);
        Edge e = make_edge(u, v);
        if (!edges_.insert(e).second) throw DuplicateEdge(e.first, e.second);
    }

    void remove_edge(int u, int v) {
        Edge e = make_edge(u, v);
        edges_.erase(e);
        weights_.erase(e);
    }

    void set_weight(int u, int v, double w) {
        Edge e = make_edge(u, v);
        if (!edges_.count(e)) throw DataError("weight for absent edge");
        weights_[e] = w;
    }

    // Unit weight when the graph carries no weights.
    double weight(int u, int v) const {
        if (weights_.empty()) return 1.0;
        return weights_.at(make_edge(u, v));
    }

    const std::set<Edge>& edges() const { return edges_; }

    std::vector<int> degrees() const {
        std::vector<int> deg(n_, 0);
        for (const auto& [u, v] : edges_) {
            ++deg[u];
            ++deg[v];
        }
        return deg;
    }

    // Adjacency with per-edge weight (unit if unweighted); neighbor lists
    // sorted by node id.
    std::vector<std::vector<std::pair<int, double>>> adjacency() const {
        std::vector<std::vector<std::pair<int, double>>> adj(n_);
        for (const auto& e : edges_) {
            double w = weights_.empty() ? 1.0 : weights_.at(e);
            adj[e.first].emplace_back(e.second, w);
            adj[e.second].emplace_back(e.first, w);
        }
        return adj;
    }

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && edges_ == other.edges_ && weights_ == other.weights_;
    }

private:
    void check_node(int u) const {
        if (u < 0 || u >= n_) throw DataError("node id out of range: " + std::to_string(u));
    }

    int n_;
    std::set<Edge> edges_;
    std::map<Edge, double> weights_;
};

// Header exactly ID_1,ID_2 (or ID_1,ID_2,WEIGHT), one edge per line in
// canonical u < v order, lines sorted.
inline std::string export_edges(const Graph& g) {
    std::string out = g.weighted() ? "ID_1,ID_2,WEIGHT\n" : "ID_1,ID_2\n";
    for (const auto& [u, v] : g.edges()) {
        out += std::to_string(u) + "," + std::to_string(v);
        if (g.weighted()) out += "," + csv::format_double(g.weight(u, v));
        out += '\n';
    }
    return out;
}

// Node count is inferred as max id + 1 unless n_hint (>= max id + 1) is given.
inline Graph import_edges(const std::string& csv_text, int n_hint = -1) {
    auto lines = csv::split_lines(csv_text);
    if (lines.empty()) throw MalformedLine("(empty file)");
    bool weighted;
    if (lines[0] == "ID_1,ID_2") weighted = false;
    else if (lines[0] == "ID_1,ID_2,WEIGHT") weighted = true;
    else throw MalformedLine(lines[0]);

    struct Parsed {
        int u, v;
        double w;
    };
    std::vector<Parsed> parsed;
    int max_id = -1;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto f = csv::split_line(lines[i]);
        if (f.size() != (weighted ? 3u : 2u)) throw MalformedLine(lines[i]);
        int u, v;
        double w = 1.0;
        try {
            size_t p1 = 0, p2 = 0;
            u = std::stoi(f[0], &p1);
            v = std::stoi(f[1], &p2);
            if (p1 != f[0].size() || p2 != f[1].size() || u < 0 || v < 0)
                throw MalformedLine(lines[i]);
        } catch (const MalformedLine&) {
            throw;
        } catch (const std::exception&) {
            throw MalformedLine(lines[i]);
        }
        if (u == v) throw SelfLoop(u);
        if (weighted && !csv::parse_double(f[2], w)) throw MalformedLine(lines[i]);
        parsed.push_back({u, v, w});
        max_id = std::max({max_id, u, v});
    }
    int n = n_hint >= 0 ? n_hint : max_id + 1;
    if (max_id >= n) throw DataError("edge node id exceeds node count");
    Graph g(n);
    for (const auto& p : parsed) {
        g.add_edge(p.u, p.v);  // throws DuplicateEdge on repeats
        if (weighted) g.set_weight(p.u, p.v, p.w);
    }
    return g;
}

}  // namespace svmnet::net
