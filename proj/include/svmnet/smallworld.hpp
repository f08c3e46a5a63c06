#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "svmnet/graph.hpp"

namespace svmnet::net {

struct BadDegree : ConfigError {
    explicit BadDegree(const std::string& msg) : ConfigError("bad lattice degree: " + msg) {}
};

struct ConstantValues : DataError {
    ConstantValues() : DataError("weight source values are constant (sd = 0)") {}
};

struct SmallWorldConfig {
    int n = 0;
    int k_lattice = 4;     // even, < n
    double p_rewire = 0.0;  // in [0,1]
    long seed = 0;
};

// Ring lattice: node i adjacent to i+-1 .. i+-k/2 (mod n); n*k/2 edges.
inline Graph ring_lattice(int n, int k) {
    if (k < 2 || k % 2 != 0) throw BadDegree("k must be even and >= 2, got " + std::to_string(k));
    if (k > n - 1) throw BadDegree("k=" + std::to_string(k) + " too large for n=" + std::to_string(n));
    Graph g(n);
    for (int j = 1; j <= k / 2; ++j)
        for (int i = 0; i < n; ++i)
            g.add_edge(i, (i + j) % n);
    return g;
}

// Expected mean local clustering of the ring lattice: 0.75(k-2)/(k-1).
inline double lattice_clustering(int k) {
    if (k < 2 || k % 2 != 0) throw BadDegree("k must be even and >= 2, got " + std::to_string(k));
    return 0.75 * (k - 2) / (k - 1);
}

namespace detail {

// Ring-order decomposition of an edge: the owner keeps its endpoint during
// rewiring, the far endpoint (greater ring distance from the owner, ties to
// the lower id) is the one replaced. For lattice edges this makes node i the
// owner of its k/2 clockwise edges (i, i+j).
struct EdgeSlot {
    int ring_dist;
    int owner;
    int far;
};

inline EdgeSlot edge_slot(const Edge& e, int n) {
    int fwd = e.second - e.first;       // steps from u to v clockwise
    int bck = n - fwd;                  // steps from v to u clockwise
    if (fwd <= bck) return {fwd, e.first, e.second};
    return {bck, e.second, e.first};
}

}  // namespace detail

// Watts-Strogatz rewiring: each edge is selected independently with
// probability p; a selected edge has its far endpoint replaced by a uniform
// random node, rejecting loops and existing edges (at most 100 draws, then
// the edge is left unchanged). Edge count and mean degree are preserved, and
// each node keeps at least its k/2 owned edges.
inline Graph rewire(const Graph& g, double p, long seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("rewire probability must be in [0,1]");
    if (p == 0.0) return g;
    int n = g.node_count();
    std::vector<detail::EdgeSlot> slots;
    slots.reserve(g.edge_count());
    for (const auto& e : g.edges()) slots.push_back(detail::edge_slot(e, n));
    std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) {
        return a.ring_dist != b.ring_dist ? a.ring_dist < b.ring_dist : a.owner < b.owner;
    });

    Graph out = g;
    std::mt19937_64 rng(static_cast<std::mt19937_64::result_type>(seed));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (const auto& s : slots) {
        if (coin(rng) >= p) continue;
        for (int attempt = 0; attempt < 100; ++attempt) {
            int w = pick(rng);
            if (w == s.owner || out.has_edge(s.owner, w)) continue;
            double wt = out.weighted() ? out.weight(s.owner, s.far) : 0.0;
            bool had_weight = out.weighted();
            out.remove_edge(s.owner, s.far);
            out.add_edge(s.owner, w);
            if (had_weight) out.set_weight(s.owner, w, wt);
            break;
        }
    }
    return out;
}

// Lattice followed by rewiring, deterministic per seed.
inline Graph generate(const SmallWorldConfig& cfg) {
    Graph lattice = ring_lattice(cfg.n, cfg.k_lattice);
    return rewire(lattice, cfg.p_rewire, cfg.seed);
}

// Edge weight = mean of the two endpoints' z-scored values, shifted by
// -min + epsilon so every weight is strictly positive (shortest-path
// semantics need positive distances). z-scores use the sample (n-1) sd.
inline Graph weight_edges(const Graph& g, const std::vector<double>& node_values,
                          double epsilon = 0.1) {
    size_t n = static_cast<size_t>(g.node_count());
    if (node_values.size() != n) throw DataError("node value count != node count");
    double mean = 0.0;
    for (double v : node_values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : node_values) ss += (v - mean) * (v - mean);
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd == 0.0) throw ConstantValues();

    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = (node_values[i] - mean) / sd;

    double min_raw = 0.0;
    bool first = true;
    for (const auto& [u, v] : g.edges()) {
        double r = 0.5 * (z[u] + z[v]);
        if (first || r < min_raw) min_raw = r;
        first = false;
    }
    Graph out = g;
    for (const auto& [u, v] : g.edges())
        out.set_weight(u, v, 0.5 * (z[u] + z[v]) - min_raw + epsilon);
    return out;
}

}  // namespace svmnet::net
