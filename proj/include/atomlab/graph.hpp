#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "atomlab/bits.hpp"

namespace atomlab {

/// Finite undirected graph, irreflexive and symmetric.
struct Graph {
    int v = 0;
    std::vector<std::pair<int, int>> edges;  // sorted, i < j
    std::vector<AtomSet> adj;

    static Graph make(int vertices, std::vector<std::pair<int, int>> edge_list) {
        Graph g;
        g.v = vertices;
        for (auto& e : edge_list) {
            if (e.first == e.second)
                throw std::invalid_argument("graph: self-loop on vertex " +
                                            std::to_string(e.first));
            if (e.first < 0 || e.second < 0 || e.first >= vertices ||
                e.second >= vertices)
                throw std::invalid_argument("graph: edge endpoint out of range");
            if (e.first > e.second) std::swap(e.first, e.second);
        }
        std::sort(edge_list.begin(), edge_list.end());
        edge_list.erase(std::unique(edge_list.begin(), edge_list.end()),
                        edge_list.end());
        g.edges = std::move(edge_list);
        g.adj.assign(static_cast<std::size_t>(vertices),
                     AtomSet(static_cast<std::size_t>(vertices)));
        for (auto [a, b] : g.edges) {
            g.adj[static_cast<std::size_t>(a)].set(static_cast<std::size_t>(b));
            g.adj[static_cast<std::size_t>(b)].set(static_cast<std::size_t>(a));
        }
        return g;
    }

    bool adjacent(int a, int b) const {
        return a != b && adj[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(b));
    }
    int edge_count() const { return static_cast<int>(edges.size()); }
};

inline Graph complete_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e.push_back({i, j});
    return Graph::make(k, std::move(e));
}

inline Graph cycle_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i) e.push_back({i, (i + 1) % k});
    return Graph::make(k, std::move(e));
}

inline Graph empty_graph(int k) { return Graph::make(k, {}); }

/// Vertices 0..width-1 with an edge when 0 < |i-l| < N; a finite window of
/// the infinite distance graph on the naturals.
inline Graph distance_graph(int width, int big_n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < width; ++i)
        for (int j = i + 1; j < width; ++j)
            if (j - i < big_n) e.push_back({i, j});
    return Graph::make(width, std::move(e));
}

/// Disjoint copies of K_n; a finite window of the countable union of cliques.
inline Graph cliques_graph(int clique_size, int copies) {
    std::vector<std::pair<int, int>> e;
    for (int c = 0; c < copies; ++c)
        for (int i = 0; i < clique_size; ++i)
            for (int j = i + 1; j < clique_size; ++j)
                e.push_back({c * clique_size + i, c * clique_size + j});
    return Graph::make(clique_size * copies, std::move(e));
}

inline Graph random_graph(int v, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < p) e.push_back({i, j});
        }
    return Graph::make(v, std::move(e));
}

/// Mycielskian of C5: 11 vertices, triangle-free, chromatic number 4.
inline Graph grotzsch_graph() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i) e.push_back({i, (i + 1) % 5});
    for (int i = 0; i < 5; ++i) {
        e.push_back({5 + i, (i + 1) % 5});
        e.push_back({5 + i, (i + 4) % 5});
    }
    for (int i = 0; i < 5; ++i) e.push_back({10, 5 + i});
    return Graph::make(11, std::move(e));
}

/// Girth: length of a shortest cycle, nullopt for forests.
inline std::optional<int> girth(const Graph& g) {
    int best = -1;
    std::vector<int> dist(static_cast<std::size_t>(g.v)), par(static_cast<std::size_t>(g.v));
    for (int root = 0; root < g.v; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(par.begin(), par.end(), -1);
        std::deque<int> q{root};
        dist[static_cast<std::size_t>(root)] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            bool done = false;
            g.adj[static_cast<std::size_t>(u)].for_each([&](std::size_t wz) {
                int w = static_cast<int>(wz);
                if (done) return;
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    par[static_cast<std::size_t>(w)] = u;
                    q.push_back(w);
                } else if (w != par[static_cast<std::size_t>(u)]) {
                    int len = dist[static_cast<std::size_t>(u)] +
                              dist[static_cast<std::size_t>(w)] + 1;
                    if (best < 0 || len < best) best = len;
                    if (len <= 3) done = true;
                }
            });
            if (best == 3) return 3;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

struct Colouring {
    int colours = 0;
    std::vector<int> assignment;
};

namespace detail {

inline bool k_colourable(const Graph& g, int k, std::vector<int>& colour,
                         const std::vector<int>& order, std::size_t at) {
    if (at == order.size()) return true;
    int v = order[at];
    // colours used so far, plus one fresh colour: breaks colour symmetry
    int used = 0;
    for (std::size_t i = 0; i < at; ++i)
        used = std::max(used, colour[static_cast<std::size_t>(order[i])] + 1);
    int limit = std::min(k, used + 1);
    for (int c = 0; c < limit; ++c) {
        bool ok = true;
        g.adj[static_cast<std::size_t>(v)].for_each([&](std::size_t w) {
            if (colour[w] == c) ok = false;
        });
        if (!ok) continue;
        colour[static_cast<std::size_t>(v)] = c;
        if (k_colourable(g, k, colour, order, at + 1)) return true;
        colour[static_cast<std::size_t>(v)] = -1;
    }
    return false;
}

inline int greedy_clique(const Graph& g) {
    std::vector<int> order(static_cast<std::size_t>(g.v));
    for (int i = 0; i < g.v; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        auto da = g.adj[static_cast<std::size_t>(a)].count(),
             db = g.adj[static_cast<std::size_t>(b)].count();
        return da != db ? da > db : a < b;
    });
    int best = 0;
    for (int start : order) {
        std::vector<int> clique{start};
        for (int u : order) {
            bool ok = u != start;
            for (int c : clique)
                if (!g.adjacent(u, c)) ok = false;
            if (ok) clique.push_back(u);
        }
        best = std::max(best, static_cast<int>(clique.size()));
    }
    return best;
}

}  // namespace detail

/// Exact chromatic number with a colouring certificate. Search is
/// branch-and-bound between a clique lower bound and a greedy upper bound;
/// graphs above the vertex cap are refused rather than approximated.
inline Colouring chromatic_number(const Graph& g, int vertex_cap = 40) {
    if (g.v > vertex_cap)
        throw std::invalid_argument("chromatic_number: vertex cap " +
                                    std::to_string(vertex_cap) + " exceeded");
    Colouring out;
    if (g.v == 0) return out;
    // order vertices by degree descending; stable and effective for B&B
    std::vector<int> order(static_cast<std::size_t>(g.v));
    for (int i = 0; i < g.v; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        auto da = g.adj[static_cast<std::size_t>(a)].count(),
             db = g.adj[static_cast<std::size_t>(b)].count();
        return da != db ? da > db : a < b;
    });
    int lower = std::max(1, detail::greedy_clique(g));
    for (int k = lower; ; ++k) {
        std::vector<int> colour(static_cast<std::size_t>(g.v), -1);
        if (detail::k_colourable(g, k, colour, order, 0)) {
            out.colours = k;
            out.assignment = colour;
            return out;
        }
    }
}

struct ErdosResult {
    std::optional<Graph> graph;
    int trials_used = 0;
    int chromatic = 0;
    std::optional<int> girth_found;
};

/// Certified search for a graph with chromatic number and girth both
/// exceeding k. The trial sequence starts with curated candidates (odd
/// cycle, the Mycielskian) and continues with seeded random graphs; every
/// candidate is certified by the two exact operations.
inline ErdosResult erdos_search(int k, int trials, std::uint64_t seed,
                                int vertex_cap = 40) {
    ErdosResult res;
    for (int t = 0; t < trials; ++t) {
        Graph g = [&]() {
            if (t == 0) return cycle_graph(5);
            if (t == 1) return grotzsch_graph();
            std::uint64_t salt = seed + static_cast<std::uint64_t>(t);
            int v = 8 + 2 * ((t - 2) % 9);
            double p = 0.15 + 0.1 * ((t - 2) / 9 % 5);
            return random_graph(v, p, salt);
        }();
        res.trials_used = t + 1;
        Colouring col = chromatic_number(g, vertex_cap);
        std::optional<int> gi = girth(g);
        bool girth_ok = !gi.has_value() || *gi > k;  // forests: infinite girth
        if (col.colours > k && girth_ok) {
            res.graph = std::move(g);
            res.chromatic = col.colours;
            res.girth_found = gi;
            return res;
        }
    }
    return res;
}

/// Edge label of a complete labelled graph: a base-graph vertex or rho,
/// with a colour below n.
struct EdgeLabel {
    int a = -1;  // -1 encodes rho
    int colour = 0;

    bool is_rho() const { return a < 0; }
    bool operator==(const EdgeLabel& o) const { return a == o.a && colour == o.colour; }
};

/// Complete labelled graph over (G u {rho}) x n: every unordered pair of
/// distinct nodes carries exactly one label.
struct LabelledGraph {
    Graph base;
    int n = 0;
    int nodes = 0;
    std::vector<std::optional<EdgeLabel>> labels;  // upper triangle

    static LabelledGraph make(Graph base_graph, int n, int node_count) {
        LabelledGraph lg;
        lg.base = std::move(base_graph);
        lg.n = n;
        lg.nodes = node_count;
        lg.labels.assign(
            static_cast<std::size_t>(node_count) * node_count, std::nullopt);
        return lg;
    }

    void set_label(int x, int y, EdgeLabel l) {
        if (x == y) throw std::invalid_argument("labelled graph: no loop labels");
        if (l.colour < 0 || l.colour >= n)
            throw std::invalid_argument("labelled graph: colour out of range");
        if (l.a >= base.v) throw std::invalid_argument("labelled graph: bad base vertex");
        labels[static_cast<std::size_t>(std::min(x, y)) * nodes + std::max(x, y)] = l;
    }
    const std::optional<EdgeLabel>& label(int x, int y) const {
        return labels[static_cast<std::size_t>(std::min(x, y)) * nodes + std::max(x, y)];
    }
    bool totally_labelled() const {
        for (int x = 0; x < nodes; ++x)
            for (int y = x + 1; y < nodes; ++y)
                if (!label(x, y)) return false;
        return true;
    }
};

/// Membership in the class of consistent complete labelled graphs: each
/// triple of distinct nodes must satisfy one of the four clauses.
inline bool gg_member(const LabelledGraph& lg, std::string* witness = nullptr) {
    if (!lg.totally_labelled())
        throw std::invalid_argument("gg_member: graph is not totally labelled");
    for (int x = 0; x < lg.nodes; ++x)
        for (int y = 0; y < lg.nodes; ++y)
            for (int z = 0; z < lg.nodes; ++z) {
                if (x == y || y == z || x == z) continue;
                EdgeLabel e1 = *lg.label(y, x), e2 = *lg.label(y, z), e3 = *lg.label(x, z);
                if (e1.colour != e2.colour || e2.colour != e3.colour) continue;  // (1)
                int rho = (e1.is_rho() ? 1 : 0) + (e2.is_rho() ? 1 : 0) +
                          (e3.is_rho() ? 1 : 0);
                if (rho >= 2) continue;  // (4)
                if (rho == 1) {          // (3): the two non-rho ends form an edge
                    int p, q;
                    if (e1.is_rho()) p = e2.a, q = e3.a;
                    else if (e2.is_rho()) p = e1.a, q = e3.a;
                    else p = e1.a, q = e2.a;
                    if (lg.base.adjacent(p, q)) continue;
                } else {  // (2): some base edge inside {a,b,c}
                    if (lg.base.adjacent(e1.a, e2.a) || lg.base.adjacent(e1.a, e3.a) ||
                        lg.base.adjacent(e2.a, e3.a))
                        continue;
                }
                if (witness)
                    *witness = "triple (" + std::to_string(x) + "," + std::to_string(y) +
                               "," + std::to_string(z) + ") fails all four clauses";
                return false;
            }
    return true;
}

}  // namespace atomlab
