#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "atomlab/cyl.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// Atomic network over a cylindric atom structure: a finite node set with
/// every n-tuple labelled by an atom. Tuples are addressed in mixed radix
/// over the sorted node list.
struct CaNetwork {
    int n = 0;
    std::vector<int> nodes;  // sorted
    std::vector<int> labels; // |nodes|^n entries, atom id or -1

    static CaNetwork empty(int arity, std::vector<int> node_ids) {
        CaNetwork net;
        net.n = arity;
        net.nodes = std::move(node_ids);
        std::sort(net.nodes.begin(), net.nodes.end());
        std::size_t total = 1;
        for (int i = 0; i < arity; ++i) total *= net.nodes.size();
        net.labels.assign(total, -1);
        return net;
    }

    int local(int node) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
        if (it == nodes.end() || *it != node)
            throw std::invalid_argument("network: unknown node " + std::to_string(node));
        return static_cast<int>(it - nodes.begin());
    }
    bool has_node(int node) const {
        return std::binary_search(nodes.begin(), nodes.end(), node);
    }

    std::size_t tuple_index(const std::vector<int>& tuple) const {
        std::size_t idx = 0;
        for (int v : tuple) idx = idx * nodes.size() + static_cast<std::size_t>(local(v));
        return idx;
    }
    std::vector<int> tuple_at(std::size_t idx) const {
        std::vector<int> t(static_cast<std::size_t>(n));
        for (int p = n - 1; p >= 0; --p) {
            t[static_cast<std::size_t>(p)] = nodes[idx % nodes.size()];
            idx /= nodes.size();
        }
        return t;
    }
    std::size_t tuple_count() const { return labels.size(); }

    int label(const std::vector<int>& tuple) const { return labels[tuple_index(tuple)]; }
    void set_label(const std::vector<int>& tuple, int atom) {
        labels[tuple_index(tuple)] = atom;
    }

    bool operator==(const CaNetwork& o) const {
        return n == o.n && nodes == o.nodes && labels == o.labels;
    }
    bool operator<(const CaNetwork& o) const {
        if (nodes != o.nodes) return nodes < o.nodes;
        return labels < o.labels;
    }

    /// Rename nodes through a total permutation of the ambient id space.
    CaNetwork renamed(const std::vector<int>& perm) const {
        std::vector<int> new_nodes;
        for (int v : nodes) new_nodes.push_back(perm[static_cast<std::size_t>(v)]);
        CaNetwork out = empty(n, std::move(new_nodes));
        std::vector<int> t(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
        for (std::size_t idx = 0; idx < labels.size(); ++idx) {
            t = tuple_at(idx);
            for (int p = 0; p < n; ++p)
                im[static_cast<std::size_t>(p)] =
                    perm[static_cast<std::size_t>(t[static_cast<std::size_t>(p)])];
            out.set_label(im, labels[idx]);
        }
        return out;
    }

    std::string to_string() const {
        std::string s = "nodes=";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(nodes[i]);
        }
        s += " labels=";
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(labels[i]);
        }
        return s;
    }
};

/// Both atomic-network clauses over all stored tuples.
inline ValidationReport is_atomic_network(const CylAtomStructure& s, const CaNetwork& net) {
    ValidationReport rep;
    if (net.n != s.n) {
        rep.fail("network-arity", "network n=" + std::to_string(net.n));
        return rep;
    }
    for (std::size_t idx = 0; idx < net.tuple_count() && rep.violations.size() < 16; ++idx) {
        int lab = net.labels[idx];
        std::vector<int> t = net.tuple_at(idx);
        if (lab < 0) {
            rep.fail("network-unlabelled-tuple", "tuple index " + std::to_string(idx));
            continue;
        }
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j)
                if (t[static_cast<std::size_t>(i)] == t[static_cast<std::size_t>(j)] &&
                    !s.d(i, j).test(static_cast<std::size_t>(lab)))
                    rep.fail("network-diagonal (N(d) <= d_ij)",
                             "tuple idx " + std::to_string(idx) + " (i,j)=(" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
        for (int i = 0; i < s.n; ++i)
            for (int d : net.nodes) {
                std::vector<int> t2 = t;
                t2[static_cast<std::size_t>(i)] = d;
                int lab2 = net.label(t2);
                if (lab2 >= 0 &&
                    !s.equiv[static_cast<std::size_t>(i)].related(lab, lab2)) {
                    rep.fail("network-cylindrifier (N(d[i->x]) <= c_iN(d))",
                             "tuple idx " + std::to_string(idx) +
                                 " i=" + std::to_string(i) + " d=" + std::to_string(d));
                }
            }
    }
    return rep;
}

/// Pullback of a network along a partial map: nodes are the preimages,
/// labels are read off through the map.
inline CaNetwork network_apply_map(const CaNetwork& net, const std::map<int, int>& theta) {
    std::vector<int> new_nodes;
    for (const auto& [x, tx] : theta)
        if (net.has_node(tx)) new_nodes.push_back(x);
    CaNetwork out = CaNetwork::empty(net.n, std::move(new_nodes));
    std::vector<int> img(static_cast<std::size_t>(net.n));
    for (std::size_t idx = 0; idx < out.tuple_count(); ++idx) {
        std::vector<int> t = out.tuple_at(idx);
        for (int p = 0; p < net.n; ++p)
            img[static_cast<std::size_t>(p)] = theta.at(t[static_cast<std::size_t>(p)]);
        out.labels[idx] = net.label(img);
    }
    return out;
}

struct GameBudget {
    std::uint64_t max_positions = 2000000;
    std::uint64_t max_csp_nodes = 50000000;
    int node_cap = 6;  // refuse m beyond this
    std::optional<std::chrono::steady_clock::time_point> deadline;

    bool expired() const {
        return deadline && std::chrono::steady_clock::now() > *deadline;
    }
};

struct FGameConfig {
    int m = 4;
    int rounds = 3;
    bool memo = true;
    bool prune_initial_by_automorphisms = true;
    int jobs = 1;
    GameBudget budget;
};

struct FMove {
    bool initial = false;
    int atom = -1;           // initial move
    int net_index = -1;      // cylindrifier move: which played network
    int l = -1;
    std::vector<int> face;   // n-1 nodes of the chosen network
    int k = -1;
    // atom doubles as b for cylindrifier moves

    std::string to_string() const {
        if (initial) return "init a=" + std::to_string(atom);
        std::string s = "cyl N=" + std::to_string(net_index) + " l=" + std::to_string(l) +
                        " face=";
        for (std::size_t i = 0; i < face.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(face[i]);
        }
        s += " k=" + std::to_string(k) + " b=" + std::to_string(atom);
        return s;
    }
};

struct GameCert {
    struct Edge {
        FMove move;
        std::optional<CaNetwork> response;  // empty when the move is unanswerable
        int child = -1;                     // -1: terminal, -2: transposition
        std::string transposition;          // canonical key when child == -2
    };
    struct Node {
        enum class Kind { ExistsTurn, ForallTurn, Survived, Stuck };
        Kind kind;
        int rounds_left = 0;
        std::vector<Edge> edges;
    };
    std::vector<Node> nodes;
    int root = -1;
};

enum class Winner { Exists, Forall, Inconclusive };

struct GameResult {
    Winner winner = Winner::Inconclusive;
    int rounds = 0;
    std::uint64_t positions = 0;
    std::uint64_t csp_nodes = 0;
    std::uint64_t dead_end_moves = 0;  // forall moves with no legal response
    std::string budget_echo;
    std::shared_ptr<GameCert> certificate;
};

namespace detail {

/// Per-atom masks of two-way related atoms, per relation; the candidate
/// filter of the response search.
struct RelMasks {
    std::vector<std::vector<AtomSet>> mask;  // [rel][atom]

    static RelMasks build(const CylAtomStructure& s) {
        RelMasks rm;
        const int atoms = s.atom_count();
        rm.mask.resize(static_cast<std::size_t>(s.n));
        for (int i = 0; i < s.n; ++i) {
            rm.mask[static_cast<std::size_t>(i)].assign(
                static_cast<std::size_t>(atoms), AtomSet(static_cast<std::size_t>(atoms)));
            const AtomRel& r = s.equiv[static_cast<std::size_t>(i)];
            for (int a = 0; a < atoms; ++a)
                for (int c : r.neighbours(a))
                    if (r.related(c, a))
                        rm.mask[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]
                            .set(static_cast<std::size_t>(c));
        }
        return rm;
    }
};

/// Backtracking enumeration of completions of a partially labelled network.
/// Deterministic order: most-constrained tuple first, atom ids ascending.
/// The callback returns true to stop the enumeration.
template <typename F>
inline bool complete_rec(const CylAtomStructure& s, const RelMasks& rm, CaNetwork& net,
                         std::vector<std::size_t>& open, std::uint64_t& csp_nodes,
                         std::uint64_t csp_limit, F&& emit,
                         const GameBudget* budget = nullptr) {
    if (++csp_nodes > csp_limit) throw BudgetExceeded("csp node budget exceeded");
    if (budget && (csp_nodes & 4095) == 0 && budget->expired())
        throw BudgetExceeded("wall budget exceeded");
    if (open.empty()) return emit(const_cast<const CaNetwork&>(net));

    auto candidates = [&](std::size_t idx) {
        AtomSet cand = AtomSet::all(static_cast<std::size_t>(s.atom_count()));
        std::vector<int> t = net.tuple_at(idx);
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j)
                if (t[static_cast<std::size_t>(i)] == t[static_cast<std::size_t>(j)])
                    cand &= s.d(i, j);
        for (int i = 0; i < s.n; ++i) {
            int orig = t[static_cast<std::size_t>(i)];
            for (int d : net.nodes) {
                if (d == orig) continue;
                t[static_cast<std::size_t>(i)] = d;
                int lab = net.label(t);
                if (lab >= 0)
                    cand &= rm.mask[static_cast<std::size_t>(i)][static_cast<std::size_t>(lab)];
            }
            t[static_cast<std::size_t>(i)] = orig;
        }
        return cand;
    };

    std::size_t best_oi = 0, best_count = SIZE_MAX;
    AtomSet best_cand;
    for (std::size_t oi = 0; oi < open.size(); ++oi) {
        AtomSet cand = candidates(open[oi]);
        std::size_t c = cand.count();
        if (c < best_count) {
            best_count = c;
            best_oi = oi;
            best_cand = std::move(cand);
            if (c == 0) break;
        }
    }
    if (best_count == 0) return false;

    std::size_t idx = open[best_oi];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_oi));
    bool stopped = false;
    std::vector<std::size_t> opts = best_cand.members();
    for (std::size_t a : opts) {
        net.labels[idx] = static_cast<int>(a);
        if (complete_rec(s, rm, net, open, csp_nodes, csp_limit, emit, budget)) {
            stopped = true;
            break;
        }
    }
    net.labels[idx] = -1;
    open.insert(open.begin() + static_cast<std::ptrdiff_t>(best_oi), idx);
    return stopped;
}

template <typename F>
inline bool enumerate_completions(const CylAtomStructure& s, const RelMasks& rm,
                                  CaNetwork& net, std::uint64_t& csp_nodes,
                                  std::uint64_t csp_limit, F&& emit,
                                  const GameBudget* budget = nullptr) {
    std::vector<std::size_t> open;
    for (std::size_t idx = 0; idx < net.tuple_count(); ++idx)
        if (net.labels[idx] < 0) open.push_back(idx);
    // pinned labels may already clash; verify before searching
    for (std::size_t idx = 0; idx < net.tuple_count(); ++idx) {
        if (net.labels[idx] < 0) continue;
        int lab = net.labels[idx];
        std::vector<int> t = net.tuple_at(idx);
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j)
                if (t[static_cast<std::size_t>(i)] == t[static_cast<std::size_t>(j)] &&
                    !s.d(i, j).test(static_cast<std::size_t>(lab)))
                    return false;
        for (int i = 0; i < s.n; ++i) {
            int orig = t[static_cast<std::size_t>(i)];
            for (int d : net.nodes) {
                if (d == orig) continue;
                t[static_cast<std::size_t>(i)] = d;
                int lab2 = net.label(t);
                if (lab2 >= 0 &&
                    !rm.mask[static_cast<std::size_t>(i)][static_cast<std::size_t>(lab)]
                         .test(static_cast<std::size_t>(lab2)))
                    return false;
            }
            t[static_cast<std::size_t>(i)] = orig;
        }
    }
    return complete_rec(s, rm, net, open, csp_nodes, csp_limit, emit, budget);
}

}  // namespace detail

/// Find automorphisms of the structure by backtracking; merge atom orbits
/// for each one found. Enumeration stops at the cap, which only loses
/// pruning power, never soundness.
inline std::vector<int> atom_orbits(const CylAtomStructure& s, int max_autos = 2000) {
    const int atoms = s.atom_count();
    std::vector<int> parent(static_cast<std::size_t>(atoms));
    for (int a = 0; a < atoms; ++a) parent[static_cast<std::size_t>(a)] = a;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

    // invariant signature: diagonal memberships and class sizes
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(atoms));
    for (int a = 0; a < atoms; ++a) {
        auto& v = sig[static_cast<std::size_t>(a)];
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j)
                v.push_back(s.d(i, j).test(static_cast<std::size_t>(a)) ? 1 : 0);
        for (int i = 0; i < s.n; ++i)
            v.push_back(static_cast<int>(
                s.equiv[static_cast<std::size_t>(i)].neighbours(a).size()));
    }

    std::vector<int> img(static_cast<std::size_t>(atoms), -1);
    std::vector<char> used(static_cast<std::size_t>(atoms), 0);
    int found = 0;

    auto consistent_prefix = [&](int a, int b) {
        if (sig[static_cast<std::size_t>(a)] != sig[static_cast<std::size_t>(b)]) return false;
        for (int c = 0; c < atoms; ++c) {
            if (img[static_cast<std::size_t>(c)] < 0) continue;
            for (int i = 0; i < s.n; ++i)
                if (s.equiv[static_cast<std::size_t>(i)].related(a, c) !=
                    s.equiv[static_cast<std::size_t>(i)].related(
                        b, img[static_cast<std::size_t>(c)]))
                    return false;
            if (s.has_swap)
                for (int i = 0; i < s.n; ++i)
                    for (int j = i + 1; j < s.n; ++j)
                        if (s.swap_rel(i, j).related(a, c) !=
                            s.swap_rel(i, j).related(b, img[static_cast<std::size_t>(c)]))
                            return false;
        }
        return true;
    };

    std::function<void(int)> dfs = [&](int a) {
        if (found >= max_autos) return;
        if (a == atoms) {
            ++found;
            for (int x = 0; x < atoms; ++x) unite(x, img[static_cast<std::size_t>(x)]);
            return;
        }
        for (int b = 0; b < atoms && found < max_autos; ++b) {
            if (used[static_cast<std::size_t>(b)]) continue;
            if (!consistent_prefix(a, b)) continue;
            img[static_cast<std::size_t>(a)] = b;
            used[static_cast<std::size_t>(b)] = 1;
            dfs(a + 1);
            img[static_cast<std::size_t>(a)] = -1;
            used[static_cast<std::size_t>(b)] = 0;
        }
    };
    if (atoms <= 256) dfs(0);
    std::vector<int> orbit(static_cast<std::size_t>(atoms));
    for (int a = 0; a < atoms; ++a) orbit[static_cast<std::size_t>(a)] = find(a);
    return orbit;
}

namespace detail {

struct FSolver {
    const CylAtomStructure& s;
    FGameConfig cfg;
    RelMasks rm;
    std::uint64_t positions = 0;
    std::uint64_t csp_nodes = 0;
    std::uint64_t dead_ends = 0;
    std::map<std::string, bool> memo;
    std::vector<std::vector<int>> perms;  // permutations of 0..m-1

    explicit FSolver(const CylAtomStructure& str, FGameConfig c)
        : s(str), cfg(c), rm(RelMasks::build(str)) {
        std::vector<int> p(static_cast<std::size_t>(cfg.m));
        for (int i = 0; i < cfg.m; ++i) p[static_cast<std::size_t>(i)] = i;
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }

    std::string canonical(const std::vector<CaNetwork>& pos) const {
        std::string best;
        for (const auto& perm : perms) {
            std::vector<std::string> parts;
            for (const auto& net : pos) parts.push_back(net.renamed(perm).to_string());
            std::sort(parts.begin(), parts.end());
            std::string key;
            for (const auto& p : parts) key += p + ";";
            if (best.empty() || key < best) best = key;
        }
        return best;
    }

    /// All deduplicated cylindrifier moves available to the universal
    /// player at this position.
    std::vector<FMove> forall_moves(const std::vector<CaNetwork>& pos) const {
        std::vector<FMove> out;
        std::set<std::string> seen;
        for (std::size_t ni = 0; ni < pos.size(); ++ni) {
            const CaNetwork& net = pos[ni];
            AtomSet used_anywhere(static_cast<std::size_t>(cfg.m));
            for (const auto& other : pos)
                for (int v : other.nodes) used_anywhere.set(static_cast<std::size_t>(v));
            // faces: (n-1)-tuples over nodes(net), repetition allowed
            std::size_t face_count = 1;
            for (int i = 0; i < s.n - 1; ++i) face_count *= net.nodes.size();
            for (std::size_t fi = 0; fi < face_count; ++fi) {
                std::vector<int> face(static_cast<std::size_t>(s.n - 1));
                std::size_t rest = fi;
                for (int p = s.n - 2; p >= 0; --p) {
                    face[static_cast<std::size_t>(p)] = net.nodes[rest % net.nodes.size()];
                    rest /= net.nodes.size();
                }
                for (int l = 0; l < s.n; ++l) {
                    // witness tuple with an existing node at slot l
                    std::vector<int> probe(static_cast<std::size_t>(s.n));
                    for (int p = 0, q = 0; p < s.n; ++p)
                        probe[static_cast<std::size_t>(p)] =
                            p == l ? net.nodes[0] : face[static_cast<std::size_t>(q++)];
                    int base = net.label(probe);
                    bool fresh_taken = false;
                    for (int k = 0; k < cfg.m; ++k) {
                        if (std::find(face.begin(), face.end(), k) != face.end()) continue;
                        bool fresh = !used_anywhere.test(static_cast<std::size_t>(k));
                        if (fresh) {
                            if (fresh_taken) continue;  // fresh ids are interchangeable
                            fresh_taken = true;
                        }
                        for (int b : s.equiv[static_cast<std::size_t>(l)].neighbours(base)) {
                            FMove mv;
                            mv.net_index = static_cast<int>(ni);
                            mv.l = l;
                            mv.face = face;
                            mv.k = k;
                            mv.atom = b;
                            if (seen.insert(mv.to_string()).second) out.push_back(mv);
                        }
                    }
                }
            }
        }
        return out;
    }

    /// Enumerate legal responses to a cylindrifier move, deduplicated.
    std::vector<CaNetwork> responses(const std::vector<CaNetwork>& pos, const FMove& mv) {
        const CaNetwork& net = pos[static_cast<std::size_t>(mv.net_index)];
        std::vector<int> new_nodes = net.nodes;
        if (!net.has_node(mv.k)) new_nodes.push_back(mv.k);
        CaNetwork m = CaNetwork::empty(s.n, new_nodes);
        // inherit labels on tuples avoiding k
        for (std::size_t idx = 0; idx < m.tuple_count(); ++idx) {
            std::vector<int> t = m.tuple_at(idx);
            bool has_k = std::find(t.begin(), t.end(), mv.k) != t.end();
            if (!has_k) m.labels[idx] = net.label(t);
        }
        std::vector<int> target(static_cast<std::size_t>(s.n));
        for (int p = 0, q = 0; p < s.n; ++p)
            target[static_cast<std::size_t>(p)] =
                p == mv.l ? mv.k : mv.face[static_cast<std::size_t>(q++)];
        std::size_t ti = m.tuple_index(target);
        if (m.labels[ti] >= 0 && m.labels[ti] != mv.atom) return {};
        m.labels[ti] = mv.atom;
        std::vector<CaNetwork> out;
        enumerate_completions(
            s, rm, m, csp_nodes, cfg.budget.max_csp_nodes,
            [&](const CaNetwork& done) {
                out.push_back(done);
                return false;
            },
            &cfg.budget);
        return out;
    }

    /// Initial-round responses: networks on at most n canonical nodes
    /// containing the chosen atom.
    std::vector<CaNetwork> initial_responses(int atom) {
        std::vector<CaNetwork> out;
        for (int sz = 1; sz <= s.n; ++sz) {
            std::vector<int> ids;
            for (int i = 0; i < sz; ++i) ids.push_back(i);
            CaNetwork m = CaNetwork::empty(s.n, ids);
            enumerate_completions(
                s, rm, m, csp_nodes, cfg.budget.max_csp_nodes,
                [&](const CaNetwork& done) {
                    if (std::find(done.labels.begin(), done.labels.end(), atom) !=
                        done.labels.end())
                        out.push_back(done);
                    return false;
                },
                &cfg.budget);
        }
        return out;
    }

    bool exists_wins(std::vector<CaNetwork> pos, int rounds_left) {
        if (rounds_left == 0) return true;
        if (++positions > cfg.budget.max_positions)
            throw BudgetExceeded("position budget exceeded");
        if ((positions & 1023) == 0 && cfg.budget.expired())
            throw BudgetExceeded("wall budget exceeded");
        std::string key;
        if (cfg.memo) {
            key = canonical(pos) + "#" + std::to_string(rounds_left);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        bool result = true;
        for (const FMove& mv : forall_moves(pos)) {
            bool ok = false;
            std::vector<CaNetwork> resps = responses(pos, mv);
            if (resps.empty()) ++dead_ends;  // move with no legal response at all
            for (CaNetwork& resp : resps) {
                std::vector<CaNetwork> next = pos;
                if (std::find(next.begin(), next.end(), resp) == next.end())
                    next.push_back(resp);
                if (exists_wins(next, rounds_left - 1)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                result = false;
                break;
            }
        }
        if (cfg.memo) memo[key] = result;
        return result;
    }

    /// Whole game from the empty position: universal player picks the
    /// initial atom.
    bool exists_wins_game(int rounds) {
        if (rounds <= 0) return true;
        std::vector<int> orbit;
        if (cfg.prune_initial_by_automorphisms) orbit = atom_orbits(s);
        for (int a = 0; a < s.atom_count(); ++a) {
            if (!orbit.empty() && orbit[static_cast<std::size_t>(a)] != a) continue;
            bool ok = false;
            for (CaNetwork& n0 : initial_responses(a)) {
                if (exists_wins({n0}, rounds - 1)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        return true;
    }

    // certificate construction: replays the solved game deterministically
    int build_cert(GameCert& cert, std::vector<CaNetwork> pos, int rounds_left,
                   std::map<std::string, int>& emitted, bool exists_winning) {
        std::string key = canonical(pos) + "#" + std::to_string(rounds_left);
        auto done = emitted.find(key);
        if (done != emitted.end()) return done->second;
        int id = static_cast<int>(cert.nodes.size());
        cert.nodes.push_back({});
        emitted[key] = id;
        if (rounds_left == 0) {
            cert.nodes[static_cast<std::size_t>(id)].kind = GameCert::Node::Kind::Survived;
            return id;
        }
        GameCert::Node node;
        node.rounds_left = rounds_left;
        if (exists_winning) {
            node.kind = GameCert::Node::Kind::ExistsTurn;
            for (const FMove& mv : forall_moves(pos)) {
                bool answered = false;
                for (CaNetwork& resp : responses(pos, mv)) {
                    std::vector<CaNetwork> next = pos;
                    if (std::find(next.begin(), next.end(), resp) == next.end())
                        next.push_back(resp);
                    if (exists_wins(next, rounds_left - 1)) {
                        int child = build_cert(cert, next, rounds_left - 1, emitted, true);
                        node.edges.push_back({mv, resp, child, ""});
                        answered = true;
                        break;
                    }
                }
                if (!answered)
                    throw std::logic_error("certificate: winning position lost a move");
            }
        } else {
            node.kind = GameCert::Node::Kind::ForallTurn;
            // deterministic first winning move for the universal player
            bool placed = false;
            for (const FMove& mv : forall_moves(pos)) {
                std::vector<CaNetwork> resps = responses(pos, mv);
                bool all_lose = true;
                for (CaNetwork& resp : resps) {
                    std::vector<CaNetwork> next = pos;
                    if (std::find(next.begin(), next.end(), resp) == next.end())
                        next.push_back(resp);
                    if (exists_wins(next, rounds_left - 1)) {
                        all_lose = false;
                        break;
                    }
                }
                if (!all_lose) continue;
                if (resps.empty()) {
                    node.edges.push_back({mv, std::nullopt, -1, ""});
                } else {
                    std::set<std::string> child_seen;
                    for (CaNetwork& resp : resps) {
                        std::vector<CaNetwork> next = pos;
                        if (std::find(next.begin(), next.end(), resp) == next.end())
                            next.push_back(resp);
                        std::string ck =
                            canonical(next) + "#" + std::to_string(rounds_left - 1);
                        if (!child_seen.insert(ck).second) continue;
                        int child = build_cert(cert, next, rounds_left - 1, emitted, false);
                        node.edges.push_back({mv, resp, child, ""});
                    }
                }
                placed = true;
                break;
            }
            if (!placed) throw std::logic_error("certificate: no winning move found");
        }
        cert.nodes[static_cast<std::size_t>(id)] = std::move(node);
        return id;
    }
};

}  // namespace detail

/// Exact bounded-round solver for the cylindrifier game. Exhaustive
/// alternating search with position memoization modulo node renaming.
inline GameResult solve_F(const CylAtomStructure& s, const FGameConfig& cfg_in) {
    FGameConfig cfg = cfg_in;
    if (cfg.m < s.n) throw std::invalid_argument("solve_F: m >= n required");
    if (cfg.m > cfg.budget.node_cap)
        throw std::invalid_argument("solve_F: m exceeds node cap " +
                                    std::to_string(cfg.budget.node_cap));
    GameResult res;
    res.rounds = cfg.rounds;
    res.budget_echo = "m=" + std::to_string(cfg.m) +
                      " rounds=" + std::to_string(cfg.rounds) +
                      " max_positions=" + std::to_string(cfg.budget.max_positions) +
                      " memo=" + (cfg.memo ? "on" : "off");
    detail::FSolver solver(s, cfg);
    try {
        bool ewins;
        if (cfg.jobs > 1 && cfg.rounds > 0) {
            // fan the initial atoms out to workers; the outcome is the
            // conjunction over atoms, so scheduling cannot change it
            std::vector<int> orbit;
            if (cfg.prune_initial_by_automorphisms) orbit = atom_orbits(s);
            std::vector<int> reps;
            for (int a = 0; a < s.atom_count(); ++a)
                if (orbit.empty() || orbit[static_cast<std::size_t>(a)] == a)
                    reps.push_back(a);
            std::vector<char> answered(reps.size(), 0);
            std::vector<std::uint64_t> pos_used(reps.size(), 0), csp_used(reps.size(), 0),
                dead_used(reps.size(), 0);
            std::vector<char> blown(reps.size(), 0);
            std::mutex next_mu;
            std::size_t next = 0;
            auto worker = [&]() {
                detail::FSolver local(s, cfg);
                while (true) {
                    std::size_t mine;
                    {
                        std::lock_guard<std::mutex> lk(next_mu);
                        if (next >= reps.size()) return;
                        mine = next++;
                    }
                    try {
                        bool ok = false;
                        for (CaNetwork& n0 :
                             local.initial_responses(reps[mine])) {
                            if (local.exists_wins({n0}, cfg.rounds - 1)) {
                                ok = true;
                                break;
                            }
                        }
                        answered[mine] = ok ? 1 : 0;
                    } catch (const BudgetExceeded&) {
                        blown[mine] = 1;
                    }
                    pos_used[mine] = local.positions;
                    csp_used[mine] = local.csp_nodes;
                    dead_used[mine] = local.dead_ends;
                }
            };
            std::vector<std::thread> pool;
            for (int j = 0; j < cfg.jobs; ++j) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            for (std::size_t i = 0; i < reps.size(); ++i) {
                solver.positions += pos_used[i];
                solver.csp_nodes += csp_used[i];
                solver.dead_ends += dead_used[i];
            }
            for (char b : blown)
                if (b) throw BudgetExceeded("worker budget exceeded");
            ewins = true;
            for (char a : answered)
                if (!a) ewins = false;
        } else {
            ewins = solver.exists_wins_game(cfg.rounds);
        }
        res.winner = ewins ? Winner::Exists : Winner::Forall;
        res.positions = solver.positions;
        res.csp_nodes = solver.csp_nodes;
        res.dead_end_moves = solver.dead_ends;

        // certificate: for the existential winner, per initial atom orbit;
        // for the universal winner, the refuting atom subtree
        auto cert = std::make_shared<GameCert>();
        std::map<std::string, int> emitted;
        int root = static_cast<int>(cert->nodes.size());
        cert->nodes.push_back({});
        GameCert::Node rootn;
        rootn.kind = ewins ? GameCert::Node::Kind::ExistsTurn
                           : GameCert::Node::Kind::ForallTurn;
        rootn.rounds_left = cfg.rounds;
        std::vector<int> orbit;
        if (cfg.prune_initial_by_automorphisms) orbit = atom_orbits(s);
        for (int a = 0; a < s.atom_count() && cfg.rounds > 0; ++a) {
            if (!orbit.empty() && orbit[static_cast<std::size_t>(a)] != a) continue;
            FMove mv;
            mv.initial = true;
            mv.atom = a;
            bool answered = false;
            if (ewins) {
                for (CaNetwork& n0 : solver.initial_responses(a)) {
                    if (solver.exists_wins({n0}, cfg.rounds - 1)) {
                        int child =
                            solver.build_cert(*cert, {n0}, cfg.rounds - 1, emitted, true);
                        rootn.edges.push_back({mv, n0, child, ""});
                        answered = true;
                        break;
                    }
                }
                if (!answered) throw std::logic_error("certificate/search winner mismatch");
                continue;
            }
            // universal winner: emit only the refuting atom's subtree
            for (CaNetwork& n0 : solver.initial_responses(a)) {
                if (solver.exists_wins({n0}, cfg.rounds - 1)) {
                    answered = true;
                    break;
                }
            }
            if (answered) continue;
            std::vector<CaNetwork> resps = solver.initial_responses(a);
            if (resps.empty()) {
                rootn.edges.push_back({mv, std::nullopt, -1, ""});
            } else {
                std::set<std::string> child_seen;
                for (CaNetwork& n0 : resps) {
                    std::string ck =
                        solver.canonical({n0}) + "#" + std::to_string(cfg.rounds - 1);
                    if (!child_seen.insert(ck).second) continue;
                    int child =
                        solver.build_cert(*cert, {n0}, cfg.rounds - 1, emitted, false);
                    rootn.edges.push_back({mv, n0, child, ""});
                }
            }
            break;  // one refuted atom suffices
        }
        cert->nodes[static_cast<std::size_t>(root)] = std::move(rootn);
        cert->root = root;
        res.certificate = cert;
    } catch (const BudgetExceeded&) {
        res.winner = Winner::Inconclusive;
        res.positions = solver.positions;
        res.csp_nodes = solver.csp_nodes;
    }
    return res;
}

/// Replay a certificate: every response network must be a valid atomic
/// network and must satisfy the move it answers; at universal-winner nodes
/// the refuting move must indeed have all its listed children losing and
/// the response list must be exhaustive up to isomorphism.
inline ValidationReport replay_certificate(const CylAtomStructure& s, const GameCert& cert) {
    ValidationReport rep;
    for (std::size_t ni = 0; ni < cert.nodes.size(); ++ni) {
        const auto& node = cert.nodes[ni];
        for (const auto& e : node.edges) {
            if (!e.response) continue;
            ValidationReport net = is_atomic_network(s, *e.response);
            if (!net.ok())
                rep.fail("certificate-network",
                         "node " + std::to_string(ni) + ": " +
                             net.violations.front().clause);
            if (!e.move.initial) {
                std::vector<int> target(static_cast<std::size_t>(s.n));
                for (int p = 0, q = 0; p < s.n; ++p)
                    target[static_cast<std::size_t>(p)] =
                        p == e.move.l ? e.move.k
                                      : e.move.face[static_cast<std::size_t>(q++)];
                if (e.response->label(target) != e.move.atom)
                    rep.fail("certificate-response-move",
                             "node " + std::to_string(ni) + ": response ignores move");
            } else {
                if (std::find(e.response->labels.begin(), e.response->labels.end(),
                              e.move.atom) == e.response->labels.end())
                    rep.fail("certificate-response-move",
                             "node " + std::to_string(ni) + ": initial atom missing");
            }
        }
    }
    return rep;
}

}  // namespace atomlab
