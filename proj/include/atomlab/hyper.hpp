#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/games.hpp"

namespace atomlab {

/// A network plus hyperlabels on all node sequences up to a tracked length
/// bound. Label 0 is lambda0; sequences longer than the bound are treated
/// as uniformly lambda0 by the bounded solver.
struct Hypernetwork {
    CaNetwork net;
    int hlen_cap = 0;
    std::map<std::vector<int>, int> hyper;

    static Hypernetwork total(CaNetwork base, int cap) {
        Hypernetwork h;
        h.net = std::move(base);
        h.hlen_cap = cap;
        std::vector<int> seq;
        h.fill_all(seq);
        return h;
    }

    void fill_all(std::vector<int>& seq) {
        if (!seq.empty() && !hyper.count(seq)) hyper[seq] = 0;
        if (static_cast<int>(seq.size()) == hlen_cap) return;
        for (int v : net.nodes) {
            seq.push_back(v);
            fill_all(seq);
            seq.pop_back();
        }
    }

    bool operator==(const Hypernetwork& o) const {
        return net == o.net && hyper == o.hyper;
    }
    bool operator<(const Hypernetwork& o) const {
        if (!(net == o.net)) return net < o.net;
        return hyper < o.hyper;
    }

    Hypernetwork renamed(const std::vector<int>& perm) const {
        Hypernetwork out;
        out.net = net.renamed(perm);
        out.hlen_cap = hlen_cap;
        for (const auto& [seq, lab] : hyper) {
            std::vector<int> im;
            for (int v : seq) im.push_back(perm[static_cast<std::size_t>(v)]);
            out.hyper[im] = lab;
        }
        return out;
    }

    std::string to_string() const {
        std::string s = net.to_string() + " hyper=";
        for (const auto& [seq, lab] : hyper) {
            s += '(';
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (i) s += ' ';
                s += std::to_string(seq[i]);
            }
            s += ")=" + std::to_string(lab) + ";";
        }
        return s;
    }
};

/// Node equivalence: x ~ y when some tuple starting (x, y, ...) sits under
/// d_01; lifted pointwise to sequences of equal length.
inline bool hyper_node_equiv(const CylAtomStructure& s, const CaNetwork& net, int x,
                             int y) {
    std::vector<int> t(static_cast<std::size_t>(net.n));
    t[0] = x;
    if (net.n >= 2) t[1] = y;
    std::size_t rest = 1;
    for (int i = 2; i < net.n; ++i) rest *= net.nodes.size();
    for (std::size_t r = 0; r < rest; ++r) {
        std::size_t v = r;
        for (int i = net.n - 1; i >= 2; --i) {
            t[static_cast<std::size_t>(i)] = net.nodes[v % net.nodes.size()];
            v /= net.nodes.size();
        }
        int lab = net.label(t);
        if (lab >= 0 && s.d(0, 1).test(static_cast<std::size_t>(lab))) return true;
    }
    return false;
}

/// lambda0-neatness plus the hyperlabel invariance clause; the atomic part
/// is validated through is_atomic_network.
inline ValidationReport validate_hypernetwork(const CylAtomStructure& s,
                                              const Hypernetwork& h) {
    ValidationReport rep = is_atomic_network(s, h.net);
    for (const auto& [seq, lab] : h.hyper)
        if (static_cast<int>(seq.size()) <= s.n && lab != 0)
            rep.fail("hypernetwork-lambda0-neat", "short hyperedge not lambda0");
    // x ~ y  =>  equal hyperlabels
    std::vector<std::vector<char>> eq(
        h.net.nodes.size(), std::vector<char>(h.net.nodes.size(), 0));
    for (std::size_t i = 0; i < h.net.nodes.size(); ++i)
        for (std::size_t j = 0; j < h.net.nodes.size(); ++j)
            eq[i][j] = hyper_node_equiv(s, h.net, h.net.nodes[i], h.net.nodes[j]) ? 1 : 0;
    auto loc = [&](int v) { return static_cast<std::size_t>(h.net.local(v)); };
    for (const auto& [sa, la] : h.hyper)
        for (const auto& [sb, lb] : h.hyper) {
            if (sa.size() != sb.size() || la == lb) continue;
            bool rel = true;
            for (std::size_t i = 0; i < sa.size() && rel; ++i)
                if (!eq[loc(sa[i])][loc(sb[i])]) rel = false;
            if (rel) {
                rep.fail("hypernetwork-invariance",
                         "equivalent hyperedges carry different labels");
                return rep;
            }
        }
    return rep;
}

/// Pullback along a partial map, hyperlabels included.
inline Hypernetwork hyper_apply_map(const Hypernetwork& h, const std::map<int, int>& theta) {
    Hypernetwork out;
    out.net = network_apply_map(h.net, theta);
    out.hlen_cap = h.hlen_cap;
    std::vector<int> seq;
    std::function<void()> fill = [&]() {
        if (!seq.empty()) {
            std::vector<int> img;
            for (int v : seq) img.push_back(theta.at(v));
            out.hyper[seq] = h.hyper.at(img);
        }
        if (static_cast<int>(seq.size()) == out.hlen_cap) return;
        for (int v : out.net.nodes) {
            seq.push_back(v);
            fill();
            seq.pop_back();
        }
    };
    fill();
    return out;
}

/// Restrictions agree on S (atomic labels and hyperlabels over S).
inline bool hyper_agree_on(const Hypernetwork& a, const Hypernetwork& b,
                           const std::vector<int>& common) {
    auto inside = [&](const std::vector<int>& seq) {
        for (int v : seq)
            if (!std::binary_search(common.begin(), common.end(), v)) return false;
        return true;
    };
    std::size_t cnt = 1;
    for (int i = 0; i < a.net.n; ++i) cnt *= common.size();
    std::vector<int> t(static_cast<std::size_t>(a.net.n));
    for (std::size_t r = 0; r < cnt; ++r) {
        std::size_t v = r;
        for (int i = a.net.n - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = common[v % common.size()];
            v /= common.size();
        }
        if (a.net.label(t) != b.net.label(t)) return false;
    }
    for (const auto& [seq, lab] : a.hyper)
        if (inside(seq) && b.hyper.at(seq) != lab) return false;
    return true;
}

struct HGameConfig {
    int rounds = 2;
    int node_budget = 4;
    int hlen_cap = 0;           // 0: defaults to n+1
    int hyperlabel_budget = 1;  // labels available beyond lambda0-forced edges
    bool memo = true;
    GameBudget budget;
    int free_class_cap = 10;  // hyperlabel choice classes per response
};

struct HMove {
    enum class Kind { Initial, Cyl, Transform, Amalgam } kind;
    int atom = -1;
    int net_index = -1;
    int l = -1;
    std::vector<int> face;
    int k = -1;
    std::map<int, int> theta;
    int other_index = -1;

    std::string to_string() const {
        switch (kind) {
            case Kind::Initial: return "init a=" + std::to_string(atom);
            case Kind::Cyl: {
                std::string s = "cyl N=" + std::to_string(net_index) +
                                " l=" + std::to_string(l) + " face=";
                for (std::size_t i = 0; i < face.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(face[i]);
                }
                return s + " k=" + std::to_string(k) + " b=" + std::to_string(atom);
            }
            case Kind::Transform: {
                std::string s = "transform N=" + std::to_string(net_index) + " theta=";
                for (const auto& [x, y] : theta)
                    s += std::to_string(x) + ":" + std::to_string(y) + ",";
                return s;
            }
            case Kind::Amalgam:
                return "amalgam M=" + std::to_string(net_index) +
                       " N=" + std::to_string(other_index);
        }
        return "?";
    }
};

struct HCert {
    struct Edge {
        HMove move;
        std::optional<Hypernetwork> response;
        int child = -1;
    };
    struct Node {
        GameCert::Node::Kind kind;
        int rounds_left = 0;
        std::vector<Edge> edges;
    };
    std::vector<Node> nodes;
    int root = -1;
};

struct HGameResult {
    Winner winner = Winner::Inconclusive;
    int rounds = 0;
    std::uint64_t positions = 0;
    std::uint64_t csp_nodes = 0;
    std::string budget_echo;
    std::shared_ptr<HCert> certificate;
};

namespace detail {

struct HSolver {
    const CylAtomStructure& s;
    HGameConfig cfg;
    RelMasks rm;
    std::uint64_t positions = 0;
    std::uint64_t csp_nodes = 0;
    std::map<std::string, bool> memo;
    std::vector<std::vector<int>> perms;

    HSolver(const CylAtomStructure& str, HGameConfig c) : s(str), cfg(c), rm(RelMasks::build(str)) {
        if (cfg.hlen_cap == 0) cfg.hlen_cap = s.n + 1;
        std::vector<int> p(static_cast<std::size_t>(cfg.node_budget));
        for (int i = 0; i < cfg.node_budget; ++i) p[static_cast<std::size_t>(i)] = i;
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }

    std::string canonical(const std::vector<Hypernetwork>& pos) const {
        std::string best;
        for (const auto& perm : perms) {
            std::vector<std::string> parts;
            for (const auto& h : pos) parts.push_back(h.renamed(perm).to_string());
            std::sort(parts.begin(), parts.end());
            std::string key;
            for (const auto& p : parts) key += p + "|";
            if (best.empty() || key < best) best = key;
        }
        return best;
    }

    /// Hyperlabel completion: assign labels to unset hyperedges (-1),
    /// lambda0 on short ones, free classes over the label budget.
    template <typename F>
    bool complete_hyper(Hypernetwork& h, F&& emit) {
        std::vector<std::vector<char>> eq(
            h.net.nodes.size(), std::vector<char>(h.net.nodes.size(), 0));
        for (std::size_t i = 0; i < h.net.nodes.size(); ++i)
            for (std::size_t j = 0; j < h.net.nodes.size(); ++j)
                eq[i][j] =
                    hyper_node_equiv(s, h.net, h.net.nodes[i], h.net.nodes[j]) ? 1 : 0;
        auto loc = [&](int v) { return static_cast<std::size_t>(h.net.local(v)); };
        auto related = [&](const std::vector<int>& a, const std::vector<int>& b) {
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (!eq[loc(a[i])][loc(b[i])]) return false;
            return true;
        };
        // union-find over hyperedges by ~
        std::vector<const std::vector<int>*> seqs;
        for (auto& [seq, lab] : h.hyper) seqs.push_back(&seq);
        std::vector<int> rep(seqs.size());
        for (std::size_t i = 0; i < seqs.size(); ++i) rep[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (rep[static_cast<std::size_t>(x)] != x) x = rep[static_cast<std::size_t>(x)];
            return x;
        };
        for (std::size_t i = 0; i < seqs.size(); ++i)
            for (std::size_t j = i + 1; j < seqs.size(); ++j)
                if (related(*seqs[i], *seqs[j]))
                    rep[static_cast<std::size_t>(find(static_cast<int>(i)))] =
                        find(static_cast<int>(j));
        // class label: forced by any set member or shortness
        std::map<int, int> forced;
        std::vector<int> free_classes;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            int c = find(static_cast<int>(i));
            int lab = h.hyper.at(*seqs[i]);
            int want = static_cast<int>(seqs[i]->size()) <= s.n ? 0 : -1;
            if (lab < 0 && want < 0) continue;
            int v = lab >= 0 ? lab : want;
            if (want >= 0 && lab >= 0 && lab != want) return false;
            auto it = forced.find(c);
            if (it == forced.end())
                forced[c] = v;
            else if (it->second != v)
                return false;
        }
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            int c = find(static_cast<int>(i));
            if (!forced.count(c) &&
                std::find(free_classes.begin(), free_classes.end(), c) ==
                    free_classes.end())
                free_classes.push_back(c);
        }
        // a single available label leaves nothing to enumerate
        if (cfg.hyperlabel_budget > 1 &&
            static_cast<int>(free_classes.size()) > cfg.free_class_cap)
            throw BudgetExceeded("hyperlabel class budget exceeded");
        std::vector<int> choice(free_classes.size(), 0);
        while (true) {
            Hypernetwork done = h;
            for (auto& [seq, lab] : done.hyper) {
                int c = find(static_cast<int>(
                    std::find_if(seqs.begin(), seqs.end(),
                                 [&](const std::vector<int>* p) { return *p == seq; }) -
                    seqs.begin()));
                auto it = forced.find(c);
                if (it != forced.end())
                    lab = it->second;
                else {
                    std::size_t fi = static_cast<std::size_t>(
                        std::find(free_classes.begin(), free_classes.end(), c) -
                        free_classes.begin());
                    lab = choice[fi];
                }
            }
            if (emit(const_cast<const Hypernetwork&>(done))) return true;
            // next assignment
            std::size_t at = 0;
            while (at < choice.size() && ++choice[at] >= cfg.hyperlabel_budget)
                choice[at++] = 0;
            if (at >= choice.size()) return false;
        }
    }

    template <typename F>
    bool responses_to(const std::vector<Hypernetwork>& pos, const HMove& mv, F&& emit) {
        switch (mv.kind) {
            case HMove::Kind::Initial: {
                for (int sz = 1; sz <= s.n; ++sz) {
                    std::vector<int> ids;
                    for (int i = 0; i < sz; ++i) ids.push_back(i);
                    CaNetwork base = CaNetwork::empty(s.n, ids);
                    bool stop = enumerate_completions(
                        s, rm, base, csp_nodes, cfg.budget.max_csp_nodes,
                        [&](const CaNetwork& done) {
                            if (std::find(done.labels.begin(), done.labels.end(),
                                          mv.atom) == done.labels.end())
                                return false;
                            Hypernetwork h;
                            h.net = done;
                            h.hlen_cap = cfg.hlen_cap;
                            std::vector<int> seq;
                            h.fill_all(seq);
                            for (auto& [sq, lab] : h.hyper)
                                if (static_cast<int>(sq.size()) > s.n) lab = -1;
                            return complete_hyper(h, emit);
                        });
                    if (stop) return true;
                }
                return false;
            }
            case HMove::Kind::Cyl: {
                const Hypernetwork& from = pos[static_cast<std::size_t>(mv.net_index)];
                std::vector<int> new_nodes = from.net.nodes;
                new_nodes.push_back(mv.k);
                CaNetwork m = CaNetwork::empty(s.n, new_nodes);
                for (std::size_t idx = 0; idx < m.tuple_count(); ++idx) {
                    std::vector<int> t = m.tuple_at(idx);
                    if (std::find(t.begin(), t.end(), mv.k) == t.end())
                        m.labels[idx] = from.net.label(t);
                }
                std::vector<int> target(static_cast<std::size_t>(s.n));
                for (int p = 0, q = 0; p < s.n; ++p)
                    target[static_cast<std::size_t>(p)] =
                        p == mv.l ? mv.k : mv.face[static_cast<std::size_t>(q++)];
                m.labels[m.tuple_index(target)] = mv.atom;
                return enumerate_completions(
                    s, rm, m, csp_nodes, cfg.budget.max_csp_nodes,
                    [&](const CaNetwork& done) {
                        Hypernetwork h;
                        h.net = done;
                        h.hlen_cap = cfg.hlen_cap;
                        std::vector<int> seq;
                        h.fill_all(seq);
                        for (auto& [sq, lab] : h.hyper) {
                            bool has_k =
                                std::find(sq.begin(), sq.end(), mv.k) != sq.end();
                            lab = has_k ? -1 : from.hyper.at(sq);
                        }
                        return complete_hyper(h, emit);
                    });
            }
            case HMove::Kind::Transform: {
                const Hypernetwork& from = pos[static_cast<std::size_t>(mv.net_index)];
                Hypernetwork forced = hyper_apply_map(from, mv.theta);
                if (!validate_hypernetwork(s, forced).ok()) return false;
                return emit(const_cast<const Hypernetwork&>(forced));
            }
            case HMove::Kind::Amalgam: {
                const Hypernetwork& a = pos[static_cast<std::size_t>(mv.net_index)];
                const Hypernetwork& b = pos[static_cast<std::size_t>(mv.other_index)];
                std::vector<int> nodes = a.net.nodes;
                for (int v : b.net.nodes)
                    if (!a.net.has_node(v)) nodes.push_back(v);
                CaNetwork m = CaNetwork::empty(s.n, nodes);
                for (std::size_t idx = 0; idx < m.tuple_count(); ++idx) {
                    std::vector<int> t = m.tuple_at(idx);
                    bool in_a = true, in_b = true;
                    for (int v : t) {
                        if (!a.net.has_node(v)) in_a = false;
                        if (!b.net.has_node(v)) in_b = false;
                    }
                    if (in_a)
                        m.labels[idx] = a.net.label(t);
                    else if (in_b)
                        m.labels[idx] = b.net.label(t);
                }
                return enumerate_completions(
                    s, rm, m, csp_nodes, cfg.budget.max_csp_nodes,
                    [&](const CaNetwork& done) {
                        Hypernetwork h;
                        h.net = done;
                        h.hlen_cap = cfg.hlen_cap;
                        std::vector<int> seq;
                        h.fill_all(seq);
                        for (auto& [sq, lab] : h.hyper) {
                            bool in_a = true, in_b = true;
                            for (int v : sq) {
                                if (!a.net.has_node(v)) in_a = false;
                                if (!b.net.has_node(v)) in_b = false;
                            }
                            if (in_a)
                                lab = a.hyper.at(sq);
                            else if (in_b)
                                lab = b.hyper.at(sq);
                            else
                                lab = -1;
                        }
                        return complete_hyper(h, emit);
                    });
            }
        }
        return false;
    }

    std::vector<HMove> forall_moves(const std::vector<Hypernetwork>& pos) const {
        std::vector<HMove> out;
        AtomSet used_anywhere(static_cast<std::size_t>(cfg.node_budget));
        for (const auto& other : pos)
            for (int v : other.net.nodes) used_anywhere.set(static_cast<std::size_t>(v));
        for (std::size_t ni = 0; ni < pos.size(); ++ni) {
            const Hypernetwork& h = pos[ni];
            // cylindrifier moves need a node outside this network; ids fresh
            // for the whole position are interchangeable, ids living in other
            // networks are distinct choices (they matter for amalgamation)
            std::vector<int> new_nodes;
            bool fresh_taken = false;
            for (int cand = 0; cand < cfg.node_budget; ++cand) {
                if (h.net.has_node(cand)) continue;
                bool fresh = !used_anywhere.test(static_cast<std::size_t>(cand));
                if (fresh) {
                    if (fresh_taken) continue;
                    fresh_taken = true;
                }
                new_nodes.push_back(cand);
            }
            for (int k : new_nodes) {
                std::size_t face_count = 1;
                for (int i = 0; i < s.n - 1; ++i) face_count *= h.net.nodes.size();
                for (std::size_t fi = 0; fi < face_count; ++fi) {
                    std::vector<int> face(static_cast<std::size_t>(s.n - 1));
                    std::size_t rest = fi;
                    for (int p = s.n - 2; p >= 0; --p) {
                        face[static_cast<std::size_t>(p)] =
                            h.net.nodes[rest % h.net.nodes.size()];
                        rest /= h.net.nodes.size();
                    }
                    for (int l = 0; l < s.n; ++l) {
                        std::vector<int> probe(static_cast<std::size_t>(s.n));
                        for (int p = 0, q = 0; p < s.n; ++p)
                            probe[static_cast<std::size_t>(p)] =
                                p == l ? h.net.nodes[0]
                                       : face[static_cast<std::size_t>(q++)];
                        int base = h.net.label(probe);
                        for (int b :
                             s.equiv[static_cast<std::size_t>(l)].neighbours(base)) {
                            HMove mv;
                            mv.kind = HMove::Kind::Cyl;
                            mv.net_index = static_cast<int>(ni);
                            mv.l = l;
                            mv.face = face;
                            mv.k = k;
                            mv.atom = b;
                            out.push_back(std::move(mv));
                        }
                    }
                }
            }
            // transformation moves: partial finite surjections onto nodes
            std::vector<std::map<int, int>> thetas;
            std::map<int, int> cur;
            std::function<void(int)> gen = [&](int x) {
                if (x == cfg.node_budget) {
                    std::set<int> image;
                    for (const auto& [a, b] : cur) image.insert(b);
                    if (image.size() == h.net.nodes.size() && !cur.empty())
                        thetas.push_back(cur);
                    return;
                }
                gen(x + 1);  // x not in dom
                for (int y : h.net.nodes) {
                    cur[x] = y;
                    gen(x + 1);
                    cur.erase(x);
                }
            };
            gen(0);
            for (auto& th : thetas) {
                HMove mv;
                mv.kind = HMove::Kind::Transform;
                mv.net_index = static_cast<int>(ni);
                mv.theta = std::move(th);
                out.push_back(std::move(mv));
            }
            // amalgamation moves
            for (std::size_t nj = 0; nj < pos.size(); ++nj) {
                if (nj == ni) continue;
                std::vector<int> common;
                for (int v : h.net.nodes)
                    if (pos[nj].net.has_node(v)) common.push_back(v);
                if (common.empty()) continue;
                if (!hyper_agree_on(h, pos[nj], common)) continue;
                HMove mv;
                mv.kind = HMove::Kind::Amalgam;
                mv.net_index = static_cast<int>(ni);
                mv.other_index = static_cast<int>(nj);
                out.push_back(std::move(mv));
            }
        }
        return out;
    }

    bool exists_wins(std::vector<Hypernetwork> pos, int rounds_left) {
        if (rounds_left == 0) return true;
        if (++positions > cfg.budget.max_positions)
            throw BudgetExceeded("position budget exceeded");
        if ((positions & 255) == 0 && cfg.budget.expired())
            throw BudgetExceeded("wall budget exceeded");
        std::string key;
        if (cfg.memo) {
            key = canonical(pos) + "#" + std::to_string(rounds_left);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        bool result = true;
        for (const HMove& mv : forall_moves(pos)) {
            bool ok = false;
            responses_to(pos, mv, [&](const Hypernetwork& resp) {
                std::vector<Hypernetwork> next = pos;
                if (std::find(next.begin(), next.end(), resp) == next.end())
                    next.push_back(resp);
                if (exists_wins(next, rounds_left - 1)) {
                    ok = true;
                    return true;
                }
                return false;
            });
            if (!ok) {
                result = false;
                break;
            }
        }
        if (cfg.memo) memo[key] = result;
        return result;
    }
};

}  // namespace detail

/// Bounded solver for the hypernetwork game with cylindrifier,
/// transformation and amalgamation moves, all budgets explicit.
inline HGameResult solve_H(const CylAtomStructure& s, const HGameConfig& cfg_in) {
    HGameConfig cfg = cfg_in;
    if (cfg.node_budget < s.n)
        throw std::invalid_argument("solve_H: node budget below dimension");
    HGameResult res;
    res.rounds = cfg.rounds;
    res.budget_echo =
        "rounds=" + std::to_string(cfg.rounds) + " nodes=" +
        std::to_string(cfg.node_budget) + " hyperlabels=" +
        std::to_string(cfg.hyperlabel_budget) + " hlen_cap=" +
        std::to_string(cfg.hlen_cap == 0 ? s.n + 1 : cfg.hlen_cap);
    detail::HSolver solver(s, cfg);
    try {
        bool ewins = true;
        std::vector<int> orbit = atom_orbits(s);
        for (int a = 0; a < s.atom_count() && cfg.rounds > 0; ++a) {
            if (orbit[static_cast<std::size_t>(a)] != a) continue;
            HMove mv;
            mv.kind = HMove::Kind::Initial;
            mv.atom = a;
            bool ok = false;
            solver.responses_to({}, mv, [&](const Hypernetwork& h0) {
                if (solver.exists_wins({h0}, cfg.rounds - 1)) {
                    ok = true;
                    return true;
                }
                return false;
            });
            if (!ok) {
                ewins = false;
                break;
            }
        }
        res.winner = ewins ? Winner::Exists : Winner::Forall;
        res.positions = solver.positions;
        res.csp_nodes = solver.csp_nodes;
    } catch (const BudgetExceeded&) {
        res.winner = Winner::Inconclusive;
        res.positions = solver.positions;
        res.csp_nodes = solver.csp_nodes;
    }
    return res;
}

}  // namespace atomlab
