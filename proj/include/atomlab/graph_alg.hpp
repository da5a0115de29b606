#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/cyl.hpp"
#include "atomlab/graph.hpp"
#include "atomlab/rel.hpp"

namespace atomlab {

/// Relation atom structure on {1'} u (G x n): all atoms self-converse, a
/// non-identity triple is consistent when the colours are not all equal,
/// or they are all equal and the three vertices span a graph edge.
inline RelAtomStructure alpha_of_graph(const Graph& g, int n) {
    if (n < 2) throw std::invalid_argument("alpha_of_graph: n >= 2 required");
    RelAtomStructure s;
    s.atom_names.push_back("1'");
    for (int u = 0; u < g.v; ++u)
        for (int i = 0; i < n; ++i)
            s.atom_names.push_back("(" + std::to_string(u) + "," + std::to_string(i) + ")");
    const int atoms = s.atom_count();
    s.identity = AtomSet(static_cast<std::size_t>(atoms));
    s.identity.set(0);
    s.converse.resize(static_cast<std::size_t>(atoms));
    for (int a = 0; a < atoms; ++a) s.converse[static_cast<std::size_t>(a)] = a;
    auto base = std::make_shared<Graph>(g);
    int nn = n;
    s.rule = [base, nn](int a, int b, int c) {
        if (a == 0 || b == 0 || c == 0) return identity_triple_clause(0, a, b, c);
        int ua = (a - 1) / nn, ia = (a - 1) % nn;
        int ub = (b - 1) / nn, ib = (b - 1) % nn;
        int uc = (c - 1) / nn, ic = (c - 1) % nn;
        if (!(ia == ib && ib == ic)) return true;
        return base->adjacent(ua, ub) || base->adjacent(ua, uc) || base->adjacent(ub, uc);
    };
    s.rule_desc = "alpha v=" + std::to_string(g.v) + " n=" + std::to_string(n);
    if (atoms <= 2048) s.finalize();
    return s;
}

/// One atom of eta(Gamma): a partial map K from coordinates to
/// (vertex, colour) labels (-1 when undefined) together with an equivalence
/// relation on coordinates stored as canonical class ids.
struct EtaAtom {
    std::vector<int> k;     // label id = vertex * n + colour, or -1
    std::vector<int> part;  // class id per coordinate, first-occurrence order

    bool operator<(const EtaAtom& o) const {
        if (k != o.k) return k < o.k;
        return part < o.part;
    }
    bool operator==(const EtaAtom& o) const { return k == o.k && part == o.part; }
};

namespace detail {

inline std::vector<int> canonical_partition(const std::vector<int>& raw) {
    std::vector<int> out(raw.size(), -1);
    std::map<int, int> ren;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto it = ren.find(raw[i]);
        if (it == ren.end()) it = ren.emplace(raw[i], static_cast<int>(ren.size())).first;
        out[i] = it->second;
    }
    return out;
}

inline void enum_partitions(int n, std::vector<int>& cur, int next_class,
                            std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int c = 0; c <= next_class; ++c) {
        cur.push_back(c);
        enum_partitions(n, cur, std::max(next_class, c + 1), out);
        cur.pop_back();
    }
}

inline std::string eta_atom_name(const EtaAtom& a, int n) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.k.size(); ++i) {
        if (i) s += ',';
        if (a.k[i] < 0)
            s += '-';
        else
            s += std::to_string(a.k[i] / n) + ":" + std::to_string(a.k[i] % n);
    }
    s += '|';
    for (std::size_t i = 0; i < a.part.size(); ++i) s += static_cast<char>('0' + a.part[i]);
    s += ')';
    return s;
}

}  // namespace detail

/// Atoms of eta(Gamma) for a finite graph, filtered by the admissibility
/// clauses: a discrete partition needs a total K with non-independent
/// range (judged on first coordinates); one doubleton class carries the
/// only two, equal, K values; coarser partitions carry no K at all.
inline std::vector<EtaAtom> eta_atoms(const Graph& g, int n) {
    std::vector<EtaAtom> out;
    const int labels = g.v * n;
    std::vector<std::vector<int>> parts;
    {
        std::vector<int> cur;
        detail::enum_partitions(n, cur, 0, parts);
    }
    for (const auto& p : parts) {
        int classes = 1;
        for (int c : p) classes = std::max(classes, c + 1);
        if (classes == n) {
            // total K, range not independent
            std::vector<int> k(static_cast<std::size_t>(n), 0);
            while (true) {
                bool has_edge = false;
                for (int i = 0; i < n && !has_edge; ++i)
                    for (int j = 0; j < n && !has_edge; ++j)
                        if (g.adjacent(k[static_cast<std::size_t>(i)] / n,
                                       k[static_cast<std::size_t>(j)] / n))
                            has_edge = true;
                if (has_edge) out.push_back({k, p});
                int at = n - 1;
                while (at >= 0 && k[static_cast<std::size_t>(at)] == labels - 1)
                    k[static_cast<std::size_t>(at--)] = 0;
                if (at < 0) break;
                ++k[static_cast<std::size_t>(at)];
            }
        } else if (classes == n - 1) {
            // the unique doubleton class carries K(i) = K(j)
            int ci = -1;
            std::vector<int> csize(static_cast<std::size_t>(classes), 0);
            for (int c : p) ++csize[static_cast<std::size_t>(c)];
            for (int c = 0; c < classes; ++c)
                if (csize[static_cast<std::size_t>(c)] == 2) ci = c;
            for (int lab = 0; lab < labels; ++lab) {
                EtaAtom a;
                a.part = p;
                a.k.assign(static_cast<std::size_t>(n), -1);
                for (int i = 0; i < n; ++i)
                    if (p[static_cast<std::size_t>(i)] == ci)
                        a.k[static_cast<std::size_t>(i)] = lab;
                out.push_back(std::move(a));
            }
        } else {
            out.push_back({std::vector<int>(static_cast<std::size_t>(n), -1), p});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Build the polyadic-equality atom structure eta(Gamma): D_ij by i ~ j,
/// equiv_i by agreement of K and the partition away from i, and the swap
/// relations by the coordinate transposition action.
inline CylAtomStructure eta_of_graph(const Graph& g, int n) {
    if (n < 3) throw std::invalid_argument("eta_of_graph: n >= 3 required");
    std::vector<EtaAtom> atoms = eta_atoms(g, n);
    const int count = static_cast<int>(atoms.size());
    std::map<EtaAtom, int> index;
    for (int a = 0; a < count; ++a) index[atoms[static_cast<std::size_t>(a)]] = a;

    CylAtomStructure s;
    s.n = n;
    s.rule_desc = "eta v=" + std::to_string(g.v) + " n=" + std::to_string(n);
    for (const auto& a : atoms) s.atom_names.push_back(detail::eta_atom_name(a, n));

    s.diag.assign(static_cast<std::size_t>(n) * n, AtomSet(static_cast<std::size_t>(count)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            AtomSet& d = s.diag[static_cast<std::size_t>(i) * n + j];
            for (int a = 0; a < count; ++a)
                if (atoms[static_cast<std::size_t>(a)].part[static_cast<std::size_t>(i)] ==
                    atoms[static_cast<std::size_t>(a)].part[static_cast<std::size_t>(j)])
                    d.set(static_cast<std::size_t>(a));
        }

    // equiv_i: (K,~) and (K',~') are related when K(i) = K'(i) and the
    // partitions agree away from i
    for (int i = 0; i < n; ++i) {
        std::map<std::pair<int, std::vector<int>>, int> sig_class;
        std::vector<int> class_of(static_cast<std::size_t>(count));
        for (int a = 0; a < count; ++a) {
            const EtaAtom& at = atoms[static_cast<std::size_t>(a)];
            std::vector<int> raw;
            for (int j = 0; j < n; ++j)
                if (j != i) raw.push_back(at.part[static_cast<std::size_t>(j)]);
            auto key = std::make_pair(at.k[static_cast<std::size_t>(i)],
                                      detail::canonical_partition(raw));
            auto it = sig_class.find(key);
            if (it == sig_class.end())
                it = sig_class.emplace(std::move(key), static_cast<int>(sig_class.size()))
                         .first;
            class_of[static_cast<std::size_t>(a)] = it->second;
        }
        s.equiv.push_back(AtomRel::partition(std::move(class_of), count));
    }

    // swap relations: the transposition (i j) acting on K and the partition
    s.has_swap = true;
    s.swap.assign(static_cast<std::size_t>(n) * n, AtomRel());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<std::vector<int>> adj(static_cast<std::size_t>(count));
            for (int a = 0; a < count; ++a) {
                EtaAtom im = atoms[static_cast<std::size_t>(a)];
                std::swap(im.k[static_cast<std::size_t>(i)], im.k[static_cast<std::size_t>(j)]);
                std::swap(im.part[static_cast<std::size_t>(i)],
                          im.part[static_cast<std::size_t>(j)]);
                im.part = detail::canonical_partition(im.part);
                auto it = index.find(im);
                if (it == index.end())
                    throw std::logic_error("eta: swap image is not an atom");
                adj[static_cast<std::size_t>(a)].push_back(it->second);
            }
            s.swap[static_cast<std::size_t>(i) * n + j] = AtomRel::adjacency(std::move(adj));
        }
    return s;
}

}  // namespace atomlab
