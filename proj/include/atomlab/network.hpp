#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/cyl.hpp"
#include "atomlab/rel.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// Atom-labelled square matrix over a relation atom structure; nodes are
/// 0..dim-1. Maddux's basic matrices are exactly the valid ones.
struct RaNetwork {
    int dim = 0;
    std::vector<int> label;  // dim*dim atom ids

    int at(int i, int j) const { return label[static_cast<std::size_t>(i) * dim + j]; }
    int& at(int i, int j) { return label[static_cast<std::size_t>(i) * dim + j]; }

    bool operator==(const RaNetwork& o) const { return dim == o.dim && label == o.label; }
    bool operator<(const RaNetwork& o) const {
        return dim != o.dim ? dim < o.dim : label < o.label;
    }

    /// Agreement on all pairs avoiding the listed nodes.
    bool equiv_off(const RaNetwork& o, std::initializer_list<int> off) const {
        auto excluded = [&](int v) {
            for (int w : off)
                if (v == w) return true;
            return false;
        };
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (!excluded(i) && !excluded(j) && at(i, j) != o.at(i, j)) return false;
        return true;
    }

    std::string to_string(const RelAtomStructure& s) const {
        std::string out;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                if (j) out += ' ';
                out += s.atom_names[static_cast<std::size_t>(at(i, j))];
            }
            if (i + 1 < dim) out += " / ";
        }
        return out;
    }
};

/// Basic-matrix conditions: identity diagonal, converse symmetry, and
/// (m_ik, m_kj, m_ij) consistent for all i,k,j.
inline ValidationReport is_atomic_network(const RelAtomStructure& s, const RaNetwork& m) {
    ValidationReport rep;
    for (int i = 0; i < m.dim; ++i)
        if (!s.is_identity(m.at(i, i)))
            rep.fail("matrix-diagonal-identity",
                     "m(" + std::to_string(i) + "," + std::to_string(i) + ")");
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
            if (m.at(i, j) != s.converse[static_cast<std::size_t>(m.at(j, i))])
                rep.fail("matrix-converse", "m(" + std::to_string(i) + "," +
                                                std::to_string(j) + ")");
    for (int i = 0; i < m.dim; ++i)
        for (int k = 0; k < m.dim; ++k)
            for (int j = 0; j < m.dim; ++j)
                if (!s.consistent(m.at(i, k), m.at(k, j), m.at(i, j)))
                    rep.fail("matrix-triangle",
                             "(" + std::to_string(i) + "," + std::to_string(k) + "," +
                                 std::to_string(j) + ")");
    return rep;
}

/// All n x n basic matrices. The diagonal ranges over identity atoms and
/// the upper triangle over all atoms, with triangle consistency pruned
/// during the fill; refuses when the raw search space exceeds the budget.
inline std::vector<RaNetwork> basic_matrices(const RelAtomStructure& s, int n,
                                             std::uint64_t budget = 200000000ull,
                                             std::size_t max_count = SIZE_MAX) {
    const int atoms = s.atom_count();
    double space = 1;
    for (int i = 0; i < n; ++i) space *= static_cast<double>(s.identity.count());
    for (int i = 0; i < n * (n - 1) / 2; ++i) space *= static_cast<double>(atoms);
    if (space > static_cast<double>(budget))
        throw BudgetExceeded("basic_matrices: search space " + std::to_string(space) +
                             " exceeds budget");

    std::vector<RaNetwork> out;
    RaNetwork m;
    m.dim = n;
    m.label.assign(static_cast<std::size_t>(n) * n, -1);
    // cell order: diagonal first, then upper triangle row-major
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i) cells.push_back({i, i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) cells.push_back({i, j});

    auto coherent_so_far = [&](int ci, int cj) {
        // check every completed triangle involving the new cell
        for (int k = 0; k < n; ++k) {
            auto ok = [&](int a, int b, int c) {
                return a < 0 || b < 0 || c < 0 || s.consistent(a, b, c);
            };
            if (!ok(m.at(ci, k), m.at(k, cj), m.at(ci, cj))) return false;
            if (!ok(m.at(cj, k), m.at(k, ci), m.at(cj, ci))) return false;
            if (!ok(m.at(ci, cj), m.at(cj, k), m.at(ci, k))) return false;
            if (!ok(m.at(k, ci), m.at(ci, cj), m.at(k, cj))) return false;
        }
        return true;
    };

    std::vector<std::size_t> idx(cells.size(), 0);
    std::size_t depth = 0;
    while (true) {
        if (out.size() >= max_count) break;
        if (depth == cells.size()) {
            out.push_back(m);
            --depth;
            auto [i, j] = cells[depth];
            m.at(i, j) = m.at(j, i) = -1;
            ++idx[depth];
            continue;
        }
        auto [i, j] = cells[depth];
        bool diag = i == j;
        bool placed = false;
        for (std::size_t& a = idx[depth]; a < static_cast<std::size_t>(atoms); ++a) {
            int atom = static_cast<int>(a);
            if (diag && !s.is_identity(atom)) continue;
            m.at(i, j) = atom;
            m.at(j, i) = s.converse[static_cast<std::size_t>(atom)];
            if (coherent_so_far(i, j)) {
                placed = true;
                break;
            }
            m.at(i, j) = m.at(j, i) = -1;
        }
        if (placed) {
            ++depth;
            if (depth < cells.size()) idx[depth] = 0;
        } else {
            m.at(i, j) = m.at(j, i) = -1;
            if (depth == 0) break;
            --depth;
            auto [pi, pj] = cells[depth];
            m.at(pi, pj) = m.at(pj, pi) = -1;
            ++idx[depth];
        }
    }
    return out;
}

/// The cylindric atom structure on a set of basic matrices: d_ij collects
/// matrices with identity at (i,j), equiv_i is agreement away from i, and
/// the swap relations are the node transpositions.
inline CylAtomStructure cyl_of_matrices(const RelAtomStructure& s,
                                        const std::vector<RaNetwork>& mats, int n) {
    CylAtomStructure c;
    c.n = n;
    c.rule_desc = "matrices of " + (s.rule_desc.empty() ? "explicit" : s.rule_desc);
    const int count = static_cast<int>(mats.size());
    std::map<RaNetwork, int> index;
    for (int a = 0; a < count; ++a) index[mats[static_cast<std::size_t>(a)]] = a;
    for (const auto& m : mats) c.atom_names.push_back("[" + m.to_string(s) + "]");

    c.diag.assign(static_cast<std::size_t>(n) * n, AtomSet(static_cast<std::size_t>(count)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < count; ++a)
                if (s.is_identity(mats[static_cast<std::size_t>(a)].at(i, j)))
                    c.diag[static_cast<std::size_t>(i) * n + j].set(static_cast<std::size_t>(a));

    for (int i = 0; i < n; ++i) {
        std::map<std::vector<int>, int> sig_class;
        std::vector<int> class_of(static_cast<std::size_t>(count));
        for (int a = 0; a < count; ++a) {
            std::vector<int> sig;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (x != i && y != i)
                        sig.push_back(mats[static_cast<std::size_t>(a)].at(x, y));
            auto it = sig_class.find(sig);
            if (it == sig_class.end())
                it = sig_class.emplace(std::move(sig), static_cast<int>(sig_class.size()))
                         .first;
            class_of[static_cast<std::size_t>(a)] = it->second;
        }
        c.equiv.push_back(AtomRel::partition(std::move(class_of), count));
    }

    c.has_swap = true;
    c.swap.assign(static_cast<std::size_t>(n) * n, AtomRel());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<std::vector<int>> adj(static_cast<std::size_t>(count));
            for (int a = 0; a < count; ++a) {
                RaNetwork im = mats[static_cast<std::size_t>(a)];
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        int sx = x == i ? j : x == j ? i : x;
                        int sy = y == i ? j : y == j ? i : y;
                        im.at(x, y) = mats[static_cast<std::size_t>(a)].at(sx, sy);
                    }
                auto it = index.find(im);
                if (it != index.end()) adj[static_cast<std::size_t>(a)].push_back(it->second);
            }
            c.swap[static_cast<std::size_t>(i) * n + j] = AtomRel::adjacency(std::move(adj));
        }
    return c;
}

/// Clauses (a)-(c) of an n-dimensional cylindric basis over the matrix set.
inline ValidationReport cylindric_basis_check(const RelAtomStructure& s,
                                              const std::vector<RaNetwork>& mats, int n) {
    ValidationReport rep;
    for (const auto& m : mats) {
        if (m.dim != n) {
            rep.fail("basis-member-dimension", m.to_string(s));
            return rep;
        }
        ValidationReport net = is_atomic_network(s, m);
        if (!net.ok()) {
            rep.fail("basis-member-not-basic", m.to_string(s));
            return rep;
        }
    }

    // (a) every atom appears as N(0,1)
    for (int a = 0; a < s.atom_count(); ++a) {
        bool found = false;
        for (const auto& m : mats)
            if (m.at(0, 1) == a) {
                found = true;
                break;
            }
        if (!found)
            rep.fail("basis-(a)", "atom " + s.atom_names[static_cast<std::size_t>(a)] +
                                      " never appears at (0,1)");
    }

    // off-z signatures: the matrix restricted to pairs avoiding z
    auto sig_off = [&](const RaNetwork& m, int z) {
        std::vector<int> sig;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != z && j != z) sig.push_back(m.at(i, j));
        return sig;
    };
    std::vector<std::map<std::vector<int>, std::vector<int>>> by_sig(
        static_cast<std::size_t>(n));
    std::vector<std::vector<int>> sig_id(static_cast<std::size_t>(n),
                                         std::vector<int>(mats.size()));
    for (int z = 0; z < n; ++z) {
        std::map<std::vector<int>, int> ids;
        for (std::size_t mi = 0; mi < mats.size(); ++mi) {
            auto sig = sig_off(mats[mi], z);
            auto it = ids.find(sig);
            if (it == ids.end()) it = ids.emplace(sig, static_cast<int>(ids.size())).first;
            sig_id[static_cast<std::size_t>(z)][mi] = it->second;
            by_sig[static_cast<std::size_t>(z)][sig].push_back(static_cast<int>(mi));
        }
    }

    // (b) substitution witness: N(x,y) <= a;b with z != x,y gives some M
    // with M equiv_z N, M(x,z) = a, M(z,y) = b
    for (std::size_t mi = 0; mi < mats.size() && rep.violations.size() < 64; ++mi) {
        const RaNetwork& m = mats[mi];
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    if (z == x || z == y) continue;
                    const auto& cands = by_sig[static_cast<std::size_t>(z)].at(sig_off(m, z));
                    std::vector<bool> present(
                        static_cast<std::size_t>(s.atom_count()) * s.atom_count(), false);
                    for (int wi : cands) {
                        const RaNetwork& w = mats[static_cast<std::size_t>(wi)];
                        present[static_cast<std::size_t>(w.at(x, z)) * s.atom_count() +
                                w.at(z, y)] = true;
                    }
                    for (int a = 0; a < s.atom_count(); ++a)
                        for (int b = 0; b < s.atom_count(); ++b) {
                            if (!s.consistent(a, b, m.at(x, y))) continue;
                            if (!present[static_cast<std::size_t>(a) * s.atom_count() + b])
                                rep.fail("basis-(b)",
                                         "N=[" + m.to_string(s) + "] (x,y,z)=(" +
                                             std::to_string(x) + "," + std::to_string(y) +
                                             "," + std::to_string(z) + ") a=" +
                                             s.atom_names[static_cast<std::size_t>(a)] +
                                             " b=" +
                                             s.atom_names[static_cast<std::size_t>(b)]);
                        }
                }
    }

    // (c) amalgamation: M equiv_xy N gives some L with M equiv_x L equiv_y N;
    // L exists iff the pair (off-x sig of M, off-y sig of N) is realized
    for (int x = 0; x < n && rep.violations.size() < 64; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            std::set<std::pair<int, int>> realized;
            for (std::size_t li = 0; li < mats.size(); ++li)
                realized.insert({sig_id[static_cast<std::size_t>(x)][li],
                                 sig_id[static_cast<std::size_t>(y)][li]});
            std::map<std::vector<int>, std::vector<int>> bucket;
            for (std::size_t mi = 0; mi < mats.size(); ++mi) {
                std::vector<int> sig;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != x && i != y && j != x && j != y)
                            sig.push_back(mats[mi].at(i, j));
                bucket[sig].push_back(static_cast<int>(mi));
            }
            for (const auto& [sig, ids] : bucket) {
                for (int mi : ids)
                    for (int ni : ids) {
                        if (!realized.count(
                                {sig_id[static_cast<std::size_t>(x)][static_cast<std::size_t>(mi)],
                                 sig_id[static_cast<std::size_t>(y)][static_cast<std::size_t>(ni)]})) {
                            rep.fail("basis-(c)",
                                     "M=[" + mats[static_cast<std::size_t>(mi)].to_string(s) +
                                         "] N=[" +
                                         mats[static_cast<std::size_t>(ni)].to_string(s) +
                                         "] (x,y)=(" + std::to_string(x) + "," +
                                         std::to_string(y) + ")");
                            if (rep.violations.size() >= 64) return rep;
                        }
                    }
            }
        }
    return rep;
}

}  // namespace atomlab
