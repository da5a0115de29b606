#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/monk.hpp"
#include "atomlab/rel.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// An atom of the full (untruncated) Monk structure.
struct FAtom {
    bool id = false;
    int coset = -1;
    std::uint32_t index = 0;

    bool operator==(const FAtom& o) const {
        return id == o.id && coset == o.coset && index == o.index;
    }
    bool operator<(const FAtom& o) const {
        if (id != o.id) return id;
        if (coset != o.coset) return coset < o.coset;
        return index < o.index;
    }
};

/// The two ultrafilter kinds of the term algebra: principal U^a and the
/// block ultrafilters U^W of infinite blocks. No other ultrafilter object
/// exists here.
struct UfLabel {
    bool principal = true;
    FAtom atom;      // when principal
    int block = -1;  // when not

    static UfLabel id_label() {
        UfLabel u;
        u.principal = true;
        u.atom.id = true;
        return u;
    }
    static UfLabel principal_label(int coset, std::uint32_t index) {
        UfLabel u;
        u.principal = true;
        u.atom = {false, coset, index};
        return u;
    }
    static UfLabel block_label(int block) {
        UfLabel u;
        u.principal = false;
        u.block = block;
        return u;
    }

    bool is_id() const { return principal && atom.id; }
    bool operator==(const UfLabel& o) const {
        return principal == o.principal &&
               (principal ? atom == o.atom : block == o.block);
    }
    bool operator!=(const UfLabel& o) const { return !(*this == o); }
    bool operator<(const UfLabel& o) const {
        if (principal != o.principal) return principal;
        return principal ? atom < o.atom : block < o.block;
    }

    std::string to_string(const MonkFamily& fam) const {
        if (is_id()) return "U^Id";
        if (principal)
            return "U^a" + std::to_string(atom.index) + "^" + fam.coset_name(atom.coset);
        return "U^" + fam.block_name(block);
    }
};

inline MonkElement uf_principal_element(std::shared_ptr<const MonkFamily> fam,
                                        const FAtom& a) {
    if (a.id) return MonkElement::identity_elem(std::move(fam));
    return MonkElement::atom(std::move(fam), a.coset, a.index);
}

struct UfConsistency {
    bool consistent = false;
    bool multi_block = false;  // two or more block labels in the triple
};

/// Consistency of an ultrafilter triple. Identity labels force the other
/// two equal; principal triples reduce to atom consistency; a block label
/// against two principals asks whether the composition meets the block
/// infinitely, computed symbolically. Triples with two or more block
/// labels always have witnesses of unbounded index and are flagged so
/// callers can see which rule decided them.
inline UfConsistency uf_triple_consistent_ex(std::shared_ptr<const MonkFamily> fam,
                                             const UfLabel& f, const UfLabel& g,
                                             const UfLabel& k) {
    UfConsistency out;
    // identity clauses
    if (f.is_id() || g.is_id() || k.is_id()) {
        out.consistent = (!f.is_id() || g == k) && (!g.is_id() || f == k) &&
                         (!k.is_id() || f == g);
        return out;
    }
    int blocks = (f.principal ? 0 : 1) + (g.principal ? 0 : 1) + (k.principal ? 0 : 1);
    if (blocks == 0) {
        out.consistent = fam->triple_ok(f.atom.coset, f.atom.index, g.atom.coset,
                                        g.atom.index, k.atom.coset, k.atom.index);
        return out;
    }
    if (blocks == 1) {
        const UfLabel& w = !f.principal ? f : !g.principal ? g : k;
        const UfLabel& a = f.principal ? f : g;
        const UfLabel& b = (&a == &f) ? (g.principal ? g : k) : k;
        MonkElement comp = monk_compose(uf_principal_element(fam, a.atom),
                                        uf_principal_element(fam, b.atom));
        for (int c : fam->coset_by_block[static_cast<std::size_t>(w.block)])
            if (comp.coset[static_cast<std::size_t>(c)].is_cofinite()) {
                out.consistent = true;
                return out;
            }
        out.consistent = false;
        return out;
    }
    out.consistent = true;
    out.multi_block = true;
    return out;
}

inline bool uf_triple_consistent(std::shared_ptr<const MonkFamily> fam, const UfLabel& f,
                                 const UfLabel& g, const UfLabel& k) {
    return uf_triple_consistent_ex(std::move(fam), f, g, k).consistent;
}

/// Complete symmetric Uf-labelling of a finite node set; loops carry U^Id.
struct ColouredGraph {
    std::shared_ptr<const MonkFamily> fam;
    int nodes = 0;
    std::vector<UfLabel> labels;  // nodes*nodes

    static ColouredGraph single(std::shared_ptr<const MonkFamily> f) {
        ColouredGraph g;
        g.fam = std::move(f);
        g.nodes = 1;
        g.labels.assign(1, UfLabel::id_label());
        return g;
    }

    const UfLabel& label(int x, int y) const {
        return labels[static_cast<std::size_t>(x) * nodes + y];
    }
    void set_label(int x, int y, const UfLabel& l) {
        labels[static_cast<std::size_t>(x) * nodes + y] = l;
        labels[static_cast<std::size_t>(y) * nodes + x] = l;
    }

    ValidationReport validate() const {
        ValidationReport rep;
        for (int x = 0; x < nodes; ++x)
            for (int y = 0; y < nodes; ++y) {
                if ((label(x, y).is_id()) != (x == y))
                    rep.fail("coloured-(i) l(x,y)=U^Id iff x=y",
                             "(" + std::to_string(x) + "," + std::to_string(y) + ")");
                if (label(x, y) != label(y, x))
                    rep.fail("coloured-(ii) symmetry",
                             "(" + std::to_string(x) + "," + std::to_string(y) + ")");
            }
        for (int x = 0; x < nodes && rep.violations.size() < 64; ++x)
            for (int y = 0; y < nodes; ++y)
                for (int z = 0; z < nodes; ++z)
                    if (!uf_triple_consistent(fam, label(x, y), label(x, z), label(y, z)))
                        rep.fail("coloured-(iii) triangle",
                                 "(" + std::to_string(x) + "," + std::to_string(y) + "," +
                                     std::to_string(z) + ")");
        return rep;
    }
};

struct ExtendResult {
    std::optional<ColouredGraph> graph;
    ValidationReport report;
};

/// Add one witness node z with l(z,x) = F, l(z,y) = K; every other edge at
/// z takes the least block label keeping both of its triangles consistent.
inline ExtendResult extend_coloured_graph(const ColouredGraph& gr, int x, int y,
                                          const UfLabel& f, const UfLabel& k) {
    ExtendResult res;
    if (!uf_triple_consistent(gr.fam, gr.label(x, y), f, k))
        throw std::invalid_argument("extend_coloured_graph: triple not consistent");
    ColouredGraph g2;
    g2.fam = gr.fam;
    g2.nodes = gr.nodes + 1;
    g2.labels.assign(static_cast<std::size_t>(g2.nodes) * g2.nodes, UfLabel::id_label());
    for (int a = 0; a < gr.nodes; ++a)
        for (int b = 0; b < gr.nodes; ++b)
            g2.labels[static_cast<std::size_t>(a) * g2.nodes + b] = gr.label(a, b);
    int z = gr.nodes;
    g2.set_label(z, x, f);
    if (y != x) g2.set_label(z, y, k);
    for (int p = 0; p < gr.nodes; ++p) {
        if (p == x || p == y) continue;
        bool placed = false;
        for (int w = 0; w < gr.fam->block_count() && !placed; ++w) {
            UfLabel cand = UfLabel::block_label(w);
            if (uf_triple_consistent(gr.fam, cand, f, g2.label(x, p)) &&
                uf_triple_consistent(gr.fam, cand, k, g2.label(y, p))) {
                g2.set_label(z, p, cand);
                placed = true;
            }
        }
        if (!placed) {
            res.report.fail("extension-no-admissible-block",
                            "node p=" + std::to_string(p) +
                                "; would falsify the construction at these parameters");
            return res;
        }
    }
    res.graph = std::move(g2);
    return res;
}

/// The label universe used by the bounded builder: principal labels up to
/// the family's index bound plus all block labels, in a fixed order.
inline std::vector<UfLabel> uf_universe(const MonkFamily& fam) {
    std::vector<UfLabel> out;
    out.push_back(UfLabel::id_label());
    for (int c = 0; c < fam.coset_count(); ++c)
        for (int i = 0; i < fam.params.index_bound; ++i)
            out.push_back(UfLabel::principal_label(c, static_cast<std::uint32_t>(i)));
    for (int b = 0; b < fam.block_count(); ++b) out.push_back(UfLabel::block_label(b));
    return out;
}

struct BuildGraphResult {
    ColouredGraph graph;
    std::uint64_t obligations_discharged = 0;
    std::uint64_t obligations_pending = 0;  // consistent triples still unwitnessed
};

/// Step-by-step completion: witness obligations (x, y, F, K) are
/// discharged in deterministic round-robin order over node pairs until the
/// node budget is reached.
inline BuildGraphResult build_complete_graph(const MonkParams& p, int size) {
    auto fam = MonkFamily::make(p);
    BuildGraphResult res;
    res.graph = ColouredGraph::single(fam);
    if (size < 1) throw std::invalid_argument("build_complete_graph: size >= 1");
    std::vector<UfLabel> uni = uf_universe(*fam);

    auto witnessed = [&](const ColouredGraph& g, int x, int y, const UfLabel& f,
                         const UfLabel& k) {
        for (int z = 0; z < g.nodes; ++z)
            if (g.label(z, x) == f && g.label(z, y) == k) return true;
        return false;
    };

    bool progress = true;
    while (res.graph.nodes < size && progress) {
        progress = false;
        int pairs = res.graph.nodes * res.graph.nodes;
        for (int pair = 0; pair < pairs && res.graph.nodes < size; ++pair) {
            int x = pair / res.graph.nodes, y = pair % res.graph.nodes;
            // first unmet obligation on this pair, then move to the next pair
            for (const UfLabel& f : uni) {
                bool done = false;
                for (const UfLabel& k : uni) {
                    if (!uf_triple_consistent(fam, res.graph.label(x, y), f, k)) continue;
                    if (witnessed(res.graph, x, y, f, k)) continue;
                    ExtendResult ext = extend_coloured_graph(res.graph, x, y, f, k);
                    if (!ext.graph)
                        throw std::runtime_error("build_complete_graph: " +
                                                 ext.report.violations.front().witness);
                    res.graph = std::move(*ext.graph);
                    ++res.obligations_discharged;
                    progress = true;
                    done = true;
                    break;
                }
                if (done) break;
            }
        }
    }
    // count what remains open at the bound
    for (int x = 0; x < res.graph.nodes; ++x)
        for (int y = 0; y < res.graph.nodes; ++y)
            for (const UfLabel& f : uni)
                for (const UfLabel& k : uni)
                    if (uf_triple_consistent(fam, res.graph.label(x, y), f, k) &&
                        !witnessed(res.graph, x, y, f, k))
                        ++res.obligations_pending;
    return res;
}

/// rep(X) = {(u,v) : X in l(u,v)} restricted to the finite graph.
inline std::vector<std::pair<int, int>> rep_of(const ColouredGraph& g,
                                               const MonkElement& x) {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < g.nodes; ++u)
        for (int v = 0; v < g.nodes; ++v) {
            const UfLabel& l = g.label(u, v);
            bool member;
            if (l.principal)
                member = l.is_id() ? x.id
                                   : x.coset[static_cast<std::size_t>(l.atom.coset)]
                                         .contains(l.atom.index);
            else {
                member = false;
                for (int c : g.fam->coset_by_block[static_cast<std::size_t>(l.block)])
                    if (x.coset[static_cast<std::size_t>(c)].is_cofinite()) member = true;
            }
            if (member) out.push_back({u, v});
        }
    return out;
}

/// Boolean-homomorphism, identity, converse and composition-containment
/// checks of rep over sampled term-algebra elements.
inline ValidationReport rep_check(const MonkParams& p, const ColouredGraph& g,
                                  int sample_pairs = 20, std::uint64_t seed = 0) {
    ValidationReport rep;
    auto fam = g.fam;
    rep.note("mode: finite graph of " + std::to_string(g.nodes) +
             " nodes; symbolic elements; seed=" + std::to_string(seed));
    ValidationReport structural = g.validate();
    for (auto& v : structural.violations) rep.violations.push_back(v);

    // rep(Id) is the diagonal
    MonkElement id_elem = MonkElement::identity_elem(fam);
    auto diag = rep_of(g, id_elem);
    for (auto [u, v] : diag)
        if (u != v) rep.fail("rep-identity-diagonal", "(" + std::to_string(u) + "," +
                                                          std::to_string(v) + ")");
    if (static_cast<int>(diag.size()) != g.nodes)
        rep.fail("rep-identity-diagonal", "diagonal size " + std::to_string(diag.size()));

    std::mt19937_64 rng(seed);
    auto sample_element = [&]() {
        MonkElement e = MonkElement::zero(fam);
        int atoms = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < atoms; ++i) {
            int c = static_cast<int>(rng() % static_cast<std::uint64_t>(fam->coset_count()));
            std::uint32_t idx = static_cast<std::uint32_t>(
                rng() % static_cast<std::uint64_t>(p.index_bound));
            e = e | MonkElement::atom(fam, c, idx);
        }
        if (rng() % 3 == 0) e = e.complement();
        return e;
    };

    auto sorted = [](std::vector<std::pair<int, int>> v) {
        std::sort(v.begin(), v.end());
        return v;
    };

    for (int t = 0; t < sample_pairs && rep.violations.size() < 64; ++t) {
        MonkElement x = sample_element(), y = sample_element();
        // boolean homomorphism
        auto ru = sorted(rep_of(g, x | y));
        auto rx = sorted(rep_of(g, x)), ry = sorted(rep_of(g, y));
        std::vector<std::pair<int, int>> join;
        std::set_union(rx.begin(), rx.end(), ry.begin(), ry.end(),
                       std::back_inserter(join));
        if (ru != join) rep.fail("rep-join-homomorphism", "sample " + std::to_string(t));
        auto rc = sorted(rep_of(g, x.complement()));
        std::vector<std::pair<int, int>> all;
        for (int u = 0; u < g.nodes; ++u)
            for (int v = 0; v < g.nodes; ++v) all.push_back({u, v});
        std::vector<std::pair<int, int>> compl_set;
        std::set_difference(all.begin(), all.end(), rx.begin(), rx.end(),
                            std::back_inserter(compl_set));
        if (rc != compl_set) rep.fail("rep-complement", "sample " + std::to_string(t));
        // converse: symmetric labels and self-converse atoms
        std::vector<std::pair<int, int>> rx_conv;
        for (auto [u, v] : rx) rx_conv.push_back({v, u});
        if (sorted(std::move(rx_conv)) != rx)
            rep.fail("rep-converse", "sample " + std::to_string(t));
        // composition containment rep(X);rep(Y) <= rep(X;Y)
        auto rxy = sorted(rep_of(g, monk_compose(x, y)));
        for (auto [u, v] : rx)
            for (auto [v2, w] : ry) {
                if (v2 != v) continue;
                if (!std::binary_search(rxy.begin(), rxy.end(), std::make_pair(u, w)))
                    rep.fail("rep-composition-containment",
                             "sample " + std::to_string(t) + " pair (" +
                                 std::to_string(u) + "," + std::to_string(w) + ")");
            }
        // separation disclosure
        if (!(x == y) && rx == ry)
            rep.note("sample " + std::to_string(t) +
                     ": distinct elements not separated within this bound");
    }

    // sampled atom realization
    int realized = 0, missing = 0;
    for (int c = 0; c < fam->coset_count(); ++c) {
        MonkElement a = MonkElement::atom(fam, c, 0);
        if (rep_of(g, a).empty())
            ++missing;
        else
            ++realized;
    }
    rep.note("atoms with index 0 realized: " + std::to_string(realized) + "/" +
             std::to_string(realized + missing));
    return rep;
}

/// Square representation: a complete atom labelling of base x base.
struct SquareRep {
    int base = 0;
    std::vector<int> label;  // base*base atom ids

    int at(int i, int j) const { return label[static_cast<std::size_t>(i) * base + j]; }

    std::string to_string(const RelAtomStructure& s) const {
        std::string out;
        for (int a = 0; a < s.atom_count(); ++a) {
            out += "atom " + s.atom_names[static_cast<std::size_t>(a)] + ":";
            for (int i = 0; i < base; ++i)
                for (int j = 0; j < base; ++j)
                    if (at(i, j) == a)
                        out += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
            out += "\n";
        }
        return out;
    }
};

struct SquareRepResult {
    std::optional<SquareRep> rep;
    int max_base_searched = 0;
    std::uint64_t nodes_explored = 0;
};

namespace detail {

struct SquareSearch {
    const RelAtomStructure& s;
    int base;
    std::vector<int> lab;
    std::vector<std::pair<int, int>> cells;
    std::vector<int> need;  // witnesses required per atom label
    std::uint64_t nodes = 0;

    explicit SquareSearch(const RelAtomStructure& str, int b) : s(str), base(b) {
        lab.assign(static_cast<std::size_t>(base) * base, -1);
        for (int i = 0; i < base; ++i) cells.push_back({i, i});
        for (int i = 0; i < base; ++i)
            for (int j = i + 1; j < base; ++j) cells.push_back({i, j});
        need.assign(static_cast<std::size_t>(s.atom_count()), 0);
        for (int c = 0; c < s.atom_count(); ++c)
            for (int a = 0; a < s.atom_count(); ++a)
                for (int b2 = 0; b2 < s.atom_count(); ++b2)
                    if (s.consistent(a, b2, c)) ++need[static_cast<std::size_t>(c)];
    }

    int& at(int i, int j) { return lab[static_cast<std::size_t>(i) * base + j]; }
    int get(int i, int j) const { return lab[static_cast<std::size_t>(i) * base + j]; }

    bool triangles_ok(int ci, int cj) {
        for (int k = 0; k < base; ++k) {
            auto chk = [&](int a, int b, int c) {
                return a < 0 || b < 0 || c < 0 || s.consistent(a, b, c);
            };
            if (!chk(get(ci, k), get(k, cj), get(ci, cj))) return false;
            if (!chk(get(cj, k), get(k, ci), get(cj, ci))) return false;
            if (!chk(get(ci, cj), get(cj, k), get(ci, k))) return false;
            if (!chk(get(k, ci), get(ci, cj), get(k, cj))) return false;
        }
        return true;
    }

    bool witnesses_ok() {
        for (int i = 0; i < base; ++i)
            for (int j = 0; j < base; ++j) {
                int c = get(i, j);
                for (int a = 0; a < s.atom_count(); ++a)
                    for (int b2 = 0; b2 < s.atom_count(); ++b2) {
                        if (!s.consistent(a, b2, c)) continue;
                        bool found = false;
                        for (int k = 0; k < base && !found; ++k)
                            if (get(i, k) == a && get(k, j) == b2) found = true;
                        if (!found) return false;
                    }
            }
        return true;
    }

    bool all_atoms_realized() {
        std::vector<char> seen(static_cast<std::size_t>(s.atom_count()), 0);
        for (int v : lab) seen[static_cast<std::size_t>(v)] = 1;
        for (char c : seen)
            if (!c) return false;
        return true;
    }

    bool dfs(std::size_t depth, int min_offdiag) {
        ++nodes;
        if (depth == cells.size())
            return all_atoms_realized() && witnesses_ok();
        auto [i, j] = cells[depth];
        bool diag = i == j;
        for (int a = 0; a < s.atom_count(); ++a) {
            if (diag != s.is_identity(a)) continue;  // identity atoms exactly on the diagonal
            if (!diag && a < min_offdiag) continue;  // symmetry break at cell (0,1)
            if (need[static_cast<std::size_t>(a)] > base) continue;
            at(i, j) = a;
            at(j, i) = s.converse[static_cast<std::size_t>(a)];
            if (triangles_ok(i, j)) {
                int next_min = (!diag && i == 0 && j == 1) ? a : min_offdiag;
                if (dfs(depth + 1, next_min)) return true;
            }
            at(i, j) = at(j, i) = -1;
        }
        return false;
    }
};

}  // namespace detail

/// Backtracking search for a square representation on bases up to
/// max_base; identity atoms live exactly on the diagonal, composition
/// soundness is enforced during the fill and witness completeness plus
/// surjectivity at the leaves.
inline SquareRepResult find_square_rep(const RelAtomStructure& s, int max_base = 5) {
    SquareRepResult res;
    for (int b = 1; b <= max_base; ++b) {
        detail::SquareSearch search(s, b);
        bool found = search.dfs(0, 0);
        res.nodes_explored += search.nodes;
        res.max_base_searched = b;
        if (found) {
            SquareRep r;
            r.base = b;
            r.label = search.lab;
            res.rep = std::move(r);
            return res;
        }
    }
    return res;
}

enum class RamseyVerdict { Forced, Avoidable, Inconclusive };

struct RamseyResult {
    RamseyVerdict verdict = RamseyVerdict::Inconclusive;
    std::vector<int> witness;  // counterexample edge colouring when avoidable
    std::uint64_t nodes_explored = 0;
};

/// Does every c-colouring of the edges of K_t contain a monochromatic
/// triangle? Exhaustive search for a triangle-free colouring with colour
/// symmetry breaking; the witness is the counterexample when one exists.
inline RamseyResult ramsey_check(int colours, int clique, std::uint64_t budget = 400000000ull) {
    RamseyResult res;
    if (colours < 1) throw std::invalid_argument("ramsey_check: colours >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < clique; ++i)
        for (int j = i + 1; j < clique; ++j) edges.push_back({i, j});
    std::vector<std::vector<int>> colour(
        static_cast<std::size_t>(clique), std::vector<int>(static_cast<std::size_t>(clique), -1));

    struct BudgetExceededRamsey {};
    std::function<bool(std::size_t, int)> dfs = [&](std::size_t at, int used) -> bool {
        if (++res.nodes_explored > budget) throw BudgetExceededRamsey{};
        if (at == edges.size()) return true;  // triangle-free colouring completed
        auto [i, j] = edges[at];
        int limit = std::min(colours, used + 1);
        for (int c = 0; c < limit; ++c) {
            bool mono = false;
            for (int k = 0; k < clique && !mono; ++k) {
                if (k == i || k == j) continue;
                if (colour[static_cast<std::size_t>(std::min(i, k))]
                          [static_cast<std::size_t>(std::max(i, k))] == c &&
                    colour[static_cast<std::size_t>(std::min(j, k))]
                          [static_cast<std::size_t>(std::max(j, k))] == c)
                    mono = true;
            }
            if (mono) continue;
            colour[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
            if (dfs(at + 1, std::max(used, c + 1))) return true;
            colour[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -1;
        }
        return false;
    };
    try {
        bool avoidable = dfs(0, 0);
        res.verdict = avoidable ? RamseyVerdict::Avoidable : RamseyVerdict::Forced;
        if (avoidable)
            for (auto [i, j] : edges)
                res.witness.push_back(
                    colour[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    } catch (const BudgetExceededRamsey&) {
        res.verdict = RamseyVerdict::Inconclusive;
    }
    return res;
}

}  // namespace atomlab
