#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/bits.hpp"
#include "atomlab/index_set.hpp"
#include "atomlab/rel.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// i,j,k are evenly distributed: some ordering p,q,r of them has r-q = q-p.
inline bool evenly_distributed(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    std::uint64_t a = i, b = j, c = k;
    return 2 * a == b + c || 2 * b == a + c || 2 * c == a + b;
}

struct MonkParams {
    int i_size = 6;
    int l = 2;
    int mu = 1;
    int index_bound = 4;
    int n = 0;  // 0: plain family; n >= 3 selects the witness-strengthened variant

    void validate() const {
        if (l < 2) throw std::invalid_argument("monk: l >= 2 required");
        if (mu < 1) throw std::invalid_argument("monk: mu >= 1 required");
        if (i_size < std::max(6, 3 * l))
            throw std::invalid_argument("monk: I_size >= max(6, 3l) required");
        if (n != 0 && (n < 3 || i_size < 2 * n + 2))
            throw std::invalid_argument("monk: H_n variant needs n >= 3 and I_size >= 2n+2");
        if (index_bound < 1) throw std::invalid_argument("monk: index_bound >= 1");
    }
};

/// The atom universe of one family: blocks W are (l-subset of I, copy p),
/// a coset collects the atoms a_i^{P,W} with fixed colour P in W and all i.
/// The two partitions of H are views over the cosets: E^W groups by block,
/// H^P groups by colour.
struct MonkFamily {
    MonkParams params;

    struct Block {
        std::vector<int> colours;  // sorted l-subset of I
        int copy;
        std::uint32_t colour_mask;  // bit per colour, i_size <= 32
    };
    struct Coset {
        int colour;
        int block;
    };

    std::vector<Block> blocks;
    std::vector<Coset> cosets;
    std::vector<std::vector<int>> coset_by_block;  // block -> coset ids

    static std::shared_ptr<const MonkFamily> make(MonkParams p) {
        p.validate();
        auto fam = std::make_shared<MonkFamily>();
        fam->params = p;
        std::vector<int> combo(static_cast<std::size_t>(p.l));
        // lexicographic l-subsets of I, copies innermost: the fixed block order
        std::vector<std::vector<int>> subsets;
        build_subsets(p.i_size, p.l, 0, combo, 0, subsets);
        for (const auto& sub : subsets)
            for (int c = 0; c < p.mu; ++c) {
                Block b;
                b.colours = sub;
                b.copy = c;
                b.colour_mask = 0;
                for (int col : sub) b.colour_mask |= 1u << col;
                fam->blocks.push_back(std::move(b));
            }
        fam->coset_by_block.resize(fam->blocks.size());
        for (int b = 0; b < static_cast<int>(fam->blocks.size()); ++b)
            for (int col : fam->blocks[static_cast<std::size_t>(b)].colours) {
                fam->coset_by_block[static_cast<std::size_t>(b)].push_back(
                    static_cast<int>(fam->cosets.size()));
                fam->cosets.push_back({col, b});
            }
        return fam;
    }

    int coset_count() const { return static_cast<int>(cosets.size()); }
    int block_count() const { return static_cast<int>(blocks.size()); }

    std::string block_name(int b) const {
        const Block& blk = blocks[static_cast<std::size_t>(b)];
        std::string s = "W{";
        for (std::size_t i = 0; i < blk.colours.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(blk.colours[i]);
        }
        s += '}';
        if (params.mu > 1) s += "c" + std::to_string(blk.copy);
        return s;
    }
    std::string coset_name(int c) const {
        return "P" + std::to_string(cosets[static_cast<std::size_t>(c)].colour) + ":" +
               block_name(cosets[static_cast<std::size_t>(c)].block);
    }

    /// Non-identity triple rule: blocks meet in no common colour, or the
    /// indices are evenly distributed and the colours are not all equal.
    bool triple_ok(int coset_a, std::uint32_t ia, int coset_b, std::uint32_t ib,
                   int coset_c, std::uint32_t ic) const {
        const Coset& A = cosets[static_cast<std::size_t>(coset_a)];
        const Coset& B = cosets[static_cast<std::size_t>(coset_b)];
        const Coset& C = cosets[static_cast<std::size_t>(coset_c)];
        std::uint32_t meet = blocks[static_cast<std::size_t>(A.block)].colour_mask &
                             blocks[static_cast<std::size_t>(B.block)].colour_mask &
                             blocks[static_cast<std::size_t>(C.block)].colour_mask;
        if (meet == 0) return true;
        return evenly_distributed(ia, ib, ic) &&
               !(A.colour == B.colour && B.colour == C.colour);
    }

private:
    static void build_subsets(int n, int l, int start, std::vector<int>& cur, int depth,
                              std::vector<std::vector<int>>& out) {
        if (depth == l) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur[static_cast<std::size_t>(depth)] = v;
            build_subsets(n, l, v + 1, cur, depth + 1, out);
        }
    }
};

/// Atom id layout in the explicit truncation: 0 is Id, then coset-major.
inline int monk_atom_id(const MonkFamily& fam, int coset, int index) {
    return 1 + coset * fam.params.index_bound + index;
}
inline bool monk_is_id(int atom) { return atom == 0; }
inline int monk_atom_coset(const MonkFamily& fam, int atom) {
    return (atom - 1) / fam.params.index_bound;
}
inline std::uint32_t monk_atom_index(const MonkFamily& fam, int atom) {
    return static_cast<std::uint32_t>((atom - 1) % fam.params.index_bound);
}

inline bool monk_consistent(const MonkFamily& fam, int a, int b, int c) {
    if (a == 0 || b == 0 || c == 0) return identity_triple_clause(0, a, b, c);
    return fam.triple_ok(monk_atom_coset(fam, a), monk_atom_index(fam, a),
                         monk_atom_coset(fam, b), monk_atom_index(fam, b),
                         monk_atom_coset(fam, c), monk_atom_index(fam, c));
}

/// Rule-backed structure whose explicit atoms are the truncation to
/// index_bound. Explicit operations are exact on the truncation; symbolic
/// MonkElement operations are exact on the full structure.
inline RelAtomStructure build_monk(const MonkParams& p,
                                   std::shared_ptr<const MonkFamily>* fam_out = nullptr) {
    auto fam = MonkFamily::make(p);
    RelAtomStructure s;
    s.atom_names.push_back("Id");
    for (int c = 0; c < fam->coset_count(); ++c)
        for (int i = 0; i < p.index_bound; ++i)
            s.atom_names.push_back("a" + std::to_string(i) + "^" + fam->coset_name(c));
    const int n = s.atom_count();
    s.identity = AtomSet(static_cast<std::size_t>(n));
    s.identity.set(0);
    s.converse.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) s.converse[static_cast<std::size_t>(a)] = a;
    auto held = fam;
    s.rule = [held](int a, int b, int c) { return monk_consistent(*held, a, b, c); };
    s.rule_desc = "monk I=" + std::to_string(p.i_size) + " l=" + std::to_string(p.l) +
                  " mu=" + std::to_string(p.mu) + " bound=" + std::to_string(p.index_bound);
    if (p.n != 0) s.rule_desc += " n=" + std::to_string(p.n);
    if (n <= 512) s.finalize();
    if (fam_out) *fam_out = fam;
    return s;
}

/// Symbolic element over a Monk family: an identity flag plus one exact
/// finite/cofinite index set per coset. Closed under boolean operations,
/// converse and composition.
struct MonkElement {
    std::shared_ptr<const MonkFamily> fam;
    bool id = false;
    std::vector<IndexSet> coset;

    static MonkElement zero(std::shared_ptr<const MonkFamily> f) {
        MonkElement e;
        e.fam = std::move(f);
        e.coset.assign(static_cast<std::size_t>(e.fam->coset_count()), IndexSet::empty());
        return e;
    }
    static MonkElement unit(std::shared_ptr<const MonkFamily> f) {
        MonkElement e = zero(std::move(f));
        e.id = true;
        for (auto& c : e.coset) c = IndexSet::full();
        return e;
    }
    static MonkElement identity_elem(std::shared_ptr<const MonkFamily> f) {
        MonkElement e = zero(std::move(f));
        e.id = true;
        return e;
    }
    static MonkElement h_all(std::shared_ptr<const MonkFamily> f) {
        MonkElement e = unit(std::move(f));
        e.id = false;
        return e;
    }
    static MonkElement h_colour(std::shared_ptr<const MonkFamily> f, int colour) {
        MonkElement e = zero(std::move(f));
        for (int c = 0; c < e.fam->coset_count(); ++c)
            if (e.fam->cosets[static_cast<std::size_t>(c)].colour == colour)
                e.coset[static_cast<std::size_t>(c)] = IndexSet::full();
        return e;
    }
    static MonkElement e_block(std::shared_ptr<const MonkFamily> f, int block) {
        MonkElement e = zero(std::move(f));
        for (int c : e.fam->coset_by_block[static_cast<std::size_t>(block)])
            e.coset[static_cast<std::size_t>(c)] = IndexSet::full();
        return e;
    }
    static MonkElement atom(std::shared_ptr<const MonkFamily> f, int coset_id,
                            std::uint32_t index) {
        MonkElement e = zero(std::move(f));
        e.coset[static_cast<std::size_t>(coset_id)] = IndexSet::finite({index});
        return e;
    }

    bool is_zero() const {
        if (id) return false;
        for (const auto& c : coset)
            if (!c.is_empty()) return false;
        return true;
    }

    MonkElement complement() const {
        MonkElement e = *this;
        e.id = !id;
        for (auto& c : e.coset) c = c.complement();
        return e;
    }
    friend MonkElement operator|(const MonkElement& a, const MonkElement& b) {
        MonkElement e = a;
        e.id = a.id || b.id;
        for (std::size_t i = 0; i < e.coset.size(); ++i)
            e.coset[i] = a.coset[i] | b.coset[i];
        return e;
    }
    friend MonkElement operator&(const MonkElement& a, const MonkElement& b) {
        MonkElement e = a;
        e.id = a.id && b.id;
        for (std::size_t i = 0; i < e.coset.size(); ++i)
            e.coset[i] = a.coset[i] & b.coset[i];
        return e;
    }
    bool operator==(const MonkElement& o) const {
        return id == o.id && coset == o.coset;
    }
    bool operator!=(const MonkElement& o) const { return !(*this == o); }

    bool intersects(const MonkElement& o) const {
        if (id && o.id) return true;
        for (std::size_t i = 0; i < coset.size(); ++i)
            if (coset[i].intersects(o.coset[i])) return true;
        return false;
    }

    /// Restriction to the explicit truncation of the family.
    AtomSet truncate(const RelAtomStructure& s) const {
        AtomSet out(static_cast<std::size_t>(s.atom_count()));
        if (id) out.set(0);
        for (int c = 0; c < fam->coset_count(); ++c)
            for (int i = 0; i < fam->params.index_bound; ++i)
                if (coset[static_cast<std::size_t>(c)].contains(
                        static_cast<std::uint32_t>(i)))
                    out.set(static_cast<std::size_t>(monk_atom_id(*fam, c, i)));
        return out;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s = id ? "Id" : "";
        for (int c = 0; c < fam->coset_count(); ++c) {
            const IndexSet& is = coset[static_cast<std::size_t>(c)];
            if (is.is_empty()) continue;
            if (!s.empty()) s += " + ";
            s += fam->coset_name(c) + ":" + is.to_string();
        }
        return s;
    }
};

inline MonkElement monk_from_explicit(std::shared_ptr<const MonkFamily> fam,
                                      const AtomSet& x) {
    MonkElement e = MonkElement::zero(std::move(fam));
    std::vector<std::vector<std::uint32_t>> per(
        static_cast<std::size_t>(e.fam->coset_count()));
    x.for_each([&](std::size_t a) {
        if (a == 0) {
            e.id = true;
            return;
        }
        per[static_cast<std::size_t>(monk_atom_coset(*e.fam, static_cast<int>(a)))]
            .push_back(monk_atom_index(*e.fam, static_cast<int>(a)));
    });
    for (std::size_t c = 0; c < per.size(); ++c)
        e.coset[c] = IndexSet::finite(std::move(per[c]));
    return e;
}

namespace detail {

/// Does some i in A, j in B satisfy e(i,j,k)? Exact for every finite or
/// cofinite A, B: the equations pin all candidates once one side is fixed.
inline bool pair_covers(const IndexSet& a, const IndexSet& b, std::uint32_t k) {
    if (a.is_empty() || b.is_empty()) return false;
    if (a.is_cofinite() && b.is_cofinite()) return true;
    auto check_fixed = [&](std::uint32_t j, const IndexSet& other) {
        std::int64_t kk = k, jj = j;
        if ((jj + kk) % 2 == 0 && other.contains(static_cast<std::uint32_t>((jj + kk) / 2)))
            return true;
        if (2 * jj - kk >= 0 && other.contains(static_cast<std::uint32_t>(2 * jj - kk)))
            return true;
        if (2 * kk - jj >= 0 && other.contains(static_cast<std::uint32_t>(2 * kk - jj)))
            return true;
        return false;
    };
    if (a.is_finite()) {
        for (std::uint32_t i : a.support())
            if (check_fixed(i, b)) return true;
        return false;
    }
    for (std::uint32_t j : b.support())
        if (check_fixed(j, a)) return true;
    return false;
}

/// For A or B infinite: a threshold T with every k >= T covered
/// (witnessed by i = 2k - j0 against a fixed j0 on the finite-or-min side).
inline std::uint32_t pair_tail(const IndexSet& a, const IndexSet& b) {
    auto tail_of = [](const IndexSet& co, const IndexSet& other) {
        std::uint64_t t = co.tail_start(), j0 = other.min();
        return static_cast<std::uint32_t>((t + j0 + 1) / 2);
    };
    if (a.is_cofinite() && b.is_cofinite())
        return std::min(tail_of(a, b), tail_of(b, a));
    if (a.is_cofinite()) return tail_of(a, b);
    return tail_of(b, a);
}

}  // namespace detail

/// Exact symbolic composition over a Monk family. Per target coset the
/// result is finite or cofinite; tails are certified by witness thresholds
/// and everything below a threshold is decided pointwise.
inline MonkElement monk_compose(const MonkElement& x, const MonkElement& y) {
    const MonkFamily& fam = *x.fam;
    MonkElement r = MonkElement::zero(x.fam);
    r.id = x.intersects(y);

    struct Pair {
        const IndexSet* a;
        const IndexSet* b;
    };

    for (int tc = 0; tc < fam.coset_count(); ++tc) {
        const auto& target = fam.cosets[static_cast<std::size_t>(tc)];
        std::uint32_t wmask =
            fam.blocks[static_cast<std::size_t>(target.block)].colour_mask;
        IndexSet acc = IndexSet::empty();
        if (x.id) acc = acc | y.coset[static_cast<std::size_t>(tc)];
        if (y.id) acc = acc | x.coset[static_cast<std::size_t>(tc)];

        bool full = false;
        std::vector<Pair> even_pairs;  // clause (ii) contributors
        bool has_tail = false;
        std::uint32_t tail = 0;

        for (int c1 = 0; c1 < fam.coset_count() && !full; ++c1) {
            const IndexSet& A = x.coset[static_cast<std::size_t>(c1)];
            if (A.is_empty()) continue;
            const auto& ca = fam.cosets[static_cast<std::size_t>(c1)];
            std::uint32_t m1 =
                fam.blocks[static_cast<std::size_t>(ca.block)].colour_mask & wmask;
            for (int c2 = 0; c2 < fam.coset_count(); ++c2) {
                const IndexSet& B = y.coset[static_cast<std::size_t>(c2)];
                if (B.is_empty()) continue;
                const auto& cb = fam.cosets[static_cast<std::size_t>(c2)];
                if ((m1 & fam.blocks[static_cast<std::size_t>(cb.block)].colour_mask) ==
                    0) {
                    full = true;  // blocks share no colour: whole coset lands in r
                    break;
                }
                if (ca.colour == cb.colour && cb.colour == target.colour) continue;
                even_pairs.push_back({&A, &B});
                if (A.is_cofinite() || B.is_cofinite()) {
                    std::uint32_t t = detail::pair_tail(A, B);
                    tail = has_tail ? std::min(tail, t) : t;
                    has_tail = true;
                }
            }
        }

        IndexSet& out = r.coset[static_cast<std::size_t>(tc)];
        if (full) {
            out = IndexSet::full();
            continue;
        }
        if (has_tail) {
            std::vector<std::uint32_t> holes;
            for (std::uint32_t k = 0; k < tail; ++k) {
                if (acc.contains(k)) continue;
                bool covered = false;
                for (const Pair& p : even_pairs)
                    if (detail::pair_covers(*p.a, *p.b, k)) {
                        covered = true;
                        break;
                    }
                if (!covered) holes.push_back(k);
            }
            out = IndexSet::cofinite(std::move(holes));
            continue;
        }
        // all contributions finite: candidate k values come from the three
        // defining equations over listed members
        std::vector<std::uint32_t> ks;
        for (const Pair& p : even_pairs)
            for (std::uint32_t i : p.a->support())
                for (std::uint32_t j : p.b->support()) {
                    std::int64_t ii = i, jj = j;
                    if ((ii + jj) % 2 == 0)
                        ks.push_back(static_cast<std::uint32_t>((ii + jj) / 2));
                    if (2 * ii - jj >= 0)
                        ks.push_back(static_cast<std::uint32_t>(2 * ii - jj));
                    if (2 * jj - ii >= 0)
                        ks.push_back(static_cast<std::uint32_t>(2 * jj - ii));
                }
        IndexSet cand = IndexSet::finite(std::move(ks));
        std::vector<std::uint32_t> keep;
        for (std::uint32_t k : cand.support()) {
            if (acc.contains(k)) continue;
            for (const Pair& p : even_pairs)
                if (detail::pair_covers(*p.a, *p.b, k)) {
                    keep.push_back(k);
                    break;
                }
        }
        out = acc | IndexSet::finite(std::move(keep));
    }
    return r;
}

/// All atoms are self-converse, so converse is the identity map.
inline MonkElement monk_converse(const MonkElement& x) { return x; }

/// Symbolic verification of the Maddux composition pattern on the colour
/// partition: H^P;H^Q = H for P != Q, and H^P;H^P misses exactly H^P among
/// non-identity atoms while containing the identity.
inline ValidationReport maddux_embedding_check(const MonkParams& p) {
    auto fam = MonkFamily::make(p);
    ValidationReport rep;
    rep.note("mode: symbolic (exact on the full structure)");
    for (int pc = 0; pc < p.i_size; ++pc) {
        MonkElement hp = MonkElement::h_colour(fam, pc);
        for (int qc = 0; qc < p.i_size; ++qc) {
            MonkElement hq = MonkElement::h_colour(fam, qc);
            MonkElement got = monk_compose(hp, hq);
            MonkElement want = MonkElement::h_all(fam);
            if (pc == qc) {
                want = want & hp.complement();
                want.id = true;
            }
            if (got != want) {
                for (int c = 0; c < fam->coset_count(); ++c)
                    if (got.coset[static_cast<std::size_t>(c)] !=
                        want.coset[static_cast<std::size_t>(c)])
                        rep.fail("maddux-composition",
                                 "H^" + std::to_string(pc) + ";H^" + std::to_string(qc) +
                                     " deviates at coset " + fam->coset_name(c) +
                                     ": got " +
                                     got.coset[static_cast<std::size_t>(c)].to_string() +
                                     " want " +
                                     want.coset[static_cast<std::size_t>(c)].to_string());
                if (got.id != want.id)
                    rep.fail("maddux-composition",
                             "H^" + std::to_string(pc) + ";H^" + std::to_string(qc) +
                                 " identity part: got " + (got.id ? "Id" : "0") +
                                 " want " + (want.id ? "Id" : "0"));
            }
        }
    }
    return rep;
}

/// Membership in the term algebra R: every block component X n E^W must be
/// finite or cofinite within its block. Mixed cosets inside one block are
/// exactly the failures.
inline bool term_algebra_member(const MonkElement& x, std::string* witness = nullptr) {
    const MonkFamily& fam = *x.fam;
    for (int b = 0; b < fam.block_count(); ++b) {
        bool any_fin = false, any_cof = false;
        for (int c : fam.coset_by_block[static_cast<std::size_t>(b)]) {
            const IndexSet& is = x.coset[static_cast<std::size_t>(c)];
            if (is.is_cofinite())
                any_cof = true;
            else
                any_fin = true;
        }
        if (any_fin && any_cof) {
            if (witness)
                *witness = "block " + fam.block_name(b) +
                           " mixes finite and cofinite components";
            return false;
        }
    }
    return true;
}

/// Strengthened witness condition of the H_n variant, checked exhaustively
/// over the distinct block-intersection patterns: for every n pairs of
/// atoms some block avoids all pairwise colour meets. Holds whenever
/// |I| >= 2n+2; the scan certifies it for the given parameters.
inline bool hn_witness_condition(const MonkParams& p, std::string* witness = nullptr) {
    if (p.n < 3) throw std::invalid_argument("hn_witness_condition: needs H_n variant");
    auto fam = MonkFamily::make(p);
    std::vector<std::uint32_t> meets;
    for (int b1 = 0; b1 < fam->block_count(); ++b1)
        for (int b2 = 0; b2 < fam->block_count(); ++b2)
            meets.push_back(fam->blocks[static_cast<std::size_t>(b1)].colour_mask &
                            fam->blocks[static_cast<std::size_t>(b2)].colour_mask);
    std::sort(meets.begin(), meets.end());
    meets.erase(std::unique(meets.begin(), meets.end()), meets.end());
    // a union of n masks must leave room for an l-subset of I
    std::vector<std::uint32_t> unions = {0};
    for (int round = 0; round < p.n; ++round) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t u : unions)
            for (std::uint32_t m : meets) next.push_back(u | m);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        unions = std::move(next);
    }
    for (std::uint32_t u : unions) {
        int free_colours = p.i_size - __builtin_popcount(u);
        if (free_colours < p.l) {
            if (witness) {
                *witness = "forbidden colour union " + std::to_string(u) +
                           " leaves only " + std::to_string(free_colours) + " colours";
            }
            return false;
        }
    }
    return true;
}

}  // namespace atomlab
