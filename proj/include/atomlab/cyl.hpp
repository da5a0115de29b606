#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/bits.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// Binary relation on atoms. Partition mode stores equivalence classes
/// (the common case for structures built here); adjacency mode stores
/// sorted neighbour lists and makes no assumptions.
class AtomRel {
public:
    static AtomRel partition(std::vector<int> class_of, int atom_count) {
        AtomRel r;
        r.atoms_ = atom_count;
        r.class_of_ = std::move(class_of);
        int classes = 0;
        for (int c : r.class_of_) classes = std::max(classes, c + 1);
        r.class_members_.resize(static_cast<std::size_t>(classes));
        for (int a = 0; a < atom_count; ++a)
            r.class_members_[static_cast<std::size_t>(r.class_of_[static_cast<std::size_t>(a)])]
                .push_back(a);
        return r;
    }
    static AtomRel adjacency(std::vector<std::vector<int>> adj) {
        AtomRel r;
        r.atoms_ = static_cast<int>(adj.size());
        r.adj_ = std::move(adj);
        for (auto& v : r.adj_) std::sort(v.begin(), v.end());
        return r;
    }

    bool partition_mode() const { return !class_of_.empty(); }
    int atom_count() const { return atoms_; }

    bool related(int a, int b) const {
        if (partition_mode())
            return class_of_[static_cast<std::size_t>(a)] ==
                   class_of_[static_cast<std::size_t>(b)];
        const auto& v = adj_[static_cast<std::size_t>(a)];
        return std::binary_search(v.begin(), v.end(), b);
    }

    /// {c : a R c}
    const std::vector<int>& neighbours(int a) const {
        if (partition_mode())
            return class_members_[static_cast<std::size_t>(
                class_of_[static_cast<std::size_t>(a)])];
        return adj_[static_cast<std::size_t>(a)];
    }

    AtomSet image(const AtomSet& x) const {
        AtomSet out(static_cast<std::size_t>(atoms_));
        if (partition_mode()) {
            std::vector<bool> seen(class_members_.size(), false);
            x.for_each([&](std::size_t a) {
                int cl = class_of_[a];
                if (seen[static_cast<std::size_t>(cl)]) return;
                seen[static_cast<std::size_t>(cl)] = true;
                for (int m : class_members_[static_cast<std::size_t>(cl)])
                    out.set(static_cast<std::size_t>(m));
            });
            return out;
        }
        x.for_each([&](std::size_t a) {
            for (int m : adj_[a]) out.set(static_cast<std::size_t>(m));
        });
        return out;
    }

    bool is_reflexive() const {
        for (int a = 0; a < atoms_; ++a)
            if (!related(a, a)) return false;
        return true;
    }
    bool is_symmetric(int* wa = nullptr, int* wb = nullptr) const {
        if (partition_mode()) return true;
        for (int a = 0; a < atoms_; ++a)
            for (int b : adj_[static_cast<std::size_t>(a)])
                if (!related(b, a)) {
                    if (wa) *wa = a;
                    if (wb) *wb = b;
                    return false;
                }
        return true;
    }
    bool is_transitive(int* wa = nullptr, int* wc = nullptr) const {
        if (partition_mode()) return true;
        for (int a = 0; a < atoms_; ++a)
            for (int b : adj_[static_cast<std::size_t>(a)])
                for (int c : adj_[static_cast<std::size_t>(b)])
                    if (!related(a, c)) {
                        if (wa) *wa = a;
                        if (wc) *wc = c;
                        return false;
                    }
        return true;
    }

private:
    int atoms_ = 0;
    std::vector<int> class_of_;
    std::vector<std::vector<int>> class_members_;
    std::vector<std::vector<int>> adj_;
};

/// Cylindric (optionally polyadic-equality) atom structure of dimension n.
struct CylAtomStructure {
    int n = 0;
    std::vector<std::string> atom_names;
    std::vector<AtomSet> diag;   // n*n, diag[i*n+j] = D_ij
    std::vector<AtomRel> equiv;  // n, accessibility of c_i
    bool has_swap = false;
    std::vector<AtomRel> swap;  // indexed by i*n+j for i<j
    std::string rule_desc;

    int atom_count() const { return static_cast<int>(atom_names.size()); }
    const AtomSet& d(int i, int j) const { return diag[static_cast<std::size_t>(i) * n + j]; }
    const AtomRel& swap_rel(int i, int j) const {
        int a = std::min(i, j), b = std::max(i, j);
        return swap[static_cast<std::size_t>(a) * n + b];
    }
    AtomSet unit() const { return AtomSet::all(atom_names.size()); }
    AtomSet zero() const { return AtomSet(atom_names.size()); }

    void check_index(int i) const {
        if (i < 0 || i >= n) throw std::out_of_range("dimension index out of range");
    }
};

inline AtomSet ca_cylindrify(const CylAtomStructure& s, int i, const AtomSet& x) {
    s.check_index(i);
    return s.equiv[static_cast<std::size_t>(i)].image(x);
}

inline AtomSet ca_diagonal(const CylAtomStructure& s, int i, int j) {
    s.check_index(i);
    s.check_index(j);
    return s.d(i, j);
}

/// s(i,j): c_j(x n d_ij) for i != j, identity for i == j.
inline AtomSet ca_substitute(const CylAtomStructure& s, int i, int j, const AtomSet& x) {
    s.check_index(i);
    s.check_index(j);
    if (i == j) return x;
    return ca_cylindrify(s, j, x & s.d(i, j));
}

inline AtomSet ca_swap(const CylAtomStructure& s, int i, int j, const AtomSet& x) {
    s.check_index(i);
    s.check_index(j);
    if (!s.has_swap) throw std::invalid_argument("structure has no swap relations");
    if (i == j) return x;
    return s.swap_rel(i, j).image(x);
}

/// Dimension set: indices whose cylindrifier moves x.
inline std::vector<int> dimension_set(const CylAtomStructure& s, const AtomSet& x) {
    std::vector<int> out;
    for (int i = 0; i < s.n; ++i)
        if (ca_cylindrify(s, i, x) != x) out.push_back(i);
    return out;
}

/// Element filter for the n-dimensional neat reduct of a higher structure:
/// keeps X with dimension set inside {0..n-1}. Reduct operations are the
/// ca_* calls restricted to indices below n.
struct NeatReduct {
    const CylAtomStructure* s;
    int n;

    NeatReduct(const CylAtomStructure& str, int dim) : s(&str), n(dim) {
        if (dim >= str.n) throw std::invalid_argument("neat reduct needs n < m");
    }
    bool contains(const AtomSet& x) const {
        for (int i = n; i < s->n; ++i)
            if (ca_cylindrify(*s, i, x) != x) return false;
        return true;
    }
};

struct CaAxiomBudget {
    std::size_t subset_cap_atoms = 12;  // full subset scan up to here
    std::uint64_t samples = 2000;       // seeded random elements beyond
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string atomn(const CylAtomStructure& s, int a) {
    return s.atom_names[static_cast<std::size_t>(a)];
}

inline AtomSet random_atomset(std::mt19937_64& rng, std::size_t universe) {
    AtomSet x(universe);
    for (std::size_t i = 0; i < universe; ++i)
        if (rng() & 1) x.set(i);
    return x;
}

}  // namespace detail

/// Structural invariants only: equivalences, diagonal symmetry, D_ii = 1.
inline ValidationReport validate_cyl_structure(const CylAtomStructure& s) {
    ValidationReport rep;
    for (int i = 0; i < s.n; ++i) {
        const AtomRel& r = s.equiv[static_cast<std::size_t>(i)];
        if (!r.is_reflexive()) rep.fail("equiv-reflexive", "i=" + std::to_string(i));
        int a = -1, b = -1;
        if (!r.is_symmetric(&a, &b))
            rep.fail("equiv-symmetric", "i=" + std::to_string(i) + " at (" +
                                            detail::atomn(s, a) + "," +
                                            detail::atomn(s, b) + ")");
        if (!r.is_transitive(&a, &b))
            rep.fail("equiv-transitive", "i=" + std::to_string(i) + " at (" +
                                             detail::atomn(s, a) + "," +
                                             detail::atomn(s, b) + ")");
    }
    for (int i = 0; i < s.n; ++i) {
        if (!s.d(i, i).is_all()) rep.fail("diag-ii-unit", "i=" + std::to_string(i));
        for (int j = 0; j < s.n; ++j)
            if (s.d(i, j) != s.d(j, i))
                rep.fail("diag-symmetric",
                         "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    return rep;
}

/// Cylindric and polyadic-equality identities over the complex algebra.
/// Atom-level checks are exhaustive and, by complete additivity of every
/// operator, equivalent to the subset-level identities; the subset scan
/// re-verifies them on all elements when the structure is small enough and
/// on seeded samples otherwise.
inline ValidationReport check_ca_axioms(const CylAtomStructure& s,
                                        const CaAxiomBudget& budget = {}) {
    ValidationReport rep = validate_cyl_structure(s);
    const int n = s.n;
    const int atoms = s.atom_count();
    rep.note("atom-level: exhaustive (complete for the complex algebra)");

    auto single = [&](int a) { return AtomSet::single(static_cast<std::size_t>(atoms),
                                                      static_cast<std::size_t>(a)); };

    // c_i x >= x, c_i c_i x = c_i x on atom generators
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < atoms && rep.violations.size() < 64; ++a) {
            AtomSet ca = ca_cylindrify(s, i, single(a));
            if (!ca.test(static_cast<std::size_t>(a)))
                rep.fail("c_i-increasing", "i=" + std::to_string(i) + " atom " +
                                               detail::atomn(s, a));
            if (ca_cylindrify(s, i, ca) != ca)
                rep.fail("c_i-idempotent (c_ic_ix = c_ix)",
                         "i=" + std::to_string(i) + " atom " + detail::atomn(s, a));
        }
    }
    // c_i(x . c_i y) = c_i x . c_i y: pairs of atoms suffice
    for (int i = 0; i < n; ++i) {
        const AtomRel& r = s.equiv[static_cast<std::size_t>(i)];
        if (r.partition_mode()) continue;  // equivalence relation: identity holds
        for (int a = 0; a < atoms && rep.violations.size() < 64; ++a)
            for (int b = 0; b < atoms; ++b) {
                AtomSet cb = ca_cylindrify(s, i, single(b));
                AtomSet lhs = ca_cylindrify(s, i, single(a) & cb);
                AtomSet rhs = ca_cylindrify(s, i, single(a)) & cb;
                if (lhs != rhs) {
                    rep.fail("c_i-distribution (c_i(x.c_iy) = c_ix.c_iy)",
                             "i=" + std::to_string(i) + " atoms (" +
                                 detail::atomn(s, a) + "," + detail::atomn(s, b) + ")");
                    break;
                }
            }
    }
    // commutativity
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int a = 0; a < atoms && rep.violations.size() < 64; ++a) {
                AtomSet x = single(a);
                if (ca_cylindrify(s, i, ca_cylindrify(s, j, x)) !=
                    ca_cylindrify(s, j, ca_cylindrify(s, i, x)))
                    rep.fail("c_ic_j-commute", "(" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") atom " +
                                                   detail::atomn(s, a));
            }
    // diagonal axioms
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (s.d(i, j) != ca_cylindrify(s, k, s.d(i, k) & s.d(k, j)))
                    rep.fail("d_ij = c_k(d_ik.d_kj)",
                             "(i,j,k)=(" + std::to_string(i) + "," + std::to_string(j) +
                                 "," + std::to_string(k) + ")");
            }
            // c_i(d_ij.x).c_i(d_ij.-x) = 0: no two distinct d_ij atoms share
            // an equiv_i neighbourhood
            auto dij = s.d(i, j).members();
            for (std::size_t p = 0; p < dij.size() && rep.violations.size() < 64; ++p)
                for (std::size_t q = p + 1; q < dij.size(); ++q) {
                    int a = static_cast<int>(dij[p]), b = static_cast<int>(dij[q]);
                    if (ca_cylindrify(s, i, single(a))
                            .intersects(ca_cylindrify(s, i, single(b)))) {
                        rep.fail("c_i(d_ij.x).c_i(d_ij.-x) = 0",
                                 "(i,j)=(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") atoms (" +
                                     detail::atomn(s, a) + "," + detail::atomn(s, b) +
                                     ")");
                        q = dij.size();
                        p = dij.size();
                    }
                }
        }

    if (s.has_swap) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const AtomRel& r = s.swap_rel(i, j);
                std::vector<int> in_deg(static_cast<std::size_t>(atoms), 0);
                for (int a = 0; a < atoms; ++a) {
                    const auto& img = r.neighbours(a);
                    if (img.size() != 1) {
                        rep.fail("p_ij-endomorphism (relation not functional)",
                                 "(i,j)=(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") atom " +
                                     detail::atomn(s, a));
                        continue;
                    }
                    ++in_deg[static_cast<std::size_t>(img[0])];
                }
                for (int a = 0; a < atoms; ++a)
                    if (in_deg[static_cast<std::size_t>(a)] != 1) {
                        rep.fail("p_ij-endomorphism (relation not bijective)",
                                 "(i,j)=(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") atom " +
                                     detail::atomn(s, a));
                        break;
                    }
                for (int a = 0; a < atoms && rep.violations.size() < 64; ++a) {
                    AtomSet x = single(a);
                    if (ca_swap(s, i, j, ca_swap(s, i, j, x)) != x)
                        rep.fail("p_ijp_ijx = x", "(i,j)=(" + std::to_string(i) + "," +
                                                      std::to_string(j) + ") atom " +
                                                      detail::atomn(s, a));
                    if (ca_swap(s, i, j, ca_substitute(s, i, j, x)) !=
                        ca_substitute(s, j, i, x))
                        rep.fail("p_ijs_i^jx = s_j^ix",
                                 "(i,j)=(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") atom " +
                                     detail::atomn(s, a));
                }
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    for (int a = 0; a < atoms && rep.violations.size() < 64; ++a) {
                        AtomSet x = single(a);
                        if (ca_swap(s, i, j, ca_swap(s, i, k, x)) !=
                            ca_swap(s, j, k, ca_swap(s, i, j, x)))
                            rep.fail("p_ijp_ikx = p_jkp_ijx",
                                     "(i,j,k)=(" + std::to_string(i) + "," +
                                         std::to_string(j) + "," + std::to_string(k) +
                                         ") atom " + detail::atomn(s, a));
                    }
                }
    }

    // element-level re-verification
    auto element_pass = [&](const AtomSet& x, const AtomSet& y, const char* tag) {
        for (int i = 0; i < n && rep.violations.size() < 64; ++i) {
            AtomSet cx = ca_cylindrify(s, i, x);
            if (!x.subset_of(cx))
                rep.fail(std::string("c_i-increasing [") + tag + "]",
                         "i=" + std::to_string(i) + " x=" + x.to_string());
            AtomSet cy = ca_cylindrify(s, i, y);
            if (ca_cylindrify(s, i, x & cy) != (cx & cy))
                rep.fail(std::string("c_i-distribution [") + tag + "]",
                         "i=" + std::to_string(i) + " x=" + x.to_string() +
                             " y=" + y.to_string());
            if ((x | y).count() && ca_cylindrify(s, i, x | y) != (cx | cy))
                rep.fail(std::string("c_i-additive [") + tag + "]",
                         "i=" + std::to_string(i));
        }
        if (s.has_swap)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n && rep.violations.size() < 64; ++j) {
                    if (ca_swap(s, i, j, x.complement()) !=
                        ca_swap(s, i, j, x).complement())
                        rep.fail(std::string("p_ij-complement [") + tag + "]",
                                 "(i,j)=(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") x=" + x.to_string());
                }
    };

    if (static_cast<std::size_t>(atoms) <= budget.subset_cap_atoms && atoms < 64) {
        rep.note("subset-level: exhaustive over all " +
                 std::to_string(1ull << atoms) + " elements");
        // pack elements into words; per-atom operator images precomputed
        std::vector<std::vector<std::uint64_t>> cyl_img(
            static_cast<std::size_t>(n),
            std::vector<std::uint64_t>(static_cast<std::size_t>(atoms), 0));
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < atoms; ++a)
                for (int m : s.equiv[static_cast<std::size_t>(i)].neighbours(a))
                    cyl_img[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] |=
                        1ull << m;
        auto cyl_of = [&](int i, std::uint64_t m) {
            std::uint64_t out = 0;
            std::uint64_t bits = m;
            while (bits) {
                int a = __builtin_ctzll(bits);
                out |= cyl_img[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
                bits &= bits - 1;
            }
            return out;
        };
        auto to_set = [&](std::uint64_t m) {
            AtomSet x(static_cast<std::size_t>(atoms));
            for (int a = 0; a < atoms; ++a)
                if (m >> a & 1) x.set(static_cast<std::size_t>(a));
            return x;
        };
        const std::uint64_t total = 1ull << atoms;
        for (int i = 0; i < n && rep.violations.size() < 64; ++i) {
            std::vector<std::uint64_t> cx(total);
            for (std::uint64_t m = 0; m < total; ++m) cx[m] = cyl_of(i, m);
            for (std::uint64_t mx = 0; mx < total && rep.violations.size() < 64; ++mx) {
                if ((mx & cx[mx]) != mx)
                    rep.fail("c_i-increasing [exhaustive]",
                             "i=" + std::to_string(i) + " x=" + to_set(mx).to_string());
                for (std::uint64_t my = 0; my < total; ++my) {
                    if (cx[mx & cx[my]] != (cx[mx] & cx[my])) {
                        rep.fail("c_i-distribution [exhaustive]",
                                 "i=" + std::to_string(i) + " x=" + to_set(mx).to_string() +
                                     " y=" + to_set(my).to_string());
                        break;
                    }
                    if (cx[mx | my] != (cx[mx] | cx[my])) {
                        rep.fail("c_i-additive [exhaustive]",
                                 "i=" + std::to_string(i) + " x=" + to_set(mx).to_string() +
                                     " y=" + to_set(my).to_string());
                        break;
                    }
                }
            }
        }
        if (s.has_swap) {
            const std::uint64_t all = total - 1;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n && rep.violations.size() < 64; ++j) {
                    std::vector<std::uint64_t> pimg(static_cast<std::size_t>(atoms), 0);
                    for (int a = 0; a < atoms; ++a)
                        for (int m : s.swap_rel(i, j).neighbours(a))
                            pimg[static_cast<std::size_t>(a)] |= 1ull << m;
                    auto p_of = [&](std::uint64_t m) {
                        std::uint64_t out = 0;
                        while (m) {
                            int a = __builtin_ctzll(m);
                            out |= pimg[static_cast<std::size_t>(a)];
                            m &= m - 1;
                        }
                        return out;
                    };
                    for (std::uint64_t mx = 0; mx < total; ++mx)
                        if (p_of(all & ~mx) != (all & ~p_of(mx))) {
                            rep.fail("p_ij-complement [exhaustive]",
                                     "(i,j)=(" + std::to_string(i) + "," +
                                         std::to_string(j) + ") x=" +
                                         to_set(mx).to_string());
                            break;
                        }
                }
        }
    } else {
        rep.note("subset-level: " + std::to_string(budget.samples) +
                 " seeded samples (seed=" + std::to_string(budget.seed) + ")");
        std::mt19937_64 rng(budget.seed);
        for (std::uint64_t t = 0; t < budget.samples && rep.violations.size() < 64; ++t) {
            AtomSet x = detail::random_atomset(rng, static_cast<std::size_t>(atoms));
            AtomSet y = detail::random_atomset(rng, static_cast<std::size_t>(atoms));
            element_pass(x, y, "sampled");
        }
    }
    return rep;
}

}  // namespace atomlab
