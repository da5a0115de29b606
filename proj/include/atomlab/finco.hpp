#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/index_set.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// The finite/cofinite fragment of the substitution set algebra built from
/// a partition Q_0, Q_1, ... of n-tuples, Q_0 the diagonal s_0 = s_1.
/// Elements are R_X for X a finite or cofinite subset of the positive
/// integers; the non-principal ultrafilter is decided by cofiniteness, so
/// R_X contains Q_0 exactly when X is cofinite. Every report from this
/// module states that fragment explicitly.
struct FinCoAlgebra {
    int n;

    explicit FinCoAlgebra(int dim) : n(dim) {
        if (dim < 2) throw std::invalid_argument("finco: dimension >= 2 required");
    }

    /// X subsets of Z+ are IndexSets over the naturals that never contain 0.
    static IndexSet universe() { return IndexSet::cofinite({0}); }
    static IndexSet atom(std::uint32_t k) {
        if (k == 0) throw std::invalid_argument("finco: blocks are indexed from 1");
        return IndexSet::finite({k});
    }
    static IndexSet empty() { return IndexSet::empty(); }

    static bool in_ultrafilter(const IndexSet& x) { return x.is_cofinite(); }
    static bool contains_q0(const IndexSet& x) { return in_ultrafilter(x); }

    static IndexSet join(const IndexSet& a, const IndexSet& b) { return a | b; }
    static IndexSet meet(const IndexSet& a, const IndexSet& b) { return a & b; }
    static IndexSet complement(const IndexSet& a) { return universe() - a; }

    /// S_0^1(R_X): empty when X is outside the ultrafilter, the unit when
    /// inside. S_1^0 behaves identically; transpositions fix every R_X.
    static IndexSet s01(const IndexSet& x) {
        return in_ultrafilter(x) ? universe() : empty();
    }
    static IndexSet s10(const IndexSet& x) { return s01(x); }
    static IndexSet transposition(int, int, const IndexSet& x) { return x; }

    static std::string to_string(const IndexSet& x) {
        std::string s = "R_";
        s += x.to_string();
        if (contains_q0(x)) s += "+Q0";
        return s;
    }
};

/// Certifies the complete-additivity failure of s_0^1: the supremum of the
/// atoms is the unit, every atom image under s_0^1 is empty, and the image
/// of the unit is the unit.
inline ValidationReport finco_nonadditivity_witness(int n, int sample_atoms = 50,
                                                    std::uint64_t seed = 0) {
    FinCoAlgebra alg(n);
    ValidationReport rep;
    rep.note("fragment: finite/cofinite X over Z+, ultrafilter decided by cofiniteness");

    // s_0^1(R_{k}) = 0 for every atom; spot checks ride on the case split
    for (std::uint32_t k = 1; k <= static_cast<std::uint32_t>(sample_atoms); ++k)
        if (!FinCoAlgebra::s01(FinCoAlgebra::atom(k)).is_empty())
            rep.fail("s01-atom-empty", "k=" + std::to_string(k));

    // finite unions of atoms stay finite, hence are killed by s_0^1
    IndexSet chain = FinCoAlgebra::empty();
    for (std::uint32_t k = 1; k <= static_cast<std::uint32_t>(sample_atoms); ++k) {
        chain = FinCoAlgebra::join(chain, FinCoAlgebra::atom(k));
        if (!FinCoAlgebra::s01(chain).is_empty())
            rep.fail("s01-finite-join-empty", "prefix through k=" + std::to_string(k));
    }

    // sup of all atoms is the unit: every proper element fails to bound
    // some atom, so no R_Y below the unit is an upper bound
    std::mt19937_64 rng(seed);
    for (int t = 0; t < sample_atoms; ++t) {
        IndexSet y;
        if (rng() & 1) {
            std::uint32_t r = 1 + static_cast<std::uint32_t>(rng() % 1000);
            y = IndexSet::cofinite({0, r});
        } else {
            std::vector<std::uint32_t> sup;
            for (int i = 0; i < 4; ++i)
                sup.push_back(1 + static_cast<std::uint32_t>(rng() % 1000));
            y = IndexSet::finite(sup);
        }
        bool found_unbounded_atom = false;
        for (std::uint32_t k = 1; k <= 2048 && !found_unbounded_atom; ++k)
            if (!y.contains(k)) found_unbounded_atom = true;
        if (!found_unbounded_atom)
            rep.fail("atoms-sup-unit", "proper element " + FinCoAlgebra::to_string(y) +
                                           " bounds all atoms");
    }
    if (FinCoAlgebra::s01(FinCoAlgebra::universe()) != FinCoAlgebra::universe())
        rep.fail("s01-unit", "s01(unit) is not the unit element");

    rep.note("sum of s01 over all atoms: empty (each image empty)");
    rep.note("s01 of the sum of all atoms: unit (the sum is the unit, in the ultrafilter)");
    return rep;
}

/// Closure of the fragment under its operations on seeded elements.
inline ValidationReport finco_closure_check(int n, int samples = 50,
                                            std::uint64_t seed = 0) {
    FinCoAlgebra alg(n);
    ValidationReport rep;
    rep.note("fragment: finite/cofinite X over Z+, seed=" + std::to_string(seed));
    std::mt19937_64 rng(seed);
    auto random_elem = [&]() {
        std::vector<std::uint32_t> sup;
        int count = static_cast<int>(rng() % 6);
        for (int i = 0; i < count; ++i) sup.push_back(1 + static_cast<std::uint32_t>(rng() % 40));
        if (rng() & 1) {
            sup.push_back(0);
            return IndexSet::cofinite(sup);
        }
        return IndexSet::finite(sup);
    };
    auto valid = [&](const IndexSet& x) {
        return !x.contains(0);  // inside Z+
    };
    for (int t = 0; t < samples; ++t) {
        IndexSet a = random_elem(), b = random_elem();
        if (!valid(FinCoAlgebra::join(a, b)))
            rep.fail("closure-join", FinCoAlgebra::to_string(a));
        if (!valid(FinCoAlgebra::meet(a, b)))
            rep.fail("closure-meet", FinCoAlgebra::to_string(a));
        if (!valid(FinCoAlgebra::complement(a)))
            rep.fail("closure-complement", FinCoAlgebra::to_string(a));
        if (FinCoAlgebra::complement(FinCoAlgebra::complement(a)) != a)
            rep.fail("complement-involution", FinCoAlgebra::to_string(a));
        if (!valid(FinCoAlgebra::s01(a))) rep.fail("closure-s01", FinCoAlgebra::to_string(a));
        if (FinCoAlgebra::transposition(0, 1, a) != a)
            rep.fail("transposition-fixes", FinCoAlgebra::to_string(a));
        // union computes R_{X u Y} with the ultrafilter bookkeeping built in
        if (FinCoAlgebra::contains_q0(FinCoAlgebra::join(a, b)) !=
            (FinCoAlgebra::contains_q0(a) || FinCoAlgebra::contains_q0(b)))
            rep.fail("q0-union-rule", FinCoAlgebra::to_string(a));
    }
    return rep;
}

}  // namespace atomlab
