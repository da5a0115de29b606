#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/bits.hpp"
#include "atomlab/report.hpp"

namespace atomlab {

/// Relation atom structure: atoms, identity subset, converse involution and
/// the ternary consistency relation C, where (a,b,c) in C means c <= a;b.
/// The relation is either an explicit triple table or a rule; rule-backed
/// structures enumerate an explicit truncation of their atoms.
struct RelAtomStructure {
    std::vector<std::string> atom_names;
    AtomSet identity;
    std::vector<int> converse;
    std::function<bool(int, int, int)> rule;
    std::string rule_desc;  // empty for explicit tables

    // composition masks comp[a*n+b] = {c : (a,b,c) in C}; built by finalize()
    std::vector<AtomSet> comp_table;

    int atom_count() const { return static_cast<int>(atom_names.size()); }

    bool consistent(int a, int b, int c) const {
        if (!comp_table.empty())
            return comp_table[static_cast<std::size_t>(a) * atom_names.size() + b].test(
                static_cast<std::size_t>(c));
        return rule(a, b, c);
    }

    const AtomSet& comp(int a, int b) const {
        return comp_table[static_cast<std::size_t>(a) * atom_names.size() + b];
    }

    bool is_identity(int a) const { return identity.test(static_cast<std::size_t>(a)); }

    int atom_index(const std::string& name) const {
        for (int i = 0; i < atom_count(); ++i)
            if (atom_names[static_cast<std::size_t>(i)] == name) return i;
        return -1;
    }

    /// Precompute composition masks. Structures stay at desk scale, so this
    /// is eager; callers building thousands of atoms can skip it.
    void finalize() {
        const std::size_t n = atom_names.size();
        comp_table.assign(n * n, AtomSet(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                AtomSet& m = comp_table[a * n + b];
                for (std::size_t c = 0; c < n; ++c)
                    if (rule(static_cast<int>(a), static_cast<int>(b),
                             static_cast<int>(c)))
                        m.set(c);
            }
    }
};

/// Build an explicit structure from a triple list.
inline RelAtomStructure make_rel_structure(std::vector<std::string> names,
                                           std::vector<int> identity_atoms,
                                           std::vector<int> converse,
                                           std::vector<std::array<int, 3>> triples) {
    RelAtomStructure s;
    s.atom_names = std::move(names);
    s.identity = AtomSet(s.atom_names.size());
    for (int e : identity_atoms) s.identity.set(static_cast<std::size_t>(e));
    s.converse = std::move(converse);
    auto table = std::make_shared<std::vector<std::array<int, 3>>>(std::move(triples));
    const int n = s.atom_count();
    auto bits = std::make_shared<std::vector<bool>>(
        static_cast<std::size_t>(n) * n * n, false);
    for (const auto& t : *table)
        (*bits)[(static_cast<std::size_t>(t[0]) * n + t[1]) * n + t[2]] = true;
    s.rule = [bits, n](int a, int b, int c) {
        return (*bits)[(static_cast<std::size_t>(a) * n + b) * n + c];
    };
    s.finalize();
    return s;
}

/// Identity clauses forced by the relation-atom-structure axioms, for
/// self-converse rule families where the non-identity rule handles the rest.
/// id is the index of the unique identity atom.
inline bool identity_triple_clause(int id, int a, int b, int c) {
    if (a == id) return b == c;
    if (b == id) return a == c;
    return a == b;  // c == id: needs b = conv(a); callers are self-converse
}

/// Full axiom scan over the explicit atom list. Reports every violated
/// clause with a witnessing triple.
inline ValidationReport validate_rel_structure(const RelAtomStructure& s) {
    if (s.atom_count() == 0)
        throw std::invalid_argument("relation atom structure: empty atom list");
    if (s.comp_table.empty())
        throw std::invalid_argument(
            "relation atom structure too large for the exhaustive validator");
    ValidationReport rep;
    const int n = s.atom_count();
    if (!s.rule_desc.empty())
        rep.note("mode: explicit scan of rule-backed truncation (" + s.rule_desc + ")");
    else
        rep.note("mode: explicit");

    for (int a = 0; a < n; ++a) {
        int cc = s.converse[static_cast<std::size_t>(a)];
        if (cc < 0 || cc >= n || s.converse[static_cast<std::size_t>(cc)] != a) {
            rep.fail("converse-involution",
                     "atom " + s.atom_names[static_cast<std::size_t>(a)]);
        }
    }

    // identity witness: a = b iff some e in Id with (a,e,b) in C
    for (int a = 0; a < n && rep.violations.size() < 64; ++a)
        for (int b = 0; b < n; ++b) {
            bool witnessed = false;
            for (int e = 0; e < n && !witnessed; ++e)
                if (s.is_identity(e) && s.consistent(a, e, b)) witnessed = true;
            if (witnessed != (a == b)) {
                rep.fail("identity-witness",
                         "(" + s.atom_names[static_cast<std::size_t>(a)] + "," +
                             s.atom_names[static_cast<std::size_t>(b)] + ")");
                break;
            }
        }

    // Peircean closure: (a,b,c) in C implies (conv a, c, b) and (c, conv b, a)
    for (int a = 0; a < n && rep.violations.size() < 64; ++a)
        for (int b = 0; b < n; ++b) {
            const AtomSet& m = s.comp(a, b);
            bool bad = false;
            m.for_each([&](std::size_t c) {
                int ci = static_cast<int>(c);
                if (!s.consistent(s.converse[static_cast<std::size_t>(a)], ci, b) ||
                    !s.consistent(ci, s.converse[static_cast<std::size_t>(b)], a)) {
                    if (!bad)
                        rep.fail("peircean-closure",
                                 "(" + s.atom_names[static_cast<std::size_t>(a)] + "," +
                                     s.atom_names[static_cast<std::size_t>(b)] + "," +
                                     s.atom_names[c] + ")");
                    bad = true;
                }
            });
        }

    // triangle witness: (a,b,c),(c,d,g) in C implies some f with
    // (a,f,g),(b,d,f) in C; checked as (a;b);d subset a;(b;d) on atom level
    for (int a = 0; a < n && rep.violations.size() < 64; ++a)
        for (int b = 0; b < n; ++b) {
            const AtomSet& ab = s.comp(a, b);
            for (int d = 0; d < n; ++d) {
                AtomSet lhs(static_cast<std::size_t>(n));
                ab.for_each([&](std::size_t c) {
                    lhs |= s.comp(static_cast<int>(c), d);
                });
                AtomSet rhs(static_cast<std::size_t>(n));
                s.comp(b, d).for_each([&](std::size_t f) {
                    rhs |= s.comp(a, static_cast<int>(f));
                });
                if (!lhs.subset_of(rhs)) {
                    AtomSet gap = lhs - rhs;
                    rep.fail("triangle-witness",
                             "(" + s.atom_names[static_cast<std::size_t>(a)] + ";" +
                                 s.atom_names[static_cast<std::size_t>(b)] + ");" +
                                 s.atom_names[static_cast<std::size_t>(d)] +
                                 " misses g=" +
                                 s.atom_names[gap.members().front()]);
                }
            }
        }
    return rep;
}

/// r;s = {c : exists a in r, b in s with (a,b,c) in C}
inline AtomSet ra_compose(const RelAtomStructure& s, const AtomSet& x,
                          const AtomSet& y) {
    AtomSet out(static_cast<std::size_t>(s.atom_count()));
    if (!s.comp_table.empty()) {
        x.for_each([&](std::size_t a) {
            y.for_each([&](std::size_t b) {
                out |= s.comp(static_cast<int>(a), static_cast<int>(b));
            });
        });
        return out;
    }
    for (int c = 0; c < s.atom_count(); ++c) {
        bool hit = false;
        x.for_each([&](std::size_t a) {
            if (hit) return;
            y.for_each([&](std::size_t b) {
                if (!hit && s.rule(static_cast<int>(a), static_cast<int>(b), c))
                    hit = true;
            });
        });
        if (hit) out.set(static_cast<std::size_t>(c));
    }
    return out;
}

inline AtomSet ra_converse(const RelAtomStructure& s, const AtomSet& x) {
    AtomSet out(static_cast<std::size_t>(s.atom_count()));
    x.for_each([&](std::size_t a) {
        out.set(static_cast<std::size_t>(s.converse[a]));
    });
    return out;
}

/// The Maddux algebra on colours I plus identity: P;P = (I minus P) + Id,
/// P;Q = all colours for P != Q. Atom 0 is the identity.
inline RelAtomStructure maddux_structure(int i_size) {
    if (i_size < 1) throw std::invalid_argument("maddux: need at least one colour");
    RelAtomStructure s;
    s.atom_names.push_back("Id");
    for (int p = 0; p < i_size; ++p) s.atom_names.push_back("P" + std::to_string(p));
    const int n = s.atom_count();
    s.identity = AtomSet(static_cast<std::size_t>(n));
    s.identity.set(0);
    s.converse.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) s.converse[static_cast<std::size_t>(a)] = a;
    s.rule = [](int a, int b, int c) {
        if (a == 0 || b == 0 || c == 0) return identity_triple_clause(0, a, b, c);
        if (a != b) return true;  // P;Q = all colours
        return c != a;            // P;P misses exactly P
    };
    s.rule_desc = "maddux I=" + std::to_string(i_size);
    s.finalize();
    return s;
}

}  // namespace atomlab
