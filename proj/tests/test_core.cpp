#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "atomlab/bits.hpp"
#include "atomlab/index_set.hpp"
#include "atomlab/rel.hpp"

using namespace atomlab;

TEST_CASE("atomset basics") {
    AtomSet a(70);
    a.set(0);
    a.set(69);
    REQUIRE(a.count() == 2);
    REQUIRE(a.test(69));
    REQUIRE(!a.test(1));
    REQUIRE(a.complement().count() == 68);
    REQUIRE((a & a.complement()).empty());
    REQUIRE((a | a.complement()).is_all());
    REQUIRE(a.subset_of(AtomSet::all(70)));
}

TEST_CASE("index set boolean algebra") {
    IndexSet f = IndexSet::finite({1, 3, 5});
    IndexSet c = IndexSet::cofinite({2, 4});
    REQUIRE(f.contains(3));
    REQUIRE(!f.contains(2));
    REQUIRE(c.contains(0));
    REQUIRE(!c.contains(4));
    REQUIRE(f.complement().complement() == f);
    REQUIRE(c.complement().complement() == c);
    REQUIRE((f | f.complement()).is_full());
    REQUIRE((f & f.complement()).is_empty());
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        std::uint32_t k = static_cast<std::uint32_t>(rng() % 40);
        REQUIRE((f | c).contains(k) == (f.contains(k) || c.contains(k)));
        REQUIRE((f & c).contains(k) == (f.contains(k) && c.contains(k)));
        REQUIRE((f - c).contains(k) == (f.contains(k) && !c.contains(k)));
    }
    REQUIRE(c.tail_start() == 5);
    REQUIRE(c.min() == 0);
    REQUIRE(IndexSet::cofinite({0, 1}).min() == 2);
}

static RelAtomStructure one_atom() {
    return make_rel_structure({"e"}, {0}, {0}, {{{0, 0, 0}}});
}

TEST_CASE("one-atom identity algebra validates") {
    RelAtomStructure s = one_atom();
    REQUIRE(validate_rel_structure(s).ok());
}

TEST_CASE("removing the only triple breaks the identity witness") {
    RelAtomStructure s = make_rel_structure({"e"}, {0}, {0}, {});
    ValidationReport rep = validate_rel_structure(s);
    REQUIRE(!rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.clause == "identity-witness") found = true;
    REQUIRE(found);
}

TEST_CASE("empty atom list is a structural error") {
    RelAtomStructure s;
    REQUIRE_THROWS_AS(validate_rel_structure(s), std::invalid_argument);
}

TEST_CASE("identity law Id;X = X") {
    RelAtomStructure m = maddux_structure(6);
    REQUIRE(validate_rel_structure(m).ok());
    AtomSet id = m.identity;
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        AtomSet x(static_cast<std::size_t>(m.atom_count()));
        for (int a = 0; a < m.atom_count(); ++a)
            if (rng() & 1) x.set(static_cast<std::size_t>(a));
        REQUIRE(ra_compose(m, id, x) == x);
        REQUIRE(ra_compose(m, x, id) == x);
    }
}

TEST_CASE("maddux composition table") {
    RelAtomStructure m = maddux_structure(6);
    for (int p = 1; p <= 6; ++p) {
        AtomSet pp = ra_compose(m, AtomSet::single(7, static_cast<std::size_t>(p)),
                                AtomSet::single(7, static_cast<std::size_t>(p)));
        REQUIRE(pp.test(0));
        for (int q = 1; q <= 6; ++q) REQUIRE(pp.test(static_cast<std::size_t>(q)) == (q != p));
    }
    AtomSet pq = ra_compose(m, AtomSet::single(7, 1), AtomSet::single(7, 2));
    REQUIRE(!pq.test(0));
    for (int q = 1; q <= 6; ++q) REQUIRE(pq.test(static_cast<std::size_t>(q)));
}

TEST_CASE("converse is an involution and fixes the unit") {
    RelAtomStructure m = maddux_structure(5);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        AtomSet x(static_cast<std::size_t>(m.atom_count()));
        for (int a = 0; a < m.atom_count(); ++a)
            if (rng() & 1) x.set(static_cast<std::size_t>(a));
        REQUIRE(ra_converse(m, ra_converse(m, x)) == x);
    }
    AtomSet all = AtomSet::all(static_cast<std::size_t>(m.atom_count()));
    REQUIRE(ra_converse(m, all) == all);
}

// element-level Peircean law, exhaustive on small structures:
// (X;Y).Z != 0  iff  (conv X;Z).Y != 0
static void check_peirce_exhaustive(const RelAtomStructure& s) {
    const int n = s.atom_count();
    REQUIRE(n <= 8);
    const std::uint32_t total = 1u << n;
    auto to_set = [&](std::uint32_t m) {
        AtomSet x(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a)
            if (m >> a & 1) x.set(static_cast<std::size_t>(a));
        return x;
    };
    std::vector<std::uint32_t> comp(static_cast<std::size_t>(total) * total, 0);
    for (std::uint32_t mx = 0; mx < total; ++mx)
        for (std::uint32_t my = 0; my < total; ++my) {
            AtomSet r = ra_compose(s, to_set(mx), to_set(my));
            std::uint32_t bits = 0;
            r.for_each([&](std::size_t a) { bits |= 1u << a; });
            comp[static_cast<std::size_t>(mx) * total + my] = bits;
        }
    std::vector<std::uint32_t> conv(total, 0);
    for (std::uint32_t mx = 0; mx < total; ++mx) {
        AtomSet r = ra_converse(s, to_set(mx));
        r.for_each([&](std::size_t a) { conv[mx] |= 1u << a; });
    }
    for (std::uint32_t mx = 0; mx < total; ++mx)
        for (std::uint32_t my = 0; my < total; ++my) {
            std::uint32_t xy = comp[static_cast<std::size_t>(mx) * total + my];
            for (std::uint32_t mz = 0; mz < total; ++mz) {
                bool lhs = (xy & mz) != 0;
                bool rhs =
                    (comp[static_cast<std::size_t>(conv[mx]) * total + mz] & my) != 0;
                if (lhs != rhs) {
                    INFO("X=" << mx << " Y=" << my << " Z=" << mz);
                    REQUIRE(lhs == rhs);
                    return;
                }
            }
        }
}

TEST_CASE("peircean law at element level, exhaustive to 8 atoms") {
    check_peirce_exhaustive(one_atom());
    check_peirce_exhaustive(maddux_structure(4));  // 5 atoms
    check_peirce_exhaustive(maddux_structure(7));  // 8 atoms
}
