#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "atomlab/monk.hpp"
#include "atomlab/rel.hpp"

using namespace atomlab;

TEST_CASE("evenly distributed worked cases") {
    REQUIRE(evenly_distributed(3, 5, 7));
    REQUIRE(!evenly_distributed(3, 5, 8));
    REQUIRE(evenly_distributed(4, 4, 4));
    REQUIRE(evenly_distributed(0, 1, 2));
    REQUIRE(evenly_distributed(7, 3, 5));  // order free
}

TEST_CASE("evenly distributed is permutation invariant below 30") {
    for (std::uint32_t i = 0; i < 30; ++i)
        for (std::uint32_t j = 0; j < 30; ++j)
            for (std::uint32_t k = 0; k < 30; ++k) {
                bool e = evenly_distributed(i, j, k);
                REQUIRE(e == evenly_distributed(i, k, j));
                REQUIRE(e == evenly_distributed(j, i, k));
                REQUIRE(e == evenly_distributed(j, k, i));
                REQUIRE(e == evenly_distributed(k, i, j));
                REQUIRE(e == evenly_distributed(k, j, i));
            }
}

static MonkParams default_params(int bound = 4) {
    MonkParams p;
    p.i_size = 6;
    p.l = 2;
    p.mu = 1;
    p.index_bound = bound;
    return p;
}

TEST_CASE("explicit atom count is 30t plus identity") {
    for (int t : {1, 2, 4, 6}) {
        RelAtomStructure s = build_monk(default_params(t));
        REQUIRE(s.atom_count() == 30 * t + 1);
    }
}

TEST_CASE("monk truncation validates as a relation atom structure") {
    RelAtomStructure s = build_monk(default_params(4));
    ValidationReport rep = validate_rel_structure(s);
    INFO(rep.to_string());
    REQUIRE(rep.ok());
}

TEST_CASE("monk consistency clauses") {
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure s = build_monk(default_params(8), &fam);
    // disjoint-block triples are consistent regardless of indices:
    // blocks {0,1},{2,3},{4,5} have empty intersection
    int b01 = -1, b23 = -1, b45 = -1;
    for (int b = 0; b < fam->block_count(); ++b) {
        const auto& cols = fam->blocks[static_cast<std::size_t>(b)].colours;
        if (cols == std::vector<int>{0, 1}) b01 = b;
        if (cols == std::vector<int>{2, 3}) b23 = b;
        if (cols == std::vector<int>{4, 5}) b45 = b;
    }
    auto coset = [&](int colour, int block) {
        for (int c = 0; c < fam->coset_count(); ++c)
            if (fam->cosets[static_cast<std::size_t>(c)].colour == colour &&
                fam->cosets[static_cast<std::size_t>(c)].block == block)
                return c;
        return -1;
    };
    REQUIRE(fam->triple_ok(coset(0, b01), 3, coset(2, b23), 5, coset(4, b45), 8));
    // indices (3,5,7), colours all 0, blocks all {0,1}: inconsistent
    REQUIRE(!fam->triple_ok(coset(0, b01), 3, coset(0, b01), 5, coset(0, b01), 7));
    // same but colours 0,0,1 with e(3,5,7): consistent
    REQUIRE(fam->triple_ok(coset(0, b01), 3, coset(0, b01), 5, coset(1, b01), 7));
    // identity clauses: (Id,x,y) consistent iff x=y
    REQUIRE(monk_consistent(*fam, 0, 5, 5));
    REQUIRE(!monk_consistent(*fam, 0, 5, 6));
    REQUIRE(monk_consistent(*fam, 5, 0, 5));
    REQUIRE(monk_consistent(*fam, 5, 5, 0));
    REQUIRE(!monk_consistent(*fam, 5, 6, 0));
}

TEST_CASE("monk consistency is invariant under argument permutations") {
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure s = build_monk(default_params(3), &fam);
    const int n = s.atom_count();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 4000; ++t) {
        int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int c = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        bool base = monk_consistent(*fam, a, b, c);
        REQUIRE(base == monk_consistent(*fam, a, c, b));
        REQUIRE(base == monk_consistent(*fam, b, a, c));
        REQUIRE(base == monk_consistent(*fam, b, c, a));
        REQUIRE(base == monk_consistent(*fam, c, a, b));
        REQUIRE(base == monk_consistent(*fam, c, b, a));
    }
}

TEST_CASE("triangle witness totality at small truncation") {
    // every pair of non-identity atoms has a consistent completion
    RelAtomStructure s = build_monk(default_params(6));
    for (int a = 1; a < s.atom_count(); ++a)
        for (int b = 1; b < s.atom_count(); ++b) {
            bool found = false;
            for (int c = 0; c < s.atom_count() && !found; ++c)
                if (s.consistent(a, b, c)) found = true;
            REQUIRE(found);
        }
}

TEST_CASE("all monk atoms are self-converse") {
    RelAtomStructure s = build_monk(default_params(2));
    for (int a = 0; a < s.atom_count(); ++a)
        REQUIRE(s.converse[static_cast<std::size_t>(a)] == a);
}

TEST_CASE("symbolic boolean operations agree with explicit ones on the truncation") {
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure s = build_monk(default_params(4), &fam);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
        AtomSet x(static_cast<std::size_t>(s.atom_count()));
        AtomSet y(static_cast<std::size_t>(s.atom_count()));
        for (int a = 0; a < s.atom_count(); ++a) {
            if (rng() & 1) x.set(static_cast<std::size_t>(a));
            if (rng() & 1) y.set(static_cast<std::size_t>(a));
        }
        MonkElement sx = monk_from_explicit(fam, x), sy = monk_from_explicit(fam, y);
        REQUIRE((sx | sy).truncate(s) == (x | y));
        REQUIRE((sx & sy).truncate(s) == (x & y));
        // complements agree on the truncation window
        REQUIRE(sx.complement().truncate(s) == x.complement());
        REQUIRE(sx.complement().complement() == sx);
    }
}

TEST_CASE("symbolic composition H^P;H^Q") {
    auto fam = MonkFamily::make(default_params(4));
    MonkElement hp = MonkElement::h_colour(fam, 0);
    MonkElement hq = MonkElement::h_colour(fam, 1);
    MonkElement h = MonkElement::h_all(fam);
    REQUIRE(monk_compose(hp, hq) == h);
    MonkElement pp = monk_compose(hp, hp);
    MonkElement expect = h & hp.complement();
    expect.id = true;
    REQUIRE(pp == expect);
}

TEST_CASE("maddux embedding check passes for all six colours") {
    ValidationReport rep = maddux_embedding_check(default_params(4));
    INFO(rep.to_string());
    REQUIRE(rep.ok());
}

TEST_CASE("symbolic composition agrees with explicit scan on the truncation") {
    // clause witnesses for these elements live at every index, so the
    // truncated scan sees the full answer
    std::shared_ptr<const MonkFamily> fam;
    MonkParams p = default_params(6);
    RelAtomStructure s = build_monk(p, &fam);
    for (int pc = 0; pc < 3; ++pc)
        for (int qc = 0; qc < 3; ++qc) {
            MonkElement hp = MonkElement::h_colour(fam, pc);
            MonkElement hq = MonkElement::h_colour(fam, qc);
            AtomSet explicit_result = ra_compose(s, hp.truncate(s), hq.truncate(s));
            AtomSet symbolic_truncated = monk_compose(hp, hq).truncate(s);
            REQUIRE(explicit_result == symbolic_truncated);
        }
}

TEST_CASE("symbolic composition against brute-force windows") {
    // generic finite elements: the symbolic result restricted to a window
    // must match a brute-force scan that is allowed witnesses beyond the
    // window (exactness of the full composition)
    MonkParams big = default_params(64);
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure wide = build_monk(big, &fam);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        MonkElement x = MonkElement::zero(fam), y = MonkElement::zero(fam);
        for (int i = 0; i < 3; ++i) {
            x = x | MonkElement::atom(
                        fam, static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                  fam->coset_count())),
                        static_cast<std::uint32_t>(rng() % 6));
            y = y | MonkElement::atom(
                        fam, static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                  fam->coset_count())),
                        static_cast<std::uint32_t>(rng() % 6));
        }
        if (t % 3 == 0) y = y.complement();
        MonkElement sym = monk_compose(x, y);
        // brute force over the wide truncation, read off inside index < 12:
        // witnesses for targets below 12 have indices < 24 by the equations
        AtomSet brute = ra_compose(wide, x.truncate(wide), y.truncate(wide));
        for (int c = 0; c < fam->coset_count(); ++c)
            for (std::uint32_t i = 0; i < 12; ++i) {
                int atom = monk_atom_id(*fam, c, static_cast<int>(i));
                INFO("coset " << c << " index " << i);
                REQUIRE(sym.coset[static_cast<std::size_t>(c)].contains(i) ==
                        brute.test(static_cast<std::size_t>(atom)));
            }
        REQUIRE(sym.id == brute.test(0));
    }
}

TEST_CASE("term algebra membership") {
    auto fam = MonkFamily::make(default_params(4));
    // finite atom sets are members
    MonkElement fin = MonkElement::atom(fam, 0, 2) | MonkElement::atom(fam, 5, 0);
    REQUIRE(term_algebra_member(fin));
    // complement of a member is a member
    REQUIRE(term_algebra_member(fin.complement()));
    // H^P is not a member for l=2: mixed within blocks containing P
    std::string witness;
    REQUIRE(!term_algebra_member(MonkElement::h_colour(fam, 0), &witness));
    REQUIRE(!witness.empty());
    // E^W is a member (cofinite in its block, empty elsewhere)
    REQUIRE(term_algebra_member(MonkElement::e_block(fam, 0)));
    REQUIRE(term_algebra_member(MonkElement::unit(fam)));
    REQUIRE(term_algebra_member(MonkElement::zero(fam)));
}

TEST_CASE("H_n variant witness condition at small scale") {
    MonkParams p;
    p.i_size = 8;
    p.l = 2;
    p.mu = 1;
    p.index_bound = 1;
    p.n = 3;
    REQUIRE(hn_witness_condition(p));
    MonkParams p4;
    p4.i_size = 10;
    p4.l = 2;
    p4.mu = 1;
    p4.index_bound = 1;
    p4.n = 4;
    REQUIRE(hn_witness_condition(p4));
}

TEST_CASE("monk parameter validation") {
    MonkParams bad;
    bad.i_size = 5;  // below 6
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    MonkParams badl;
    badl.l = 3;
    badl.i_size = 8;  // below 3l
    REQUIRE_THROWS_AS(badl.validate(), std::invalid_argument);
    MonkParams hn;
    hn.n = 3;
    hn.i_size = 6;  // below 2n+2
    REQUIRE_THROWS_AS(hn.validate(), std::invalid_argument);
}

TEST_CASE("copies parameter rides along inertly") {
    MonkParams p;
    p.i_size = 6;
    p.l = 2;
    p.mu = 2;
    p.index_bound = 2;
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure s = build_monk(p, &fam);
    REQUIRE(s.atom_count() == 60 * 2 + 1);  // two copies of each block
    // consistency ignores the copy coordinate: same sets, different copies
    int c_a = -1, c_b = -1;
    for (int c = 0; c < fam->coset_count(); ++c) {
        const auto& cs = fam->cosets[static_cast<std::size_t>(c)];
        const auto& blk = fam->blocks[static_cast<std::size_t>(cs.block)];
        if (cs.colour == 0 && blk.colours == std::vector<int>{0, 1}) {
            if (blk.copy == 0) c_a = c;
            if (blk.copy == 1) c_b = c;
        }
    }
    REQUIRE(c_a >= 0);
    REQUIRE(c_b >= 0);
    for (std::uint32_t i = 0; i < 5; ++i)
        REQUIRE(fam->triple_ok(c_a, 1, c_a, 2, c_a, 3) ==
                fam->triple_ok(c_b, 1, c_b, 2, c_b, 3));
}

TEST_CASE("symbolic composition generalizes to wider blocks and copies") {
    // l=3 family: distinct colour classes still compose to all of H
    MonkParams p3;
    p3.i_size = 9;
    p3.l = 3;
    p3.mu = 1;
    p3.index_bound = 2;
    auto fam3 = MonkFamily::make(p3);
    REQUIRE(monk_compose(MonkElement::h_colour(fam3, 0),
                         MonkElement::h_colour(fam3, 1)) == MonkElement::h_all(fam3));
    // two copies: the copy coordinate is inert in composition too
    MonkParams p2;
    p2.i_size = 6;
    p2.l = 2;
    p2.mu = 2;
    p2.index_bound = 2;
    auto fam2 = MonkFamily::make(p2);
    REQUIRE(monk_compose(MonkElement::h_colour(fam2, 2),
                         MonkElement::h_colour(fam2, 5)) == MonkElement::h_all(fam2));
    MonkElement pp = monk_compose(MonkElement::h_colour(fam2, 2),
                                  MonkElement::h_colour(fam2, 2));
    MonkElement want = MonkElement::h_all(fam2) & MonkElement::h_colour(fam2, 2).complement();
    want.id = true;
    REQUIRE(pp == want);
}

static MonkElement random_monk_element(std::shared_ptr<const MonkFamily> fam,
                                       std::mt19937_64& rng, bool allow_complement) {
    MonkElement e = MonkElement::zero(fam);
    int atoms = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < atoms; ++i)
        e = e | MonkElement::atom(
                    fam,
                    static_cast<int>(rng() % static_cast<std::uint64_t>(fam->coset_count())),
                    static_cast<std::uint32_t>(rng() % 6));
    if (rng() % 4 == 0) e.id = true;
    if (allow_complement && rng() % 3 == 0) e = e.complement();
    return e;
}

TEST_CASE("symbolic composition is associative") {
    // each composition is exact, so associativity of the full algebra must
    // come out exactly at the symbolic level
    auto fam = MonkFamily::make(default_params(4));
    std::mt19937_64 rng(41);
    for (int t = 0; t < 25; ++t) {
        MonkElement x = random_monk_element(fam, rng, true);
        MonkElement y = random_monk_element(fam, rng, true);
        MonkElement z = random_monk_element(fam, rng, true);
        REQUIRE(monk_compose(monk_compose(x, y), z) ==
                monk_compose(x, monk_compose(y, z)));
    }
}

TEST_CASE("symbolic peircean law") {
    auto fam = MonkFamily::make(default_params(4));
    std::mt19937_64 rng(43);
    for (int t = 0; t < 60; ++t) {
        MonkElement x = random_monk_element(fam, rng, true);
        MonkElement y = random_monk_element(fam, rng, true);
        MonkElement z = random_monk_element(fam, rng, true);
        bool lhs = monk_compose(x, y).intersects(z);
        bool rhs = monk_compose(monk_converse(x), z).intersects(y);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("symbolic composition windows with both sides cofinite") {
    MonkParams big = default_params(64);
    std::shared_ptr<const MonkFamily> fam;
    RelAtomStructure wide = build_monk(big, &fam);
    std::mt19937_64 rng(47);
    for (int t = 0; t < 6; ++t) {
        MonkElement x = random_monk_element(fam, rng, false).complement();
        MonkElement y = random_monk_element(fam, rng, false).complement();
        MonkElement sym = monk_compose(x, y);
        AtomSet brute = ra_compose(wide, x.truncate(wide), y.truncate(wide));
        for (int c = 0; c < fam->coset_count(); ++c)
            for (std::uint32_t i = 0; i < 12; ++i) {
                int atom = monk_atom_id(*fam, c, static_cast<int>(i));
                REQUIRE(sym.coset[static_cast<std::size_t>(c)].contains(i) ==
                        brute.test(static_cast<std::size_t>(atom)));
            }
        REQUIRE(sym.id == brute.test(0));
    }
}
