#include <catch2/catch_amalgamated.hpp>

#include "atomlab/graph.hpp"
#include "atomlab/graph_alg.hpp"
#include "atomlab/repr.hpp"

using namespace atomlab;

static MonkParams params(int bound = 4) {
    MonkParams p;
    p.i_size = 6;
    p.l = 2;
    p.mu = 1;
    p.index_bound = bound;
    return p;
}

TEST_CASE("uf triple consistency: identity clauses") {
    auto fam = MonkFamily::make(params());
    UfLabel id = UfLabel::id_label();
    UfLabel a = UfLabel::principal_label(0, 1);
    UfLabel b = UfLabel::principal_label(3, 2);
    REQUIRE(uf_triple_consistent(fam, id, a, a));
    REQUIRE(!uf_triple_consistent(fam, id, a, b));
    REQUIRE(uf_triple_consistent(fam, a, id, a));
    REQUIRE(uf_triple_consistent(fam, id, id, id));
    REQUIRE(!uf_triple_consistent(fam, a, id, id));
}

TEST_CASE("uf triple consistency: principal case reduces to atom consistency") {
    auto fam = MonkFamily::make(params());
    // indices 3,5,8 not evenly distributed, same block {0,1}, same colour:
    // inconsistent atoms give an inconsistent principal triple
    int c0 = 0;  // colour of coset 0 within its block
    UfLabel u3 = UfLabel::principal_label(c0, 3);
    UfLabel u5 = UfLabel::principal_label(c0, 5);
    UfLabel u8 = UfLabel::principal_label(c0, 8);
    bool atoms_ok = fam->triple_ok(c0, 3, c0, 5, c0, 8);
    REQUIRE(uf_triple_consistent(fam, u8, u3, u5) == atoms_ok);
    REQUIRE(!atoms_ok);
    // distinct colours with even distribution: consistent
    UfLabel v7 = UfLabel::principal_label(1, 7);
    REQUIRE(uf_triple_consistent(fam, v7, u3, u5));
}

TEST_CASE("uf triple: block against two principals via symbolic composition") {
    auto fam = MonkFamily::make(params());
    // a;b meets E^W infinitely iff the three block sets share no colour
    for (int w = 0; w < fam->block_count(); ++w)
        for (int ca = 0; ca < fam->coset_count(); ca += 7)
            for (int cb = 0; cb < fam->coset_count(); cb += 5) {
                UfLabel uw = UfLabel::block_label(w);
                UfLabel ua = UfLabel::principal_label(ca, 2);
                UfLabel ub = UfLabel::principal_label(cb, 4);
                std::uint32_t meet =
                    fam->blocks[static_cast<std::size_t>(w)].colour_mask &
                    fam->blocks[static_cast<std::size_t>(
                                    fam->cosets[static_cast<std::size_t>(ca)].block)]
                        .colour_mask &
                    fam->blocks[static_cast<std::size_t>(
                                    fam->cosets[static_cast<std::size_t>(cb)].block)]
                        .colour_mask;
                REQUIRE(uf_triple_consistent(fam, uw, ua, ub) == (meet == 0));
            }
}

TEST_CASE("uf triples with two or more blocks are consistent and flagged") {
    auto fam = MonkFamily::make(params());
    UfConsistency r = uf_triple_consistent_ex(fam, UfLabel::block_label(0),
                                              UfLabel::block_label(5),
                                              UfLabel::principal_label(2, 9));
    REQUIRE(r.consistent);
    REQUIRE(r.multi_block);
    UfConsistency r3 = uf_triple_consistent_ex(fam, UfLabel::block_label(1),
                                               UfLabel::block_label(2),
                                               UfLabel::block_label(3));
    REQUIRE(r3.consistent);
    REQUIRE(r3.multi_block);
    UfConsistency r1 = uf_triple_consistent_ex(fam, UfLabel::block_label(1),
                                               UfLabel::principal_label(0, 0),
                                               UfLabel::principal_label(1, 0));
    REQUIRE(!r1.multi_block);
}

TEST_CASE("extend coloured graph produces consistent graphs and never relabels") {
    auto fam = MonkFamily::make(params());
    ColouredGraph g = ColouredGraph::single(fam);
    UfLabel ua = UfLabel::principal_label(0, 0);
    // (l(0,0), U^a, U^a) = (Id, a, a): consistent; add the witness
    ExtendResult ext = extend_coloured_graph(g, 0, 0, ua, ua);
    REQUIRE(ext.graph);
    REQUIRE(ext.graph->nodes == 2);
    REQUIRE(ext.graph->label(1, 0) == ua);
    REQUIRE(ext.graph->validate().ok());
    // extend along the new edge
    UfLabel ub = UfLabel::principal_label(7, 2);
    if (uf_triple_consistent(fam, ext.graph->label(0, 1), ub, ub)) {
        ExtendResult ext2 = extend_coloured_graph(*ext.graph, 0, 1, ub, ub);
        REQUIRE(ext2.graph);
        REQUIRE(ext2.graph->validate().ok());
        // old edges unchanged
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                REQUIRE(ext2.graph->label(x, y) == ext.graph->label(x, y));
    }
    // identity labels are rejected as witnesses between distinct nodes
    REQUIRE_THROWS_AS(
        extend_coloured_graph(*ext.graph, 0, 1, UfLabel::id_label(), UfLabel::id_label()),
        std::invalid_argument);
}

TEST_CASE("build complete graph discharges obligations and stays consistent") {
    BuildGraphResult res = build_complete_graph(params(2), 8);
    REQUIRE(res.graph.nodes == 8);
    REQUIRE(res.graph.validate().ok());
    REQUIRE(res.obligations_discharged == 7);  // one new node per discharge
    BuildGraphResult single = build_complete_graph(params(2), 1);
    REQUIRE(single.graph.nodes == 1);
    // obligation count is monotone in size
    BuildGraphResult bigger = build_complete_graph(params(2), 10);
    REQUIRE(bigger.obligations_discharged >= res.obligations_discharged);
}

TEST_CASE("rep checks on a bounded complete graph") {
    BuildGraphResult res = build_complete_graph(params(3), 10);
    ValidationReport rep = rep_check(params(3), res.graph, 20, 0);
    INFO(rep.to_string());
    REQUIRE(rep.ok());
}

TEST_CASE("square representation of the one-atom structure at base 1") {
    RelAtomStructure s = make_rel_structure({"e"}, {0}, {0}, {{{0, 0, 0}}});
    SquareRepResult res = find_square_rep(s, 3);
    REQUIRE(res.rep);
    REQUIRE(res.rep->base == 1);
}

TEST_CASE("square representation of a point-like two-atom structure") {
    // Id and a self-converse diversity atom with all diversity triangles
    RelAtomStructure s = make_rel_structure(
        {"Id", "a"}, {0}, {0, 1},
        {{{0, 0, 0}}, {{0, 1, 1}}, {{1, 0, 1}}, {{1, 1, 0}}, {{1, 1, 1}}});
    REQUIRE(validate_rel_structure(s).ok());
    SquareRepResult res = find_square_rep(s, 5);
    REQUIRE(res.rep);
    REQUIRE(res.rep->base == 3);  // needs a triangle of diversity edges
    // composition containment holds on all base triples
    const SquareRep& r = *res.rep;
    for (int x = 0; x < r.base; ++x)
        for (int y = 0; y < r.base; ++y)
            for (int z = 0; z < r.base; ++z)
                REQUIRE(s.consistent(r.at(x, y), r.at(y, z), r.at(x, z)));
    for (int i = 0; i < r.base; ++i)
        for (int j = 0; j < r.base; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    if (!s.consistent(a, b, r.at(i, j))) continue;
                    bool found = false;
                    for (int k = 0; k < r.base && !found; ++k)
                        if (r.at(i, k) == a && r.at(k, j) == b) found = true;
                    REQUIRE(found);
                }
}

TEST_CASE("maddux algebra has no square representation on small bases") {
    RelAtomStructure m = maddux_structure(6);
    SquareRepResult res = find_square_rep(m, 5);
    REQUIRE(!res.rep);
    REQUIRE(res.max_base_searched == 5);
}

TEST_CASE("ramsey worked cases") {
    REQUIRE(ramsey_check(1, 3).verdict == RamseyVerdict::Forced);
    REQUIRE(ramsey_check(2, 3).verdict == RamseyVerdict::Avoidable);
    RamseyResult r5 = ramsey_check(2, 5);
    REQUIRE(r5.verdict == RamseyVerdict::Avoidable);
    REQUIRE(r5.witness.size() == 10);
    // the witness really is triangle-free per colour
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) edges.push_back({i, j});
    auto colour_of = [&](int a, int b) {
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (edges[e] == std::make_pair(std::min(a, b), std::max(a, b)))
                return r5.witness[e];
        return -1;
    };
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            for (int c = b + 1; c < 5; ++c)
                REQUIRE(!(colour_of(a, b) == colour_of(b, c) &&
                          colour_of(b, c) == colour_of(a, c)));
    REQUIRE(ramsey_check(2, 6).verdict == RamseyVerdict::Forced);
}

TEST_CASE("ramsey is monotone in the clique size") {
    bool forced_seen = false;
    for (int t = 3; t <= 7; ++t) {
        RamseyVerdict v = ramsey_check(2, t).verdict;
        if (v == RamseyVerdict::Forced) forced_seen = true;
        if (forced_seen) REQUIRE(v == RamseyVerdict::Forced);
    }
}

TEST_CASE("ramsey budget exhaustion is inconclusive") {
    REQUIRE(ramsey_check(3, 10, 50).verdict == RamseyVerdict::Inconclusive);
}
