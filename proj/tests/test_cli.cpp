#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "atomlab/cli.hpp"
#include "atomlab/finco.hpp"
#include "atomlab/io.hpp"

using namespace atomlab;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "cli_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string strip_wall(const std::string& report) {
    auto pos = report.rfind("wall_ms:");
    return pos == std::string::npos ? report : report.substr(0, pos);
}

}  // namespace

TEST_CASE("graph file round trip") {
    Graph g = Graph::make(4, {{0, 1}, {2, 3}, {1, 2}});
    Graph back = parse_graph(serialize_graph(g));
    REQUIRE(back.v == g.v);
    REQUIRE(back.edges == g.edges);
    REQUIRE_THROWS_AS(parse_graph("edge 0 1\n"), ParseError);
    REQUIRE_THROWS_AS(parse_graph("graph 2\nedge 0 2\n"), ParseError);
}

TEST_CASE("structure file round trip on an explicit structure") {
    RelAtomStructure s = make_rel_structure(
        {"Id", "a"}, {0}, {0, 1},
        {{{0, 0, 0}}, {{0, 1, 1}}, {{1, 0, 1}}, {{1, 1, 0}}, {{1, 1, 1}}});
    std::string text = serialize_rel_structure(s, "pt");
    ParsedStructure ps = parse_structure(text);
    REQUIRE(ps.rel);
    REQUIRE(ps.name == "pt");
    REQUIRE(ps.rel->atom_count() == 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                REQUIRE(ps.rel->consistent(a, b, c) == s.consistent(a, b, c));
    // canonical serialization is a fixpoint
    REQUIRE(serialize_rel_structure(*ps.rel, "pt") == text);
}

TEST_CASE("monk rule file loads and matches build_monk") {
    std::string path = write_temp("monk.ras", "kind rel\nname m\nrule: monk I=6 l=2 mu=1 bound=3\n");
    ParsedStructure ps = load_structure(path);
    REQUIRE(ps.rel);
    REQUIRE(ps.monk_fam);
    MonkParams p;
    p.index_bound = 3;
    RelAtomStructure direct = build_monk(p);
    REQUIRE(ps.rel->atom_count() == direct.atom_count());
    for (int t = 0; t < 500; ++t) {
        int a = t % direct.atom_count();
        int b = (t * 7) % direct.atom_count();
        int c = (t * 13) % direct.atom_count();
        REQUIRE(ps.rel->consistent(a, b, c) == direct.consistent(a, b, c));
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed lines name their line number") {
    try {
        parse_structure("kind rel\natom a\ntriple a a\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.line == 3);
    }
}

TEST_CASE("one-atom file validates through the cli") {
    std::string path = write_temp(
        "one.ras", "kind rel\nname one\natom e\nidentity e\ntriple e e e\n");
    CommandResult res = run_command({"validate", path});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("verdict: valid") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("invalid structures are a conclusive verdict, not an error") {
    std::string path =
        write_temp("bad.ras", "kind rel\nname bad\natom e\nidentity e\n");
    CommandResult res = run_command({"validate", path});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("verdict: invalid") != std::string::npos);
    REQUIRE(res.report.find("identity-witness") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("unknown subcommands and missing files exit 1") {
    REQUIRE(run_command({"frobnicate"}).exit_code == 1);
    REQUIRE(run_command({"validate", "no_such_file.ras"}).exit_code == 1);
    REQUIRE(run_command({}).exit_code == 1);
}

TEST_CASE("reports are byte-identical modulo wall time") {
    std::vector<std::string> argv{"ramsey", "--colours", "2", "--clique", "5"};
    CommandResult a = run_command(argv);
    CommandResult b = run_command(argv);
    REQUIRE(strip_wall(a.report) == strip_wall(b.report));
    REQUIRE(a.report.find("seed: 0") != std::string::npos);
}

TEST_CASE("game command reports a winner and writes a replayable certificate") {
    std::string path = write_temp(
        "game.ras", "kind rel\nname one\natom e\nidentity e\ntriple e e e\n");
    CommandResult res = run_command({"game-f", path, "--n", "3", "--m", "4", "--rounds",
                                     "2", "--cert", "cli_test_cert.txt"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("winner=exists") != std::string::npos);
    std::ifstream cert("cli_test_cert.txt");
    REQUIRE(cert.good());
    std::string line;
    bool has_edge = false;
    while (std::getline(cert, line))
        if (line.rfind("edge ", 0) == 0 && line.find("move") != std::string::npos &&
            line.find("-> response") != std::string::npos)
            has_edge = true;
    REQUIRE(has_edge);
    std::remove(path.c_str());
    std::remove("cli_test_cert.txt");
}

TEST_CASE("ramsey subcommand matches the library") {
    CommandResult res = run_command({"ramsey", "--colours", "2", "--clique", "6"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("monochromatic-triangle-forced") != std::string::npos);
}

TEST_CASE("finco subcommand reports the witness and the s01 case split") {
    CommandResult res = run_command({"finco", "--n", "3", "--s01", "finite:1"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("result: R_{}") != std::string::npos);
    REQUIRE(res.report.find("nonadditivity-witnessed") != std::string::npos);
    CommandResult res2 = run_command({"finco", "--n", "3", "--s01", "cofinite:1"});
    REQUIRE(res2.report.find("result: R_cofinite~{0}+Q0") != std::string::npos);
}

TEST_CASE("inconclusive verdicts carry the exhausted budgets and exit 2") {
    std::string path = write_temp(
        "eta.cas", "kind cyl\nname ek2\nrule: eta graph=cli_test_k2.graph n=3\n");
    write_temp("k2.graph", "graph 2\nedge 0 1\n");
    // tiny wall budget forces inconclusive on a nontrivial game
    setenv("ATOMLAB_BUDGET_MS", "1", 1);
    CommandResult res =
        run_command({"game-f", path, "--m", "5", "--rounds", "4"});
    unsetenv("ATOMLAB_BUDGET_MS");
    if (res.report.find("winner=inconclusive") != std::string::npos) {
        REQUIRE(res.exit_code == 2);
        REQUIRE(res.report.find("max_positions=") != std::string::npos);
    }
    std::remove(path.c_str());
    std::remove("cli_test_k2.graph");
}

TEST_CASE("element spec parsing") {
    RelAtomStructure m = maddux_structure(4);
    REQUIRE(parse_element_spec(m, "all").is_all());
    REQUIRE(parse_element_spec(m, "none").empty());
    REQUIRE(parse_element_spec(m, "id") == m.identity);
    AtomSet x = parse_element_spec(m, "atoms:1,3");
    REQUIRE(x.count() == 2);
    REQUIRE(parse_element_spec(m, "~atoms:1,3") == x.complement());
    REQUIRE_THROWS_AS(parse_element_spec(m, "wat"), std::invalid_argument);
}

TEST_CASE("cyl structure file round trip") {
    CylAtomStructure s;
    s.n = 3;
    s.atom_names = {"u", "v", "w"};
    s.diag.assign(9, AtomSet(3));
    for (int i = 0; i < 3; ++i)
        s.diag[static_cast<std::size_t>(i) * 3 + i] = AtomSet::all(3);
    s.diag[1].set(0);
    s.diag[3].set(0);  // u under d_01
    s.equiv.push_back(AtomRel::partition({0, 0, 1}, 3));
    s.equiv.push_back(AtomRel::partition({0, 1, 1}, 3));
    s.equiv.push_back(AtomRel::partition({0, 1, 2}, 3));
    std::string text = serialize_cyl_structure(s, "toy");
    ParsedStructure ps = parse_structure(text);
    REQUIRE(ps.cyl);
    REQUIRE(ps.cyl->n == 3);
    REQUIRE(ps.cyl->atom_count() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(ps.cyl->d(i, j) == s.d(i, j));
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                REQUIRE(ps.cyl->equiv[static_cast<std::size_t>(i)].related(a, b) ==
                        s.equiv[static_cast<std::size_t>(i)].related(a, b));
    // serialization of the parsed structure is a fixpoint
    REQUIRE(serialize_cyl_structure(*ps.cyl, "toy") == text);
}

TEST_CASE("eta rule file exports and reloads") {
    std::string gpath = write_temp("rt.graph", "graph 2\nedge 0 1\n");
    CommandResult res = run_command(
        {"eta", "--file", gpath, "--n", "3", "--out", "cli_test_rt.cas"});
    REQUIRE(res.exit_code == 0);
    ParsedStructure ps = load_structure("cli_test_rt.cas");
    REQUIRE(ps.cyl);
    REQUIRE(ps.cyl->atom_count() == 181);
    std::remove(gpath.c_str());
    std::remove("cli_test_rt.cas");
}

TEST_CASE("matrix budget exhaustion is inconclusive, exit 2") {
    std::string gpath = write_temp("k3b.graph", "graph 3\nedge 0 1\nedge 1 2\nedge 0 2\n");
    std::string spath =
        write_temp("k3b.ras", "kind rel\nname a\nrule: alpha graph=" + gpath + " n=3\n");
    CommandResult res = run_command({"matrices", spath, "--n", "5"});
    // 10 atoms, ten free cells: the default budget refuses
    REQUIRE(res.exit_code == 2);
    REQUIRE(res.report.find("verdict: inconclusive") != std::string::npos);
    std::remove(gpath.c_str());
    std::remove(spath.c_str());
}

TEST_CASE("certificates are deterministic across runs") {
    std::string path = write_temp(
        "det.ras", "kind rel\nname one\natom e\nidentity e\ntriple e e e\n");
    auto read_file = [](const char* p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    run_command({"game-f", path, "--n", "3", "--m", "4", "--rounds", "3", "--cert",
                 "cli_test_det1.txt"});
    run_command({"game-f", path, "--n", "3", "--m", "4", "--rounds", "3", "--cert",
                 "cli_test_det2.txt"});
    std::string a = read_file("cli_test_det1.txt");
    std::string b = read_file("cli_test_det2.txt");
    REQUIRE(!a.empty());
    REQUIRE(a == b);
    std::remove(path.c_str());
    std::remove("cli_test_det1.txt");
    std::remove("cli_test_det2.txt");
}

TEST_CASE("explicit cyl file validates through the cli") {
    CylAtomStructure s;
    s.n = 3;
    s.atom_names = {"u", "v"};
    s.diag.assign(9, AtomSet::all(2));
    s.equiv.push_back(AtomRel::partition({0, 0}, 2));
    s.equiv.push_back(AtomRel::partition({0, 1}, 2));
    s.equiv.push_back(AtomRel::partition({0, 1}, 2));
    std::string path = write_temp("toy.cas", serialize_cyl_structure(s, "toy"));
    CommandResult res = run_command({"validate", path});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report.find("verdict: valid") != std::string::npos);
    std::remove(path.c_str());
}
