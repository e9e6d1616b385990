#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "wata/io.hpp"

using namespace wata;
using wata::testing::m_two;
using wata::testing::random_wta;
using wata::testing::Rng;

namespace {

const char* kSample = R"(wta {
  semiring int            # one of: bool | nat | int | rat
  symbol sigma 2
  symbol alpha 0
  state q0
  state q1
  final q0 : 1            # omitted finals are 0
  trans alpha () -> q1 : 1
  trans sigma (q1, q1) -> q0 : 2   # omitted transitions are 0
}
)";

} // namespace

TEST_CASE("parsing the documented example") {
    Wta m = parse_wta(kSample, "sample");
    CHECK(m.semiring().carrier() == Carrier::integer);
    CHECK(m.states().labels() == std::vector<std::string>{"q0", "q1"});
    CHECK(m.alphabet().symbols().front().name == "sigma");
    CHECK(m.final_weights().at(0).is_one());
    CHECK(m.final_weights().at(1).is_zero());
    CHECK(eval(m, parse_tree("sigma(alpha, alpha)")) == m.semiring().make(2));
    CHECK(m.name() == "sample");
}

TEST_CASE("round trip is the identity on random automata") {
    Rng rng(555);
    RankedAlphabet mixed({{"alpha", 0}, {"gamma", 1}, {"sigma", 2}});
    for (const Carrier carrier :
         {Carrier::boolean, Carrier::natural, Carrier::integer, Carrier::rational}) {
        for (int rep = 0; rep < 6; ++rep) {
            Wta m = random_wta(rng, Semiring(carrier), mixed, 1 + rep % 4);
            Wta back = parse_wta(print_wta(m));
            REQUIRE(back == m);
            REQUIRE(print_wta(back) == print_wta(m));
        }
    }
    Wta two = m_two();
    CHECK(parse_wta(print_wta(two)) == two);
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_wta("wta {\n  semiring nat\n  symbol sigma 2\n  state q0\n"
                  "  trans sigma (q0) -> q0 : 1\n}\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
        CHECK(std::string(e.what()).find("rank 2") != std::string::npos);
    }

    // value not in the declared carrier
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  symbol a 0\n  state q0\n"
                              "  final q0 : -1\n}\n"),
                    ParseError);
    // weights before the semiring is known
    CHECK_THROWS_AS(parse_wta("wta {\n  symbol a 0\n  state q0\n  final q0 : 1\n"
                              "  semiring nat\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  state q0\n  state q0\n}\n"), ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  symbol a 0\n  symbol a 1\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  semiring int\n}\n"), ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring lattice\n}\n"), ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n}\n junk"), ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  symbol a 0\n  state q\n"
                              "  trans a () -> q : 1\n  trans a () -> q : 2\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_wta("wta {\n  semiring nat\n  final q : 1\n}\n"), ParseError);
}

TEST_CASE("matrix blocks") {
    Semiring sr(Carrier::rational);
    IndexSet rows({"q0", "q1"});
    IndexSet cols({"p0", "p1", "p2"});
    Matrix m = parse_matrix("matrix {\n  row q1 : 0 1/2 0\n  row q0 : 1 0 -3\n}\n", sr, rows, cols);
    CHECK(m.at(0, 0) == sr.one());
    CHECK(m.at(0, 2) == sr.make(-3));
    CHECK(m.at(1, 1) == sr.make(BigRational(1) / 2));

    // canonical printing lists rows in index order
    CHECK(print_matrix(m) == "matrix {\n  row q0 : 1 0 -3\n  row q1 : 0 1/2 0\n}\n");
    CHECK(parse_matrix(print_matrix(m), sr, rows, cols) == m);

    CHECK_THROWS_AS(parse_matrix("matrix {\n  row q0 : 1 0 0\n}\n", sr, rows, cols), ParseError);
    CHECK_THROWS_AS(parse_matrix("matrix {\n  row q9 : 1 0 0\n  row q1 : 0 0 0\n}\n", sr, rows,
                                 cols),
                    ParseError);
    CHECK_THROWS_AS(
        parse_matrix("matrix {\n  row q0 : 1 0\n  row q1 : 0 0 0\n}\n", sr, rows, cols),
        ParseError);
    CHECK_THROWS_AS(parse_matrix("matrix {\n  row q0 : 1 0 0\n  row q0 : 0 0 0\n  row q1 : 0 0 0\n}\n",
                                 sr, rows, cols),
                    ParseError);
}

TEST_CASE("zero-state automata survive the round trip") {
    Wta empty = parse_wta("wta {\n  semiring int\n  symbol alpha 0\n  symbol gamma 1\n}\n");
    CHECK(empty.state_count() == 0);
    CHECK(eval(empty, parse_tree("gamma(alpha)")) == empty.semiring().zero());
    CHECK(parse_wta(print_wta(empty)) == empty);
}
