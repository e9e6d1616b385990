#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/sim_gen.hpp"
#include "wata/constructions.hpp"

using namespace wata;
using namespace wata::testing;

namespace {

const Semiring kNat{Carrier::natural};
const Semiring kInt{Carrier::integer};
const Semiring kRat{Carrier::rational};
const RankedAlphabet kAlphaSigma({{"alpha", 0}, {"sigma", 2}});
const RankedAlphabet kMixed({{"alpha", 0}, {"gamma", 1}, {"sigma", 2}});

Wta zero_wta(const Semiring& sr, const RankedAlphabet& alphabet) {
    return WtaBuilder(sr, alphabet).build("zero");
}

/// One state, every weight 1: the constant-1 series over nat.
Wta all_ones(const Semiring& sr, const RankedAlphabet& alphabet) {
    WtaBuilder b(sr, alphabet);
    b.add_state("u");
    b.set_final("u", sr.one());
    for (const Symbol& sym : alphabet.symbols()) {
        b.set_transition(sym.name, std::vector<std::string>(sym.rank, "u"), "u", sr.one());
    }
    return b.build("ones");
}

} // namespace

TEST_CASE("sum semantics") {
    Wta one = m_one();
    Wta two = m_two();
    Wta s = sum_wta(two, one);
    for (const Tree& t : enumerate_trees(kAlphaSigma, 6)) {
        REQUIRE(eval(s, t) == kNat.add(eval(two, t), eval(one, t)));
    }

    // the zero automaton is neutral
    Wta neutral = sum_wta(one, zero_wta(kNat, kAlphaSigma));
    CHECK(neutral.state_count() == 1);
    for (const Tree& t : enumerate_trees(kAlphaSigma, 5)) {
        REQUIRE(eval(neutral, t) == eval(one, t));
    }

    // colliding state names get suffixes
    Wta self_sum = sum_wta(one, one);
    CHECK(self_sum.states().labels() == std::vector<std::string>{"q.L", "q.R"});

    CHECK_THROWS_AS(sum_wta(one, all_ones(kNat, kMixed)), InputError);
}

TEST_CASE("sum of random automata matches the series sum") {
    Rng rng(42);
    auto trees = enumerate_trees(kMixed, 6);
    for (const Semiring& sr : {kNat, kInt, kRat}) {
        for (int rep = 0; rep < 6; ++rep) {
            Wta a = random_wta(rng, sr, kMixed, 1 + rep % 2);
            Wta b = random_wta(rng, sr, kMixed, 1 + (rep + 1) % 2);
            Wta s = sum_wta(a, b);
            for (const Tree& t : trees) {
                REQUIRE(eval(s, t) == sr.add(eval(a, t), eval(b, t)));
            }
        }
    }
}

TEST_CASE("hadamard semantics") {
    Wta two = m_two();
    Wta h = hadamard_wta(two, two);
    for (const Tree& t : enumerate_trees(kAlphaSigma, 5)) {
        Value v = eval(two, t);
        REQUIRE(eval(h, t) == kNat.mul(v, v));
    }

    // the all-ones series is neutral after label erasure
    Wta neutral = hadamard_wta(two, all_ones(kNat, kAlphaSigma));
    CHECK(neutral.state_count() == two.state_count());
    for (const Tree& t : enumerate_trees(kAlphaSigma, 5)) {
        REQUIRE(eval(neutral, t) == eval(two, t));
    }

    Rng rng(43);
    auto trees = enumerate_trees(kMixed, 6);
    for (const Semiring& sr : {kNat, kInt, kRat}) {
        Wta a = random_wta(rng, sr, kMixed, 2);
        Wta b = random_wta(rng, sr, kMixed, 2);
        Wta p = hadamard_wta(a, b);
        for (const Tree& t : trees) {
            REQUIRE(eval(p, t) == sr.mul(eval(a, t), eval(b, t)));
        }
    }
}

TEST_CASE("s0-product agrees with the OI-substitution oracle") {
    Wta one = m_one();
    Wta prod = sigma_product_wta(one, one, "alpha");
    for (const Tree& t : enumerate_trees(kAlphaSigma, 5)) {
        REQUIRE(eval(prod, t) == oi_product_eval(one, one, "alpha", t));
    }

    Rng rng(44);
    for (const Semiring& sr : {kNat, kInt, kRat}) {
        for (int rep = 0; rep < 4; ++rep) {
            Wta a = random_wta(rng, sr, kMixed, 2);
            Wta b = random_wta(rng, sr, kMixed, 1 + rep % 2);
            Wta p = sigma_product_wta(a, b, "alpha");
            for (const Tree& t : enumerate_trees(kMixed, 5)) {
                REQUIRE(eval(p, t) == oi_product_eval(a, b, "alpha", t));
            }
        }
    }

    CHECK_THROWS_AS(sigma_product_wta(one, one, "sigma"), InputError);
    CHECK_THROWS_AS(sigma_product_wta(one, one, "beta"), InputError);
}

TEST_CASE("s0-product with zero final weights on the right") {
    Rng rng(45);
    Wta a = random_wta(rng, kInt, kAlphaSigma, 2);
    WtaBuilder bb(kInt, kAlphaSigma);
    bb.add_state("p");
    bb.set_transition("alpha", {}, "p", kInt.one());
    bb.set_transition("sigma", {"p", "p"}, "p", kInt.make(2));
    Wta b = bb.build(); // G = 0
    Wta prod = sigma_product_wta(a, b, "alpha");
    for (const Tree& t : enumerate_trees(kAlphaSigma, 5)) {
        bool contains_alpha = t.str().find("alpha") != std::string::npos;
        if (contains_alpha) {
            REQUIRE(eval(prod, t) == kInt.zero());
        } else {
            REQUIRE(eval(prod, t) == eval(a, t));
        }
    }
}

TEST_CASE("s0-iteration weights") {
    // zero s0 weight: star factor 1
    WtaBuilder b0(kRat, kAlphaSigma);
    b0.add_state("q");
    b0.set_final("q", kRat.one());
    b0.set_transition("sigma", {"q", "q"}, "q", kRat.make(3));
    Wta no_alpha = b0.build(); // eval(alpha) = 0
    Wta st0 = sigma_star_wta(no_alpha, "alpha");
    // kappa_2(sigma) = mu + (mu row sum . F) * mu_0(alpha), and mu_0(alpha) = 0 here
    CHECK(st0.transition("sigma") == no_alpha.transition("sigma"));

    // star factor 2 for s0 weight 1/2, re-entering through mu_0(alpha)
    WtaBuilder b1(kRat, kAlphaSigma);
    b1.add_state("q");
    b1.set_final("q", kRat.one());
    b1.set_transition("alpha", {}, "q", kRat.make(BigRational(1) / 2));
    b1.set_transition("sigma", {"q", "q"}, "q", kRat.one());
    Wta half = b1.build();
    Wta st1 = sigma_star_wta(half, "alpha");
    // kappa_2(sigma)_{(q,q),q} = 1 + (1 * 1) * 2 * 1/2 = 2
    CHECK(st1.transition("sigma").at(0, 0) == kRat.make(2));
    CHECK(st1.transition("alpha") == half.transition("alpha"));

    // bool star factor is 1 (true)
    Semiring sb(Carrier::boolean);
    WtaBuilder b2(sb, kAlphaSigma);
    b2.add_state("q");
    b2.set_final("q", sb.one());
    b2.set_transition("alpha", {}, "q", sb.one());
    b2.set_transition("sigma", {"q", "q"}, "q", sb.one());
    Wta bool_star = sigma_star_wta(b2.build(), "alpha");
    CHECK(bool_star.transition("sigma").at(0, 0) == sb.one());

    // divergent star names the weight
    WtaBuilder b3(kRat, kAlphaSigma);
    b3.add_state("q");
    b3.set_final("q", kRat.one());
    b3.set_transition("alpha", {}, "q", kRat.make(2));
    CHECK_THROWS_AS(sigma_star_wta(b3.build(), "alpha"), DivergentStarError);
    CHECK_THROWS_AS(sigma_star_wta(m_one(), "alpha"), CapabilityError); // nat has no star
}

TEST_CASE("transfer-matrix functors preserve identities and composition") {
    Wta one = m_one();
    Wta two = m_two();
    TransferMatrix ix{identity(kNat, one.states()), "a", "a"};
    TransferMatrix iy{identity(kNat, two.states()), "b", "b"};
    Matrix both = sum_tm(ix, iy).matrix;
    CHECK(both == identity(kNat, both.rows()));

    // composition: two stacked forward merges on each side
    Rng rng(46);
    for (const Semiring& sr : {kNat, kInt, kRat}) {
        Wta core_a = random_wta(rng, sr, kMixed, 1);
        Wta core_b = random_wta(rng, sr, kMixed, 1);
        GeneratedPair a1 = forward_split(rng, core_a, 2);
        GeneratedPair a2 = forward_split(rng, a1.m, 3);
        GeneratedPair b1 = forward_split(rng, core_b, 2);
        GeneratedPair b2 = forward_split(rng, b1.m, 2);
        TransferMatrix x{induced_matrix(sr, a2.m.states(), a1.m.states(), a2.rho), "a2", "a1"};
        TransferMatrix xp{induced_matrix(sr, a1.m.states(), core_a.states(), a1.rho), "a1", "a0"};
        TransferMatrix y{induced_matrix(sr, b2.m.states(), b1.m.states(), b2.rho), "b2", "b1"};
        TransferMatrix yp{induced_matrix(sr, b1.m.states(), core_b.states(), b1.rho), "b1", "b0"};

        Matrix sum_lhs = matmul(sum_tm(x, y).matrix, sum_tm(xp, yp).matrix);
        Matrix sum_rhs = sum_tm(compose(x, xp), compose(y, yp)).matrix;
        REQUIRE(sum_lhs == sum_rhs);

        Matrix had_lhs = matmul(hadamard_tm(x, y).matrix, hadamard_tm(xp, yp).matrix);
        Matrix had_rhs = hadamard_tm(compose(x, xp), compose(y, yp)).matrix;
        REQUIRE(had_lhs == had_rhs);
    }
}

TEST_CASE("constructions send simulations to simulations") {
    Rng rng(47);
    for (const Semiring& sr : {kNat, kInt, kRat}) {
        for (int rep = 0; rep < 6; ++rep) {
            GeneratedSim left = random_accepted_sim(rng, sr, kMixed, 3);
            GeneratedSim right = random_accepted_sim(rng, sr, kMixed, 3);
            TransferMatrix x{left.x, "m", "m'"};
            TransferMatrix y{right.x, "n", "n'"};

            REQUIRE(check_simulation(sum_wta(left.m, right.m), sum_wta(left.n, right.n),
                                     sum_tm(x, y).matrix)
                        .ok);
            REQUIRE(check_simulation(hadamard_wta(left.m, right.m),
                                     hadamard_wta(left.n, right.n), hadamard_tm(x, y).matrix)
                        .ok);
            REQUIRE(check_simulation(sigma_product_wta(left.m, right.m, "alpha"),
                                     sigma_product_wta(left.n, right.n, "alpha"),
                                     sigma_product_tm(x, y).matrix)
                        .ok);
        }
    }

    // s0-iteration over rat, keeping the s0 weight inside the star's domain
    for (int rep = 0; rep < 12; ++rep) {
        GeneratedSim g = random_accepted_sim(rng, kRat, kMixed, 3);
        Value a = eval(g.m, Tree("alpha"));
        if (!a.is_zero() && !(abs(a.raw()) < 1)) continue;
        REQUIRE(check_simulation(sigma_star_wta(g.m, "alpha"), sigma_star_wta(g.n, "alpha"),
                                 sigma_star_tm(TransferMatrix{g.x, "m", "n"}).matrix)
                    .ok);
    }
}

TEST_CASE("category laws of simulations") {
    Rng rng(48);
    Wta core = random_wta(rng, kInt, kMixed, 1);
    GeneratedPair p1 = forward_split(rng, core, 2);
    GeneratedPair p2 = forward_split(rng, p1.m, 3);
    GeneratedPair p3 = forward_split(rng, p2.m, 4);
    TransferMatrix f{induced_matrix(kInt, p3.m.states(), p2.m.states(), p3.rho), "3", "2"};
    TransferMatrix g{induced_matrix(kInt, p2.m.states(), p1.m.states(), p2.rho), "2", "1"};
    TransferMatrix h{induced_matrix(kInt, p1.m.states(), core.states(), p1.rho), "1", "0"};

    // identity is neutral and composition is associative
    TransferMatrix id3{identity(kInt, p3.m.states()), "3", "3"};
    CHECK(compose(id3, f).matrix == f.matrix);
    CHECK(compose(f, TransferMatrix{identity(kInt, p2.m.states()), "2", "2"}).matrix == f.matrix);
    CHECK(compose(compose(f, g), h).matrix == compose(f, compose(g, h)).matrix);

    // every object simulates itself via the unit matrix
    CHECK(check_simulation(p1.m, p1.m, identity(kInt, p1.m.states())).ok);
}
