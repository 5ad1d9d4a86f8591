#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "capnet/bounds.hpp"
#include "capnet/dirichlet.hpp"
#include "capnet/testgen.hpp"
#include "capnet/truncation.hpp"
#include "test_helpers.hpp"

using namespace capnet;
using namespace capnet::testing;

TEST_CASE("truncate to the full state set is the identity on conductances") {
    Network net = diamond();
    std::vector<StateId> all{0, 1, 2, 3};
    Network tnet = truncate(net, all, ab_of(net));
    for (StateId x = 0; x < net.size(); ++x)
        for (const auto& [y, k] : net.neighbors(x)) CHECK(tnet.cond(x, y) == k);
}

TEST_CASE("truncate keeps only edges inside the subset and flags inert") {
    Network net = three_branch();
    Network tnet = truncate(net, {0, 1, 2}, ab_of(net));  // a, b, x1
    CHECK(tnet.cond(0, 2) == 1.0);
    CHECK(tnet.cond(2, 1) == 1.0);
    CHECK(tnet.cond(0, 3) == 0.0);
    CHECK(tnet.cond(3, 1) == 0.0);
    CHECK(tnet.inert(3));
    CHECK(tnet.inert(4));
    CHECK_FALSE(tnet.inert(2));
    CHECK(tnet.mu(3) == net.mu(3));
    CHECK(validate(tnet).ok());
}

TEST_CASE("truncating the chain to its endpoints leaves no edges") {
    Network net = chain3();
    Network tnet = truncate(net, {0, 2}, ab_of(net));
    CHECK(tnet.undirected_edges().empty());
    CHECK_FALSE(connects(tnet, ab_of(net)));
}

TEST_CASE("truncate requires A and B inside the subset") {
    Network net = chain3();
    CHECK_THROWS_AS(truncate(net, {0, 1}, ab_of(net)), InvalidInput);
}

TEST_CASE("three-branch ladder sweep matches the series-parallel oracle") {
    Network net = three_branch();
    double branch = oracle_series({1.0, 1.0});
    TruncationLadder ladder{{{0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2, 3, 4}}};
    auto sweep = truncation_sweep(net, ladder, ab_of(net));
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].cap == doctest::Approx(branch).epsilon(1e-13));
    CHECK(sweep[1].cap == doctest::Approx(2 * branch).epsilon(1e-13));
    CHECK(sweep[2].cap == doctest::Approx(3 * branch).epsilon(1e-13));
}

TEST_CASE("single-level full ladder reproduces Cap") {
    Network net = diamond();
    TruncationLadder ladder{{{0, 1, 2, 3}}};
    auto sweep = truncation_sweep(net, ladder, ab_of(net));
    CHECK(sweep[0].cap == doctest::Approx(capacity(net, ab_of(net)).value).epsilon(1e-13));
}

TEST_CASE("diamond one-branch ladder then full") {
    Network net = diamond();
    TruncationLadder ladder{{{0, 1, 3}, {0, 1, 2, 3}}};
    auto sweep = truncation_sweep(net, ladder, ab_of(net));
    CHECK(sweep[0].cap == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(sweep[1].cap == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("a disconnecting level contributes Cap_n = 0") {
    Network net = chain3();
    TruncationLadder ladder{{{0, 2}, {0, 1, 2}}};
    auto sweep = truncation_sweep(net, ladder, ab_of(net));
    CHECK(sweep[0].cap == 0.0);
    CHECK_FALSE(sweep[0].connected);
    CHECK(sweep[1].cap == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("ladder validation catches nesting and membership defects") {
    Network net = three_branch();
    TruncationLadder not_nested{{{0, 1, 2}, {0, 1, 3}}};
    CHECK_THROWS_AS(truncation_sweep(net, not_nested, ab_of(net)), InvalidInput);
    TruncationLadder missing_b{{{0, 2}}};
    CHECK_THROWS_AS(truncation_sweep(net, missing_b, ab_of(net)), InvalidInput);
    TruncationLadder empty;
    CHECK_THROWS_AS(truncation_sweep(net, empty, ab_of(net)), InvalidInput);
}

TEST_CASE("monotone nondecreasing capacities on random nested ladders") {
    Rng rng(201);
    for (int i = 0; i < 10; ++i) {
        Network net = random_connected_network(rng);
        PartitionPair ab = ab_of(net);
        double full_cap = capacity(net, ab).value;

        std::vector<StateId> interior;
        for (StateId x = 0; x < net.size(); ++x)
            if (!in_set(ab.a, x) && !in_set(ab.b, x)) interior.push_back(x);
        std::vector<StateId> base = ab.a;
        base.insert(base.end(), ab.b.begin(), ab.b.end());
        std::sort(base.begin(), base.end());

        TruncationLadder ladder;
        std::vector<StateId> level = base;
        ladder.levels.push_back(level);
        for (StateId x : interior) {
            level.push_back(x);
            std::sort(level.begin(), level.end());
            if (rng.next_double() < 0.5) ladder.levels.push_back(level);
        }
        std::vector<StateId> all(net.size());
        for (StateId x = 0; x < net.size(); ++x) all[x] = x;
        ladder.levels.push_back(all);

        auto sweep = truncation_sweep(net, ladder, ab);
        for (std::size_t j = 1; j < sweep.size(); ++j)
            CHECK(sweep[j].cap >= sweep[j - 1].cap - 1e-10);
        CHECK(sweep.back().cap == doctest::Approx(full_cap).epsilon(1e-10));
        for (const auto& lc : sweep) CHECK(lc.cap <= full_cap + 1e-10);
    }
}

TEST_CASE("truncated harmonic flows are unit flows on the full network") {
    Network net = three_branch();
    PartitionPair ab = ab_of(net);
    TruncationLadder ladder{{{0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2, 3, 4}}};
    auto sweep = truncation_sweep(net, ladder, ab);
    for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
        Network tnet = truncate(net, ladder.levels[i], ab);
        Potential hn = solve_harmonic(tnet, ab);
        UnitFlow fn = harmonic_flow(tnet, hn, sweep[i].cap);
        // validate against the FULL network
        auto rep = validate_unit_flow(net, fn, ab, 1e-10, true);
        CHECK(rep.ok());
        // and the BK functional on the full network returns Cap_n
        double bk = bk_flow_estimate(net, fn, ab, BkMode::Exact).value;
        CHECK(bk == doctest::Approx(sweep[i].cap).epsilon(1e-10));
    }
}

TEST_CASE("ladder file loads and validates") {
    Network net = three_branch();
    TruncationLadder ladder = load_ladder("level a b x1\nlevel a b x1 x2\n", net);
    REQUIRE(ladder.levels.size() == 2);
    CHECK(ladder.levels[0] == std::vector<StateId>{0, 1, 2});
    check_ladder(ladder, net, ab_of(net));
    CHECK_THROWS_AS(load_ladder("rung a b\n", net), ParseError);
    CHECK_THROWS_AS(load_ladder("level a q\n", net), ParseError);
}
