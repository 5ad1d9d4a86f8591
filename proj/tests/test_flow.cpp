#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "capnet/bounds.hpp"
#include "capnet/dirichlet.hpp"
#include "capnet/flow.hpp"
#include "capnet/testgen.hpp"
#include "test_helpers.hpp"

using namespace capnet;
using namespace capnet::testing;

namespace {

UnitFlow diamond_harmonic_flow() {
    Network net = diamond();
    Potential h = solve_harmonic(net, ab_of(net));
    return harmonic_flow(net, h, capacity(net, ab_of(net)).value);
}

}  // namespace

TEST_CASE("UnitFlow insertion enforces orientation and positivity") {
    UnitFlow f(3);
    f.add(0, 1, 0.5);
    CHECK_THROWS_AS(f.add(1, 0, 0.1), InvalidInput);  // reverse present
    CHECK_THROWS_AS(f.add(0, 1, 0.1), InvalidInput);  // duplicate
    CHECK_THROWS_AS(f.add(1, 2, 0.0), InvalidInput);  // nonpositive
    CHECK_THROWS_AS(f.add(2, 2, 0.1), InvalidInput);  // self edge
}

TEST_CASE("harmonic flow values on the hand examples") {
    Network two = two_state(2.0);
    Potential h2 = solve_harmonic(two, ab_of(two));
    UnitFlow f2 = harmonic_flow(two, h2, 2.0);
    CHECK(f2.at(0, 1) == doctest::Approx(1.0));

    Network ch = chain3();
    Potential hc = solve_harmonic(ch, ab_of(ch));
    UnitFlow fc = harmonic_flow(ch, hc, 0.5);
    CHECK(fc.at(0, 1) == doctest::Approx(1.0));
    CHECK(fc.at(1, 2) == doctest::Approx(1.0));
    CHECK(fc.total_mass() == doctest::Approx(2.0));

    UnitFlow fd = diamond_harmonic_flow();
    for (auto [x, y] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}})
        CHECK(fd.at(x, y) == doctest::Approx(0.5));
}

TEST_CASE("harmonic flow validates and is loop-free") {
    Network net = diamond();
    UnitFlow f = diamond_harmonic_flow();
    auto rep = validate_unit_flow(net, f, ab_of(net), 1e-10, true);
    CHECK(rep.ok());
    CHECK(is_loop_free(f));
}

TEST_CASE("harmonic flow rejects a nonpositive capacity") {
    Network net = diamond();
    Potential h = solve_harmonic(net, ab_of(net));
    CHECK_THROWS_AS(harmonic_flow(net, h, 0.0), InvalidInput);
}

TEST_CASE("validate_unit_flow reports Kirchhoff violations with magnitude") {
    Network net = diamond();
    UnitFlow f(net.size());
    f.add(0, 1, 0.6);
    f.add(1, 3, 0.5);
    f.add(0, 2, 0.4);
    f.add(2, 3, 0.5);
    auto rep = validate_unit_flow(net, f, ab_of(net));
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.rule == "kirchhoff" && v.where == "x" && std::abs(v.magnitude - 0.1) < 1e-12)
            found = true;
    CHECK(found);
}

TEST_CASE("validate_unit_flow reports directedness violations") {
    Network net = diamond();
    net.add_edge(1, 2, 1.0);
    UnitFlow f(net.size());
    f.add_raw(1, 2, 0.2);  // both orientations, via the raw fixture hook
    f.add_raw(2, 1, 0.3);
    auto rep = validate_unit_flow(net, f, ab_of(net));
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.rule == "directedness") found = true;
    CHECK(found);
}

TEST_CASE("validate_unit_flow reports absolute-continuity and boundary violations") {
    Network net = diamond();
    UnitFlow f(net.size());
    f.add(1, 2, 0.5);  // no x-y edge in the diamond
    auto rep = validate_unit_flow(net, f, ab_of(net));
    std::set<std::string> rules;
    for (const auto& v : rep.violations) rules.insert(v.rule);
    CHECK(rules.count("absolute-continuity"));
    CHECK(rules.count("unit-outflow-A"));
    CHECK(rules.count("unit-inflow-B"));
}

TEST_CASE("flow_to_chain row-normalizes and restricts init to A") {
    Network net = chain3();
    Potential h = solve_harmonic(net, ab_of(net));
    UnitFlow f = harmonic_flow(net, h, 0.5);
    FlowChain chain = flow_to_chain(f, ab_of(net));
    REQUIRE(chain.init.size() == 1);
    CHECK(chain.init[0].first == 0);
    CHECK(chain.init[0].second == doctest::Approx(1.0));
    REQUIRE(chain.rows[0].size() == 1);
    CHECK(chain.rows[0][0].first == 1);
    CHECK(chain.rows[0][0].second == doctest::Approx(1.0));
    CHECK(chain.rows[1][0].first == 2);
    CHECK(chain.rows[1][0].second == doctest::Approx(1.0));
}

TEST_CASE("flow_to_chain on the split diamond") {
    Network net = diamond();
    UnitFlow f = split_flow(net, 0.3);
    FlowChain chain = flow_to_chain(f, ab_of(net));
    CHECK(chain.rows[0].size() == 2);
    CHECK(chain.rows[0][0].second == doctest::Approx(0.3));
    CHECK(chain.rows[0][1].second == doctest::Approx(0.7));
    CHECK(chain.rows[1][0].second == doctest::Approx(1.0));
    CHECK(chain.rows[2][0].second == doctest::Approx(1.0));
    for (const auto& row : chain.rows) {
        if (row.empty()) continue;
        double s = 0.0;
        for (const auto& [y, p] : row) s += p;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("flow_to_chain omits nu-null states and needs A outflow") {
    Network net = diamond();
    UnitFlow f = split_flow(net, 1.0);  // all mass through x; y has nu = 0
    FlowChain chain = flow_to_chain(f, ab_of(net));
    CHECK(chain.rows[2].empty());

    UnitFlow empty_from_a(net.size());
    empty_from_a.add(1, 3, 1.0);
    CHECK_THROWS_AS(flow_to_chain(empty_from_a, ab_of(net)), InvalidInput);
}

TEST_CASE("sampling the chain flow always yields (a,m,b)") {
    Network net = chain3();
    Potential h = solve_harmonic(net, ab_of(net));
    UnitFlow f = harmonic_flow(net, h, 0.5);
    FlowChain chain = flow_to_chain(f, ab_of(net));
    Rng rng(5);
    for (int i = 0; i < 32; ++i) {
        StoppedPath p = sample_stopped_path(chain, ab_of(net), rng, 100);
        CHECK(p.states == std::vector<StateId>{0, 1, 2});
    }
}

TEST_CASE("sampling the degenerate split goes through x") {
    Network net = diamond();
    FlowChain chain = flow_to_chain(split_flow(net, 1.0), ab_of(net));
    Rng rng(6);
    for (int i = 0; i < 16; ++i) {
        StoppedPath p = sample_stopped_path(chain, ab_of(net), rng, 100);
        CHECK(p.states == std::vector<StateId>{0, 1, 3});
    }
}

TEST_CASE("even split: branch frequency matches binomial statistics") {
    Network net = diamond();
    FlowChain chain = flow_to_chain(split_flow(net, 0.5), ab_of(net));
    const long n = 100000;
    long through_x = 0;
    for (long i = 0; i < n; ++i) {
        Rng rng = Rng::stream(42, static_cast<std::uint64_t>(i));
        StoppedPath p = sample_stopped_path(chain, ab_of(net), rng, 100);
        if (p.states[1] == 1) ++through_x;
    }
    double frac = static_cast<double>(through_x) / static_cast<double>(n);
    double se = std::sqrt(0.25 / static_cast<double>(n));
    CHECK(std::abs(frac - 0.5) <= 3.0 * se);
}

TEST_CASE("loop-free flows sample self-avoiding paths within the mass bound") {
    Network net = diamond();
    UnitFlow f = diamond_harmonic_flow();
    FlowChain chain = flow_to_chain(f, ab_of(net));
    const long n = 10000;
    double len_sum = 0.0, len_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        Rng rng = Rng::stream(43, static_cast<std::uint64_t>(i));
        StoppedPath p = sample_stopped_path(chain, ab_of(net), rng, 400);
        auto sorted = p.states;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        len_sum += p.edge_count();
        len_sq += static_cast<double>(p.edge_count()) * p.edge_count();
    }
    double mean = len_sum / n;
    double var = (len_sq - n * mean * mean) / (n - 1.0);
    double se = std::sqrt(std::max(var, 0.0) / n);
    CHECK(mean <= f.total_mass() + 3.0 * se);
}

TEST_CASE("sampler errors past max_len with the partial path attached") {
    Network net = diamond();
    FlowChain chain = flow_to_chain(split_flow(net, 1.0), ab_of(net));
    Rng rng(7);
    try {
        sample_stopped_path(chain, ab_of(net), rng, 1);
        FAIL("expected PathLengthExceeded");
    } catch (const PathLengthExceeded& e) {
        CHECK(e.partial.states.size() == 2);
    }
}

TEST_CASE("enumerate_stopped_paths recovers the split probabilities") {
    Network net = diamond();
    PathMeasure pm = enumerate_stopped_paths(flow_to_chain(split_flow(net, 0.8), ab_of(net)),
                                             ab_of(net));
    REQUIRE(pm.support.size() == 2);
    check_path_measure(pm, ab_of(net));
    for (const auto& [path, p] : pm.support) {
        if (path.states[1] == 1) CHECK(p == doctest::Approx(0.8));
        if (path.states[1] == 2) CHECK(p == doctest::Approx(0.2));
    }
}

TEST_CASE("enumeration throws on a cycle reachable from A") {
    Network net;
    net.add_state("a");
    net.add_state("x");
    net.add_state("y");
    net.add_state("b");
    net.add_edge(0, 1, 1.0);
    net.add_edge(1, 2, 1.0);
    net.add_edge(1, 3, 1.0);
    PartitionPair ab{{0}, {3}};
    UnitFlow f(net.size());
    f.add(0, 1, 1.0);
    f.add(1, 3, 1.0);
    f.add_raw(1, 2, 0.5);
    f.add_raw(2, 1, 0.5);  // x <-> y two-cycle, raw to bypass orientation
    CHECK_THROWS_AS(enumerate_stopped_paths(flow_to_chain(f, ab), ab), CycleInSupport);
}

TEST_CASE("path_measure_to_flow point mass and multiplicity") {
    Network net = chain3();
    PartitionPair ab = ab_of(net);
    PathMeasure pm{{{StoppedPath{{0, 1, 2}}, 1.0}}};
    EdgeMeasure phi = path_measure_to_flow(pm, ab);
    CHECK(phi.at({0, 1}) == doctest::Approx(1.0));
    CHECK(phi.at({1, 2}) == doctest::Approx(1.0));

    // a path traversing the same edge twice gets mass 2 on it
    Network zig;
    zig.add_state("a");
    zig.add_state("u");
    zig.add_state("v");
    zig.add_state("b");
    zig.add_edge(0, 1, 1.0);
    zig.add_edge(1, 2, 1.0);
    zig.add_edge(0, 2, 1.0);
    zig.add_edge(2, 3, 1.0);
    PartitionPair zab{{0}, {3}};
    PathMeasure pm2{{{StoppedPath{{0, 1, 2, 0, 1, 2, 3}}, 1.0}}};
    EdgeMeasure phi2 = path_measure_to_flow(pm2, zab);
    CHECK(phi2.at({0, 1}) == doctest::Approx(2.0));
    CHECK(phi2.at({1, 2}) == doctest::Approx(2.0));
    CHECK(phi2.at({2, 0}) == doctest::Approx(1.0));
    CHECK(phi2.at({2, 3}) == doctest::Approx(1.0));
}

TEST_CASE("path_measure_to_flow on the even diamond split") {
    Network net = diamond();
    PartitionPair ab = ab_of(net);
    PathMeasure pm{{{StoppedPath{{0, 1, 3}}, 0.5}, {StoppedPath{{0, 2, 3}}, 0.5}}};
    EdgeMeasure phi = path_measure_to_flow(pm, ab);
    for (auto [x, y] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}})
        CHECK(phi.at({x, y}) == doctest::Approx(0.5));
}

TEST_CASE("path_measure_to_flow rejects non-member paths") {
    Network net = diamond();
    PartitionPair ab = ab_of(net);
    PathMeasure bad{{{StoppedPath{{1, 3}}, 1.0}}};  // starts outside A
    CHECK_THROWS_AS(path_measure_to_flow(bad, ab), InvalidInput);
    PathMeasure through_b{{{StoppedPath{{0, 3, 1, 3}}, 1.0}}};
    CHECK_THROWS_AS(path_measure_to_flow(through_b, ab), InvalidInput);
}

TEST_CASE("exact path decomposition reproduces a loop-free flow edgewise") {
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        Network net = random_connected_network(rng);
        PartitionPair ab = ab_of(net);
        UnitFlow f = random_unit_flow(net, ab, rng);
        PathMeasure pm = enumerate_stopped_paths(flow_to_chain(f, ab), ab);
        EdgeMeasure phi = path_measure_to_flow(pm, ab);
        for (const auto& [e, v] : f.edges) {
            auto it = phi.find(e);
            double pv = it == phi.end() ? 0.0 : it->second;
            CHECK(std::abs(pv - v) <= 1e-12);
        }
        CHECK(phi.size() == f.edges.size());
    }
}

TEST_CASE("induced_flow of the harmonic flow has zero discrepancy") {
    Network net = diamond();
    UnitFlow f = diamond_harmonic_flow();
    FlowDiscrepancy d = induced_flow(f, ab_of(net));
    for (const auto& [e, v] : d.psi) CHECK(std::abs(v) <= 1e-12);
    double in_b = 0.0, out_a = 0.0;
    for (const auto& [e, v] : d.tilde_phi) {
        if (e.second == 3) in_b += v;
        if (e.first == 0) out_a += v;
    }
    CHECK(in_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out_a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("induced_flow of the split diamond has zero discrepancy") {
    Network net = diamond();
    FlowDiscrepancy d = induced_flow(split_flow(net, 0.7), ab_of(net));
    for (const auto& [e, v] : d.psi) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("a circulation attached to the A->B support is fully picked up") {
    // path a->x->b plus triangle x->y->z->x reachable from the path
    Network net;
    net.add_state("a");
    net.add_state("x");
    net.add_state("y");
    net.add_state("z");
    net.add_state("b");
    net.add_edge(0, 1, 1.0);
    net.add_edge(1, 4, 1.0);
    net.add_edge(1, 2, 1.0);
    net.add_edge(2, 3, 1.0);
    net.add_edge(3, 1, 1.0);
    PartitionPair ab{{0}, {4}};
    UnitFlow f(net.size());
    f.add(0, 1, 1.0);
    f.add(1, 4, 1.0);
    f.add(1, 2, 0.25);
    f.add(2, 3, 0.25);
    f.add(3, 1, 0.25);
    CHECK(validate_unit_flow(net, f, ab).ok());
    FlowDiscrepancy d = induced_flow(f, ab);
    for (const auto& [e, v] : d.psi) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("a detached circulation is exactly the discrepancy") {
    CirculationFixture fix = five_state_circulation(0.25);
    PartitionPair ab = ab_of(fix.net);
    CHECK(validate_unit_flow(fix.net, fix.flow, ab).ok());
    FlowDiscrepancy d = induced_flow(fix.flow, ab);
    CHECK(d.psi.at({0, 1}) == doctest::Approx(0.0));
    CHECK(d.psi.at({2, 3}) == doctest::Approx(0.25));
    CHECK(d.psi.at({3, 4}) == doctest::Approx(0.25));
    CHECK(d.psi.at({4, 2}) == doctest::Approx(0.25));
    CHECK(d.tilde_phi.at({0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("flow and path-measure files round-trip") {
    Network net = diamond();
    UnitFlow f = split_flow(net, 0.3);
    UnitFlow f2 = load_unit_flow(serialize_flow(f, net), net);
    CHECK(f2.edges == f.edges);

    PathMeasure pm{{{StoppedPath{{0, 1, 3}}, 0.25}, {StoppedPath{{0, 2, 3}}, 0.75}}};
    PathMeasure pm2 = load_path_measure(serialize_path_measure(pm, net), net);
    REQUIRE(pm2.support.size() == 2);
    CHECK(pm2.support[0].first == pm.support[0].first);
    CHECK(pm2.support[0].second == pm.support[0].second);
}

TEST_CASE("flow file loader rejects bad lines") {
    Network net = diamond();
    CHECK_THROWS_AS(load_unit_flow("flow a x 0\n", net), ParseError);
    CHECK_THROWS_AS(load_unit_flow("flow a q 1\n", net), ParseError);
    CHECK_THROWS_AS(load_unit_flow("flow a x 0.5\nflow x a 0.5\n", net), ParseError);
    CHECK_THROWS_AS(load_unit_flow("flux a x 1\n", net), ParseError);
}

TEST_CASE("check_path_measure rejects defective measures") {
    Network net = diamond();
    PartitionPair ab = ab_of(net);
    PathMeasure not_one{{{StoppedPath{{0, 1, 3}}, 0.5}}};
    CHECK_THROWS_AS(check_path_measure(not_one, ab), InvalidInput);
    PathMeasure dup{{{StoppedPath{{0, 1, 3}}, 0.5}, {StoppedPath{{0, 1, 3}}, 0.5}}};
    CHECK_THROWS_AS(check_path_measure(dup, ab), InvalidInput);
    PathMeasure empty;
    CHECK_THROWS_AS(check_path_measure(empty, ab), InvalidInput);
}

TEST_CASE("random flows validate and are loop-free") {
    Rng rng(33);
    for (int i = 0; i < 20; ++i) {
        Network net = random_connected_network(rng);
        PartitionPair ab = ab_of(net);
        UnitFlow f = random_unit_flow(net, ab, rng);
        auto rep = validate_unit_flow(net, f, ab, 1e-10, true);
        for (const auto& v : rep.violations)
            MESSAGE(v.rule, " at ", v.where, " magnitude ", v.magnitude);
        CHECK(rep.ok());
    }
}
