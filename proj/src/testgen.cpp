#include "capnet/testgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capnet {

Potential random_admissible_potential(const Network& net, const PartitionPair& ab, Rng& rng) {
    Potential v{std::vector<double>(net.size(), 0.0)};
    for (StateId x = 0; x < net.size(); ++x) v[x] = rng.next_double();
    for (StateId a : ab.a) v[a] = 1.0;
    for (StateId b : ab.b) v[b] = 0.0;
    return v;
}

namespace {

struct WeightedEdge {
    StateId to;
    double weight;
};

UnitFlow try_flow_from_potential(const Network& net, const PartitionPair& ab,
                                 const Potential& v) {
    const int n = net.size();
    std::vector<std::vector<WeightedEdge>> out(n);
    std::vector<int> out_deg(n, 0);
    for (StateId x = 0; x < n; ++x)
        for (const auto& [y, k] : net.neighbors(x))
            if (k > 0.0 && v[x] > v[y]) {
                out[x].push_back({y, (v[x] - v[y]) * k});
                ++out_deg[x];
            }

    // prune non-B dead ends until every kept state can keep draining
    std::vector<char> dead(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId x = 0; x < n; ++x) {
            if (dead[x] || in_set(ab.b, x)) continue;
            int live = 0;
            for (const auto& e : out[x])
                if (!dead[e.to]) ++live;
            if (live == 0) {
                dead[x] = 1;
                changed = true;
            }
        }
    }

    // initial mass on A proportional to surviving out-weight
    std::vector<double> share(n, 0.0);
    double total_share = 0.0;
    for (StateId a : ab.a) {
        if (dead[a]) continue;
        double w = 0.0;
        for (const auto& e : out[a])
            if (!dead[e.to]) w += e.weight;
        share[a] = w;
        total_share += w;
    }
    if (!(total_share > 0.0)) throw InvalidInput("no descending route from A to B");

    // route mass in descending potential order; support stays acyclic
    std::vector<StateId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](StateId l, StateId r) { return v[l] > v[r]; });
    std::vector<double> mass(n, 0.0);
    for (StateId a : ab.a) mass[a] = share[a] / total_share;
    UnitFlow f(n);
    for (StateId x : order) {
        if (dead[x] || in_set(ab.b, x) || !(mass[x] > 0.0)) continue;
        double w_total = 0.0;
        for (const auto& e : out[x])
            if (!dead[e.to]) w_total += e.weight;
        for (const auto& e : out[x]) {
            if (dead[e.to]) continue;
            double part = mass[x] * (e.weight / w_total);
            if (part > 0.0) {
                f.add(x, e.to, part);
                mass[e.to] += part;
            }
        }
    }
    return f;
}

}  // namespace

UnitFlow random_unit_flow(const Network& net, const PartitionPair& ab, Rng& rng,
                          int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Potential v = random_admissible_potential(net, ab, rng);
        try {
            return try_flow_from_potential(net, ab, v);
        } catch (const InvalidInput&) {
            // pruning cut A off from B for this draw; try the next one
        }
    }
    throw InvalidInput("random flow generation failed: no descending A->B route found");
}

Network random_connected_network(Rng& rng, int max_states) {
    int n = 4 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_states - 3)));
    Network net;
    for (int i = 0; i < n; ++i)
        net.add_state("s" + std::to_string(i), rng.next_uniform(0.5, 2.0));
    for (int i = 1; i < n; ++i) {
        int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
        net.add_edge(i, j, rng.next_uniform(0.2, 2.0));
    }
    int extra = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    for (int e = 0; e < extra; ++e) {
        int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (x == y || net.cond(x, y) > 0.0 || net.cond(y, x) > 0.0) continue;
        net.add_edge(x, y, rng.next_uniform(0.2, 2.0));
    }
    net.set_embedded_ab(PartitionPair{{0}, {n - 1}});
    return net;
}

}  // namespace capnet
