#include "capnet/equiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "capnet/dirichlet.hpp"

namespace capnet {

double series_reduce(const std::vector<double>& resistances) {
    if (resistances.empty()) throw InvalidInput("series reduction of an empty chain");
    double total = 0.0;
    for (double r : resistances) {
        if (!(r > 0.0)) throw InvalidInput("series resistance must be positive");
        total += r;
    }
    return 1.0 / total;
}

double parallel_reduce(const std::vector<double>& conductances) {
    if (conductances.empty()) throw InvalidInput("parallel reduction of an empty bundle");
    double total = 0.0;
    for (double c : conductances) {
        if (c < 0.0) throw InvalidInput("parallel conductance must be nonnegative");
        total += c;
    }
    return total;
}

EquivalentNetwork build_equivalent_network(const Network& net, const PathMeasure& pm,
                                           const PartitionPair& ab) {
    check_path_measure(pm, ab);
    EdgeMeasure phi = path_measure_to_flow(pm, ab);
    EquivalentNetwork eq;
    std::vector<double> chain_conds;
    for (const auto& [path, p] : pm.support) {
        EquivalentChain chain;
        chain.path = path;
        chain.probability = p;
        for (std::size_t i = 1; i < path.states.size(); ++i) {
            StateId x = path.states[i - 1], y = path.states[i];
            double k = net.cond(x, y);
            if (!(k > 0.0))
                throw InvalidInput("path edge " + net.name(x) + "->" + net.name(y) +
                                   " has zero conductance (absolute-continuity failure)");
            chain.reduced_resistances.push_back(phi.at({x, y}) / (k * p));
        }
        // the P(gamma) factor is already inside the reduced resistances
        chain.conductance = series_reduce(chain.reduced_resistances);
        chain_conds.push_back(chain.conductance);
        eq.chains.push_back(std::move(chain));
    }
    eq.total = parallel_reduce(chain_conds);
    return eq;
}

std::string emit_equivalent_network(const EquivalentNetwork& eq, const Network& net) {
    std::ostringstream out;
    std::vector<StateId> a_states, b_states;
    // endpoint states keep their names; each interior visit is split
    std::vector<char> emitted(net.size(), 0);
    auto emit_state = [&](StateId x) {
        if (!emitted[x]) {
            out << "state " << net.name(x) << ' ' << fmt_shortest(net.mu(x)) << '\n';
            emitted[x] = 1;
        }
    };
    for (const auto& chain : eq.chains) {
        emit_state(chain.path.states.front());
        emit_state(chain.path.states.back());
    }
    for (std::size_t i = 0; i < eq.chains.size(); ++i) {
        const auto& chain = eq.chains[i];
        for (std::size_t j = 1; j + 1 < chain.path.states.size(); ++j)
            out << "state γ" << i << '.' << j << " 1\n";
    }
    for (std::size_t i = 0; i < eq.chains.size(); ++i) {
        const auto& chain = eq.chains[i];
        const auto& s = chain.path.states;
        auto node_name = [&](std::size_t j) {
            if (j == 0) return net.name(s.front());
            if (j + 1 == s.size()) return net.name(s.back());
            return "γ" + std::to_string(i) + "." + std::to_string(j);
        };
        for (std::size_t j = 1; j < s.size(); ++j)
            out << "edge " << node_name(j - 1) << ' ' << node_name(j) << ' '
                << fmt_shortest(1.0 / chain.reduced_resistances[j - 1]) << '\n';
    }
    std::vector<std::string> a_names, b_names;
    for (const auto& chain : eq.chains) {
        a_names.push_back(net.name(chain.path.states.front()));
        b_names.push_back(net.name(chain.path.states.back()));
    }
    std::sort(a_names.begin(), a_names.end());
    a_names.erase(std::unique(a_names.begin(), a_names.end()), a_names.end());
    std::sort(b_names.begin(), b_names.end());
    b_names.erase(std::unique(b_names.begin(), b_names.end()), b_names.end());
    out << "set A";
    for (const auto& n : a_names) out << ' ' << n;
    out << "\nset B";
    for (const auto& n : b_names) out << ' ' << n;
    out << '\n';
    return out.str();
}

PowerReport power_and_effective_resistance(const Network& net, const PartitionPair& ab,
                                           double tol) {
    if (has_killing(net))
        throw UnsupportedCase("electric interpretation needs a kill-free network");
    Potential h = solve_harmonic(net, ab, tol);
    PowerReport rep;
    rep.power = dirichlet_energy(net, h);
    rep.c_eff = rep.power;
    rep.r_eff = 1.0 / rep.power;
    for (StateId x = 0; x < net.size(); ++x)
        for (const auto& [y, k] : net.neighbors(x)) {
            double drop = h[x] - h[y];
            if (drop > 0.0 && k > 0.0) rep.currents[{x, y}] = k * drop;
        }
    std::vector<double> div(net.size(), 0.0);
    for (const auto& [e, i] : rep.currents) {
        div[e.first] += i;
        div[e.second] -= i;
    }
    for (StateId x = 0; x < net.size(); ++x) {
        if (in_set(ab.a, x) || in_set(ab.b, x)) continue;
        rep.max_kirchhoff_residual = std::max(rep.max_kirchhoff_residual, std::abs(div[x]));
    }
    if (!(rep.max_kirchhoff_residual <= tol))
        throw SolverError("currents violate Kirchhoff's law: residual " +
                          fmt_g12(rep.max_kirchhoff_residual));
    return rep;
}

}  // namespace capnet
