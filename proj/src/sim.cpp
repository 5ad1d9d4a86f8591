#include "capnet/sim.hpp"

#include <cmath>
#include <sstream>

#include "capnet/util.hpp"

namespace capnet {

const char* terminal_name(Terminal t) {
    switch (t) {
        case Terminal::HitA: return "hit-A";
        case Terminal::HitB: return "hit-B";
        case Terminal::Killed: return "killed";
        case Terminal::Censored: return "censored";
    }
    return "?";
}

double default_t_max(const Network& net) {
    double min_lambda = 0.0;
    for (StateId x = 0; x < net.size(); ++x) {
        double lam = net.lambda(x);
        if (lam > 0.0 && (min_lambda == 0.0 || lam < min_lambda)) min_lambda = lam;
    }
    return min_lambda > 0.0 ? 1e6 / min_lambda : 1e6;
}

Trajectory simulate_jump_process(const Network& net, StateId x0, const PartitionPair& ab,
                                 Rng& rng, double t_max, bool chain_only) {
    if (x0 < 0 || x0 >= net.size()) throw InvalidInput("start state out of range");
    Trajectory traj;
    traj.events.push_back({0.0, x0});
    StateId x = x0;
    if (in_set(ab.a, x)) {
        traj.terminal = Terminal::HitA;
        return traj;
    }
    if (in_set(ab.b, x)) {
        traj.terminal = Terminal::HitB;
        return traj;
    }
    double t = 0.0;
    while (true) {
        double lam = net.lambda(x);
        if (lam <= 0.0) {
            traj.terminal = Terminal::Censored;  // inert state: the clock never rings
            return traj;
        }
        t += chain_only ? 1.0 : rng.next_exponential(lam);
        if (t > t_max) {
            traj.terminal = Terminal::Censored;
            return traj;
        }
        JumpKernel jk = jump_kernel(net, x);
        double u = rng.next_double();
        double acc = 0.0;
        StateId next = -1;
        for (const auto& [y, p] : jk.moves) {
            acc += p;
            if (u < acc) {
                next = y;
                break;
            }
        }
        if (next < 0) {
            if (jk.cemetery > 0.0) {
                traj.terminal = Terminal::Killed;
                return traj;
            }
            next = jk.moves.back().first;  // fp leftover lands on the last move
        }
        x = next;
        traj.events.push_back({t, x});
        if (in_set(ab.a, x)) {
            traj.terminal = Terminal::HitA;
            return traj;
        }
        if (in_set(ab.b, x)) {
            traj.terminal = Terminal::HitB;
            return traj;
        }
    }
}

Trajectory simulate_jump_process(const Network& net, StateId x0, const PartitionPair& ab,
                                 std::uint64_t rng_seed, double t_max, bool chain_only) {
    Rng rng(rng_seed);
    return simulate_jump_process(net, x0, ab, rng, t_max, chain_only);
}

HittingEstimate estimate_hitting_prob(const Network& net, StateId x0, const PartitionPair& ab,
                                      long samples, std::uint64_t seed, double t_max, int workers,
                                      bool chain_only) {
    if (samples < 100) throw InvalidInput("hitting estimate needs at least 100 samples");
    if (t_max <= 0.0) t_max = default_t_max(net);
    std::vector<unsigned char> outcome(samples);
    parallel_for(static_cast<std::size_t>(samples), workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        Trajectory traj = simulate_jump_process(net, x0, ab, rng, t_max, chain_only);
        outcome[i] = static_cast<unsigned char>(traj.terminal);
    });
    long hit_a = 0, censored = 0;
    for (unsigned char o : outcome) {
        if (o == static_cast<unsigned char>(Terminal::HitA)) ++hit_a;
        if (o == static_cast<unsigned char>(Terminal::Censored)) ++censored;
    }
    long used = samples - censored;
    if (used == 0) throw SolverError("all simulation runs were censored");
    HittingEstimate est;
    est.samples = used;
    est.censored = censored;
    est.value = static_cast<double>(hit_a) / static_cast<double>(used);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(used));
    return est;
}

std::string dump_trajectory(const Trajectory& traj, const Network& net) {
    std::ostringstream out;
    for (const auto& ev : traj.events)
        out << "t " << fmt_g12(ev.time) << ' ' << net.name(ev.state) << '\n';
    out << "end " << terminal_name(traj.terminal) << '\n';
    return out.str();
}

}  // namespace capnet
