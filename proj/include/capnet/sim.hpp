#pragma once

#include <cstdint>

#include "capnet/network.hpp"
#include "capnet/rng.hpp"

namespace capnet {

enum class Terminal { HitA, HitB, Killed, Censored };

const char* terminal_name(Terminal t);

struct TrajectoryEvent {
    double time = 0.0;
    StateId state = 0;
};

/// One run of the jump process: events are (arrival time, state) starting at
/// (0, x0); the run ends on entering A or B, on killing, or at t_max.
struct Trajectory {
    std::vector<TrajectoryEvent> events;
    Terminal terminal = Terminal::Censored;
};

struct HittingEstimate {
    double value = 0.0;      // fraction of hit-A among non-censored runs
    double std_error = 0.0;  // sqrt(value (1-value) / samples)
    long samples = 0;        // non-censored runs used
    long censored = 0;
};

double default_t_max(const Network& net);

/// Exponential holds at rate lambda(x), jumps by the kernel k/lambda with a
/// kill/lambda mass to the cemetery. With chain_only the clock draws are
/// skipped and each jump advances time by 1 (same skeleton law, fewer draws).
Trajectory simulate_jump_process(const Network& net, StateId x0, const PartitionPair& ab,
                                 Rng& rng, double t_max, bool chain_only = false);
Trajectory simulate_jump_process(const Network& net, StateId x0, const PartitionPair& ab,
                                 std::uint64_t rng_seed, double t_max, bool chain_only = false);

/// Monte Carlo estimate of P_x0(tau_A < tau_B) (of g_AB with killing); run i
/// uses Rng::stream(seed, i), so the result is worker-count independent.
HittingEstimate estimate_hitting_prob(const Network& net, StateId x0, const PartitionPair& ab,
                                      long samples, std::uint64_t seed, double t_max = 0.0,
                                      int workers = 1, bool chain_only = false);

std::string dump_trajectory(const Trajectory& traj, const Network& net);

}  // namespace capnet
