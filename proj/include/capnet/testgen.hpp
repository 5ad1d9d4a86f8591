#pragma once

#include "capnet/flow.hpp"
#include "capnet/network.hpp"
#include "capnet/rng.hpp"

namespace capnet {

/// Random admissible test potential: 1 on A, 0 on B, uniform(0,1) elsewhere.
Potential random_admissible_potential(const Network& net, const PartitionPair& ab, Rng& rng);

/// Random loop-free unit flow, reproducible from the rng stream. Draws an
/// admissible potential, keeps its strictly descending positive-K edges
/// weighted by [v(x)-v(y)] K(x,y), prunes dead ends, then routes one unit of
/// mass from A to B through the remaining acyclic digraph in descending
/// order, splitting proportionally to the edge weights. Kirchhoff holds by
/// construction; retries with fresh draws when pruning severs A from B.
UnitFlow random_unit_flow(const Network& net, const PartitionPair& ab, Rng& rng,
                          int max_attempts = 64);

/// Random connected network with n_states in [4, max_states], a spanning
/// tree plus extra edges, K in [0.2, 2), mu in [0.5, 2), A = {s0} and
/// B = {s<last>} embedded.
Network random_connected_network(Rng& rng, int max_states = 12);

}  // namespace capnet
