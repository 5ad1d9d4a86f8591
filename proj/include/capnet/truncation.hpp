#pragma once

#include <string_view>
#include <vector>

#include "capnet/network.hpp"

namespace capnet {

/// Nested state subsets Omega_1 <= ... <= Omega_m, each containing A u B.
struct TruncationLadder {
    std::vector<std::vector<StateId>> levels;  // each sorted ascending
};

/// Zeroes conductances with an endpoint outside `subset`; every state is
/// retained (mu unchanged) and newly rate-zero states are flagged inert so
/// flows at different levels share one state space.
Network truncate(const Network& net, const std::vector<StateId>& subset, const PartitionPair& ab);

struct LevelCapacity {
    int level = 0;
    double cap = 0.0;
    bool connected = true;
};

/// Cap_n per ladder level, in ladder order. A level that disconnects A from
/// B contributes Cap_n = 0. The sequence must be nondecreasing within tol.
std::vector<LevelCapacity> truncation_sweep(const Network& net, const TruncationLadder& ladder,
                                            const PartitionPair& ab, double tol = 1e-10);

bool connects(const Network& net, const PartitionPair& ab);

TruncationLadder load_ladder(std::string_view text, const Network& net);
void check_ladder(const TruncationLadder& ladder, const Network& net, const PartitionPair& ab);

}  // namespace capnet
