#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capnet/network.hpp"
#include "capnet/report.hpp"

namespace capnet::cli {

struct VerifyOptions {
    std::uint64_t seed = 0;
    long samples = 10000;
    double tol = 1e-10;
    int workers = 1;
    int n_potentials = 100;
    int n_flows = 25;
};

/// Cross-principle consistency suite on one network: Dirichlet solve and
/// charge identity, harmonic-flow attainment of the BK and Thomson bounds,
/// randomized upper/lower bounds with the Jensen ordering, discrepancy of
/// the harmonic flow, truncation monotonicity on an automatic two-level
/// ladder, and Monte Carlo hitting probabilities against the solver.
Report verify_suite(const Network& net, const PartitionPair& ab, const VerifyOptions& opts);

/// Exit codes: 0 success, 1 validation/solver failure, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace capnet::cli
