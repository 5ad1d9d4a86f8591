#pragma once

#include <cstdint>

#include "capnet/capacity_report.hpp"
#include "capnet/flow.hpp"

namespace capnet {

enum class BkMode { Exact, Mc };

/// Effective conductance of a one-dimensional chain whose edges carry the
/// Radon-Nikodym values phi = dPhi/dK: (sum phi)^-1.
double chain_conductance(const StoppedPath& path, const std::vector<double>& phi);

/// Theorem-1 value of a path measure: E[ (sum_{(x,y) in gamma} dPhi_P/dK)^-1 ].
CapacityReport bk_path_estimate(const Network& net, const PathMeasure& pm,
                                const PartitionPair& ab);

/// Theorem-2 value of a unit flow. Exact mode enumerates the stopped paths
/// of the flow chain (needs acyclic reachable support; falls back to mc when
/// the path budget overflows). Mc mode samples `samples` paths, one derived
/// rng stream per sample, and reports mean and standard error.
CapacityReport bk_flow_estimate(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                                BkMode mode, long samples = 0, std::uint64_t seed = 0,
                                int workers = 1, std::size_t path_budget = 1000000);

/// 1 / E(Phi) with E(Phi) = sum Phi(x,y)^2 / K(x,y).
CapacityReport thomson_bound(const Network& net, const UnitFlow& f);

/// Dirichlet energy of an admissible test potential (upper bound on Cap).
CapacityReport dirichlet_upper_bound(const Network& net, const Potential& h,
                                     const PartitionPair& ab);

struct OrderingReport {
    double thomson = 0.0;
    double bk_exact = 0.0;
    double cap = 0.0;
    double tol = 0.0;
    bool thomson_le_bk = false;
    bool bk_le_cap = false;
    bool ok() const { return thomson_le_bk && bk_le_cap; }
};

/// Jensen chain: thomson <= bk-exact <= Cap, each within tol.
OrderingReport verify_ordering(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                               double tol = 1e-10);

}  // namespace capnet
