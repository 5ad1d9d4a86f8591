#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "capnet/dirichlet.hpp"
#include "capnet/network.hpp"
#include "capnet/rng.hpp"

namespace capnet {

using DirectedEdge = std::pair<StateId, StateId>;
/// Sparse nonnegative measure on directed edges (std::map keeps every
/// traversal deterministic).
using EdgeMeasure = std::map<DirectedEdge, double>;

/// Directed edge measure intended to satisfy the four unit-flow conditions:
/// unit boundary mass, Kirchhoff off A u B, orientation (no edge together
/// with its reverse), absolute continuity w.r.t. K. `add` enforces the
/// orientation rule structurally; `add_raw` bypasses it for fixtures.
struct UnitFlow {
    explicit UnitFlow(int n_states) : n(n_states) {}

    void add(StateId from, StateId to, double mass);
    void add_raw(StateId from, StateId to, double mass);
    double at(StateId from, StateId to) const;
    double total_mass() const;
    std::vector<double> out_mass() const;  // nu, the left marginal
    std::vector<double> in_mass() const;

    int n = 0;
    EdgeMeasure edges;
};

/// Markov chain of a flow: nu-proportional start in A, rows ell(x,.) =
/// Phi(x,.)/nu(x) on nu-positive states, run until it enters B.
struct FlowChain {
    int n = 0;
    std::vector<double> nu;
    std::vector<std::vector<std::pair<StateId, double>>> rows;  // empty when nu(x) == 0
    std::vector<std::pair<StateId, double>> init;
};

/// Finite A->B path: starts in A, ends in B, interior avoids B.
struct StoppedPath {
    std::vector<StateId> states;
    int edge_count() const { return static_cast<int>(states.size()) - 1; }
    bool operator<(const StoppedPath& o) const { return states < o.states; }
    bool operator==(const StoppedPath& o) const { return states == o.states; }
};

struct PathMeasure {
    std::vector<std::pair<StoppedPath, double>> support;
};

struct FlowDiscrepancy {
    EdgeMeasure tilde_phi;  // expected edge visits of the stopped chain
    EdgeMeasure psi;        // flow minus tilde_phi
};

/// Sampler exceeded max_len; carries what was walked so far.
struct PathLengthExceeded : Error {
    PathLengthExceeded(std::string msg, StoppedPath p)
        : Error(std::move(msg)), partial(std::move(p)) {}
    StoppedPath partial;
};

/// Exact enumeration found a cycle reachable from the start distribution.
struct CycleInSupport : Error {
    using Error::Error;
};

/// Exact enumeration exceeded the path budget.
struct PathBudgetExceeded : Error {
    using Error::Error;
};

ValidationReport validate_unit_flow(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                                    double tol = 1e-10, bool require_loop_free = false);

bool is_loop_free(const UnitFlow& f);

/// Phi(x,y) = [h(x)-h(y)]_+ K(x,y) / cap; loop-free by construction.
/// Masses below mass_floor are linear-solver noise (exactly-constant
/// plateaus of h perturbed at the 1e-16 level) and are dropped; the floor is
/// far inside the validation tolerances.
UnitFlow harmonic_flow(const Network& net, const Potential& h, double cap,
                       double mass_floor = 1e-13);

FlowChain flow_to_chain(const UnitFlow& f, const PartitionPair& ab);

StoppedPath sample_stopped_path(const FlowChain& chain, const PartitionPair& ab, Rng& rng,
                                int max_len);
StoppedPath sample_stopped_path(const FlowChain& chain, const PartitionPair& ab,
                                std::uint64_t rng_seed, int max_len);

/// All stopped paths with their probabilities, in lexicographic DFS order.
/// Throws CycleInSupport / PathBudgetExceeded when enumeration is impossible.
PathMeasure enumerate_stopped_paths(const FlowChain& chain, const PartitionPair& ab,
                                    std::size_t max_paths = 1000000);

/// Expected edge visits of the stopped chain by an exact linear solve over
/// the states reachable from the start distribution, and the discrepancy
/// psi = Phi - tilde(Phi). Verifies psi >= -tol entrywise and that psi obeys
/// Kirchhoff's law at every state.
FlowDiscrepancy induced_flow(const UnitFlow& f, const PartitionPair& ab, double tol = 1e-10);

/// Expected edge-occurrence counts of a random path drawn from pm.
EdgeMeasure path_measure_to_flow(const PathMeasure& pm, const PartitionPair& ab);

void check_path_membership(const StoppedPath& p, const PartitionPair& ab);
void check_path_measure(const PathMeasure& pm, const PartitionPair& ab, double tol = 1e-12);

UnitFlow load_unit_flow(std::string_view text, const Network& net);
std::string serialize_flow(const UnitFlow& f, const Network& net);
PathMeasure load_path_measure(std::string_view text, const Network& net);
std::string serialize_path_measure(const PathMeasure& pm, const Network& net);

std::uint64_t flow_hash(const UnitFlow& f);

}  // namespace capnet
