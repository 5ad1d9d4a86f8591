#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capnet/util.hpp"

namespace capnet {

using StateId = int;

/// Disjoint nonempty source/target sets (indices sorted ascending).
struct PartitionPair {
    std::vector<StateId> a;
    std::vector<StateId> b;
};

struct Violation {
    std::string rule;
    std::string where;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Sub-probability kernel of the jump chain at one state: moves to neighbors
/// plus an optional mass to the absorbing cemetery.
struct JumpKernel {
    std::vector<std::pair<StateId, double>> moves;
    double cemetery = 0.0;
};

/// Finite reversible network (Omega, mu, K) with optional per-state killing.
/// Immutable once built; all solvers and samplers share const references.
///
/// add_edge writes both orientations, so K is symmetric by construction.
/// add_half_edge writes one orientation only; it exists so corruption
/// fixtures can exercise the K-symmetry validation rule.
class Network {
  public:
    Network() = default;

    StateId add_state(std::string name, double mu = 1.0);
    void add_edge(StateId x, StateId y, double k);
    void add_half_edge(StateId x, StateId y, double k);
    void set_kill(StateId x, double rate);
    void mark_inert(StateId x);
    void set_embedded_ab(PartitionPair ab) { embedded_ab_ = std::move(ab); }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(StateId x) const { return names_[x]; }
    std::optional<StateId> index_of(const std::string& name) const;
    StateId require_state(const std::string& name) const;

    double mu(StateId x) const { return mu_[x]; }
    double kill(StateId x) const { return kill_[x]; }
    bool inert(StateId x) const { return inert_[x]; }
    const std::optional<PartitionPair>& embedded_ab() const { return embedded_ab_; }

    /// Directed conductance entry K(x, y); 0 when absent.
    double cond(StateId x, StateId y) const;
    const std::vector<std::pair<StateId, double>>& neighbors(StateId x) const { return adj_[x]; }

    double total_cond(StateId x) const;
    /// lambda(x) = (sum_y K(x,y) + mu(x) kill(x)) / mu(x); total jump rate.
    double lambda(StateId x) const;

    /// Undirected positive-or-zero edges as (x, y, K) with x < y; only pairs
    /// whose two orientations agree bitwise appear here.
    std::vector<std::tuple<StateId, StateId, double>> undirected_edges() const;

    bool operator==(const Network& other) const;

  private:
    void insert_directed(StateId x, StateId y, double k);

    std::vector<std::string> names_;
    std::vector<double> mu_;
    std::vector<double> kill_;
    std::vector<char> inert_;
    std::vector<std::vector<std::pair<StateId, double>>> adj_;  // sorted by neighbor
    std::optional<PartitionPair> embedded_ab_;
};

/// Builds a PartitionPair from state names; checks disjoint, nonempty, known.
PartitionPair make_partition(const Network& net, const std::vector<std::string>& a_names,
                             const std::vector<std::string>& b_names);
bool in_set(const std::vector<StateId>& sorted_set, StateId x);

Network load_network(std::string_view text);
std::string serialize(const Network& net);

/// Report-only consistency check; with a PartitionPair also flags non-inert
/// states unreachable from A u B through positive conductances.
ValidationReport validate(const Network& net, const PartitionPair* ab = nullptr,
                          double sym_rel_tol = 1e-12);

JumpKernel jump_kernel(const Network& net, StateId x);

/// States reachable from `seed` through positive-K edges (sorted).
std::vector<StateId> reachable_from(const Network& net, const std::vector<StateId>& seed);

}  // namespace capnet
