#pragma once

#include "capnet/flow.hpp"

namespace capnet {

/// Effective conductance of resistors in series: (sum R_j)^-1.
double series_reduce(const std::vector<double>& resistances);

/// Effective conductance of conductances in parallel: sum K.
double parallel_reduce(const std::vector<double>& conductances);

/// One series chain of the equivalent network: a support path with its
/// reduced resistances R^gamma_xy = R_xy Phi_P(x,y) / P(gamma).
struct EquivalentChain {
    StoppedPath path;
    double probability = 0.0;
    std::vector<double> reduced_resistances;
    double conductance = 0.0;
};

/// Parallel assembly of the chains; total equals the Berman-Konsowa value
/// of the same path measure.
struct EquivalentNetwork {
    std::vector<EquivalentChain> chains;
    double total = 0.0;
};

EquivalentNetwork build_equivalent_network(const Network& net, const PathMeasure& pm,
                                           const PartitionPair& ab);

/// Loadable network file for the equivalent parallel-chain network; interior
/// vertices are split per chain with fresh names "γ<i>.<j>".
std::string emit_equivalent_network(const EquivalentNetwork& eq, const Network& net);

struct PowerReport {
    double power = 0.0;  // dissipation at unit voltage = Cap = C_eff
    double r_eff = 0.0;
    double c_eff = 0.0;
    EdgeMeasure currents;  // i_xy = K_xy (V_x - V_y)_+
    double max_kirchhoff_residual = 0.0;
};

/// Unit-voltage electric solution: V = h_AB, Ohm currents, dissipated power,
/// effective resistance/conductance. Kill-free networks only.
PowerReport power_and_effective_resistance(const Network& net, const PartitionPair& ab,
                                           double tol = 1e-10);

}  // namespace capnet
