#pragma once

#include <vector>

#include "capnet/capacity_report.hpp"
#include "capnet/network.hpp"

namespace capnet {

/// Real function on states. Admissible potentials are 1 on A, 0 on B and
/// take values in [0, 1].
struct Potential {
    std::vector<double> values;
    double operator[](StateId x) const { return values[x]; }
    double& operator[](StateId x) { return values[x]; }
};

struct ChargePair {
    double qa = 0.0;
    double qb = 0.0;
};

/// Solves the Dirichlet problem h=1 on A, h=0 on B, Lh=0 elsewhere on the
/// kill-free network. Interior states must reach A u B through positive
/// conductances (inert states are excluded and get the value 0). The result
/// satisfies |(Lh)(x)| <= tol * lambda(x) at every interior state.
Potential solve_harmonic(const Network& net, const PartitionPair& ab, double tol = 1e-10);

/// 1/2 sum_{x,y} K(x,y) (h(x)-h(y))^2. Refuses networks with killing.
double dirichlet_energy(const Network& net, const Potential& h);

/// Cap(A,B) = E(h_AB); residual_or_stderr records the worst interior
/// generator residual relative to lambda.
CapacityReport capacity(const Network& net, const PartitionPair& ab, double tol = 1e-10);

/// Q_A = sum_A mu (-Lh), Q_B likewise; for the harmonic potential these are
/// +-Cap(A,B).
ChargePair equilibrium_charges(const Network& net, const Potential& h, const PartitionPair& ab);

/// Monotone fixed-point iteration g_{n+1} = p g_n (Jacobi updates) for the
/// minimal nonnegative solution g_AB(x) = P_x(tau_A < zeta, tau_A < tau_B).
/// Killing is allowed; the kernel is then substochastic.
Potential iterate_minimal_solution(const Network& net, const PartitionPair& ab, double tol = 1e-12,
                                   int max_steps = 100000);

/// Companion iteration for the killed-before-hitting mass
/// e(x) = P_x(zeta <= tau_{A u B}); zero on A u B.
Potential iterate_escape_mass(const Network& net, const PartitionPair& ab, double tol = 1e-12,
                              int max_steps = 100000);

bool has_killing(const Network& net);

}  // namespace capnet
