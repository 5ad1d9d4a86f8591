#include "capnet/dirichlet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace capnet {

bool has_killing(const Network& net) {
    for (StateId x = 0; x < net.size(); ++x)
        if (net.kill(x) > 0.0) return true;
    return false;
}

namespace {

// Interior = reachable from A u B, not boundary, not inert. Throws when a
// live state is cut off (the potential there would be undetermined).
std::vector<StateId> interior_states(const Network& net, const PartitionPair& ab) {
    std::vector<StateId> seed = ab.a;
    seed.insert(seed.end(), ab.b.begin(), ab.b.end());
    auto reach = reachable_from(net, seed);
    for (StateId x = 0; x < net.size(); ++x)
        if (!net.inert(x) && !in_set(reach, x))
            throw InvalidInput("undetermined potential: state '" + net.name(x) +
                               "' does not communicate with A∪B");
    std::vector<StateId> interior;
    for (StateId x : reach)
        if (!in_set(ab.a, x) && !in_set(ab.b, x)) interior.push_back(x);
    return interior;
}

double generator_residual(const Network& net, const Potential& h,
                          const std::vector<StateId>& interior) {
    double worst = 0.0;
    for (StateId x : interior) {
        double flux = 0.0, total = 0.0;
        for (const auto& [y, k] : net.neighbors(x)) {
            flux += k * (h[y] - h[x]);
            total += k;
        }
        if (total > 0.0) worst = std::max(worst, std::abs(flux) / total);
    }
    return worst;
}

}  // namespace

Potential solve_harmonic(const Network& net, const PartitionPair& ab, double tol) {
    if (has_killing(net))
        throw UnsupportedCase("harmonic potential with killing is unsupported; "
                              "use iterate_minimal_solution");
    auto interior = interior_states(net, ab);
    Potential h{std::vector<double>(net.size(), 0.0)};
    for (StateId a : ab.a) h[a] = 1.0;

    const int n = static_cast<int>(interior.size());
    if (n > 0) {
        std::vector<int> pos(net.size(), -1);
        for (int i = 0; i < n; ++i) pos[interior[i]] = i;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            StateId x = interior[i];
            for (const auto& [y, k] : net.neighbors(x)) {
                m(i, i) += k;
                if (pos[y] >= 0)
                    m(i, pos[y]) -= k;
                else if (in_set(ab.a, y))
                    rhs(i) += k;
            }
        }
        Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
        for (int i = 0; i < n; ++i) h[interior[i]] = std::clamp(sol(i), 0.0, 1.0);
    }

    double res = generator_residual(net, h, interior);
    if (!(res <= tol))
        throw SolverError("harmonic solve failed: generator residual " + fmt_g12(res) +
                          " exceeds tolerance " + fmt_g12(tol));
    return h;
}

double dirichlet_energy(const Network& net, const Potential& h) {
    if (has_killing(net))
        throw UnsupportedCase("Dirichlet form with killing is unsupported on finite networks");
    double e = 0.0;
    for (const auto& [x, y, k] : net.undirected_edges()) {
        double d = h[x] - h[y];
        e += k * d * d;
    }
    return e;
}

CapacityReport capacity(const Network& net, const PartitionPair& ab, double tol) {
    Potential h = solve_harmonic(net, ab, tol);
    CapacityReport rep;
    rep.value = dirichlet_energy(net, h);
    rep.kind = BoundKind::ExactDirichlet;
    rep.residual_or_stderr = generator_residual(net, h, interior_states(net, ab));
    rep.meta = "harmonic potential";
    return rep;
}

ChargePair equilibrium_charges(const Network& net, const Potential& h, const PartitionPair& ab) {
    auto charge = [&](const std::vector<StateId>& side) {
        double q = 0.0;
        for (StateId x : side)
            for (const auto& [y, k] : net.neighbors(x)) q += k * (h[x] - h[y]);
        return q;
    };
    return {charge(ab.a), charge(ab.b)};
}

namespace {

Potential iterate_kernel(const Network& net, const PartitionPair& ab, double tol, int max_steps,
                         bool escape_mass) {
    Potential g{std::vector<double>(net.size(), 0.0)};
    if (!escape_mass)
        for (StateId a : ab.a) g[a] = 1.0;

    std::vector<StateId> interior;
    std::vector<JumpKernel> kernels(net.size());
    for (StateId x = 0; x < net.size(); ++x) {
        if (in_set(ab.a, x) || in_set(ab.b, x)) continue;
        interior.push_back(x);
        if (net.lambda(x) > 0.0) kernels[x] = jump_kernel(net, x);
    }

    // Synchronous sweeps; the stop rule bounds the remaining geometric tail
    // by increment * rho / (1 - rho) with rho the observed contraction ratio,
    // so the result is within ~tol of the fixed point, not merely stalled.
    std::vector<double> next = g.values;
    double increment = 0.0, prev_increment = 0.0;
    for (int step = 0; step < max_steps; ++step) {
        increment = 0.0;
        for (StateId x : interior) {
            if (net.lambda(x) == 0.0) continue;  // p(x,.) = delta_x: value is stuck
            double v = escape_mass ? kernels[x].cemetery : 0.0;
            for (const auto& [y, p] : kernels[x].moves) v += p * g[y];
            next[x] = v;
            increment = std::max(increment, std::abs(v - g[x]));
        }
        g.values = next;
        if (increment == 0.0) return g;
        if (step > 0 && prev_increment > 0.0) {
            double rho = std::min(increment / prev_increment, 0.999999);
            if (increment * rho / (1.0 - rho) < tol && increment < tol) return g;
        }
        prev_increment = increment;
    }
    throw SolverError("minimal-solution iteration did not converge in " +
                      std::to_string(max_steps) + " steps; last increment " + fmt_g12(increment));
}

}  // namespace

Potential iterate_minimal_solution(const Network& net, const PartitionPair& ab, double tol,
                                   int max_steps) {
    return iterate_kernel(net, ab, tol, max_steps, false);
}

Potential iterate_escape_mass(const Network& net, const PartitionPair& ab, double tol,
                              int max_steps) {
    return iterate_kernel(net, ab, tol, max_steps, true);
}

}  // namespace capnet
