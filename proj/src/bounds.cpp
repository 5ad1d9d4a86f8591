#include "capnet/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "capnet/dirichlet.hpp"

namespace capnet {

const char* bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::ExactDirichlet: return "exact-dirichlet";
        case BoundKind::DirichletUpper: return "dirichlet-upper";
        case BoundKind::ThomsonLower: return "thomson-lower";
        case BoundKind::BkExact: return "bk-exact";
        case BoundKind::BkMc: return "bk-mc";
    }
    return "?";
}

double chain_conductance(const StoppedPath& path, const std::vector<double>& phi) {
    if (phi.size() != static_cast<std::size_t>(path.edge_count()))
        throw InvalidInput("phi values do not match path edges");
    double total = 0.0;
    for (double v : phi) {
        if (!(v > 0.0))
            throw InvalidInput("nonpositive dPhi/dK along path (absolute-continuity failure)");
        total += v;
    }
    return 1.0 / total;
}

namespace {

// dPhi/dK on the support; throws on a positive-mass edge with zero K.
double rn_derivative(const Network& net, StateId x, StateId y, double mass) {
    double k = net.cond(x, y);
    if (!(k > 0.0))
        throw InvalidInput("flow mass on zero-conductance edge " + net.name(x) + "->" +
                           net.name(y) + " (absolute-continuity failure)");
    return mass / k;
}

double path_phi_sum(const Network& net, const EdgeMeasure& phi_map, const StoppedPath& path) {
    double s = 0.0;
    for (std::size_t i = 1; i < path.states.size(); ++i) {
        auto it = phi_map.find({path.states[i - 1], path.states[i]});
        double mass = it == phi_map.end() ? 0.0 : it->second;
        s += rn_derivative(net, path.states[i - 1], path.states[i], mass);
        if (!(s > 0.0))
            throw InvalidInput("zero dPhi/dK along a support path");
    }
    return s;
}

}  // namespace

CapacityReport bk_path_estimate(const Network& net, const PathMeasure& pm,
                                const PartitionPair& ab) {
    check_path_measure(pm, ab);
    EdgeMeasure phi = path_measure_to_flow(pm, ab);
    double value = 0.0;
    for (const auto& [path, p] : pm.support) value += p / path_phi_sum(net, phi, path);
    CapacityReport rep;
    rep.value = value;
    rep.kind = BoundKind::BkExact;
    rep.meta = "paths=" + std::to_string(pm.support.size());
    return rep;
}

CapacityReport bk_flow_estimate(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                                BkMode mode, long samples, std::uint64_t seed, int workers,
                                std::size_t path_budget) {
    // Radon-Nikodym values per support edge, shared by both modes.
    EdgeMeasure phi;
    for (const auto& [e, v] : f.edges)
        if (v > 0.0) phi[e] = rn_derivative(net, e.first, e.second, v);

    FlowChain chain = flow_to_chain(f, ab);
    CapacityReport rep;
    std::string warning;

    if (mode == BkMode::Exact) {
        try {
            PathMeasure pm = enumerate_stopped_paths(chain, ab, path_budget);
            double value = 0.0;
            for (const auto& [path, p] : pm.support) {
                double s = 0.0;
                for (std::size_t i = 1; i < path.states.size(); ++i)
                    s += phi.at({path.states[i - 1], path.states[i]});
                value += p / s;
            }
            rep.value = value;
            rep.kind = BoundKind::BkExact;
            rep.residual_or_stderr = 0.0;
            rep.meta = "flow=" + hex16(flow_hash(f)) +
                       " paths=" + std::to_string(pm.support.size());
            return rep;
        } catch (const PathBudgetExceeded& e) {
            warning = std::string(" warning=") + "path-budget-exceeded-fell-back-to-mc";
            mode = BkMode::Mc;
            if (samples <= 0) samples = 100000;
        }
        // CycleInSupport propagates: the caller must ask for mc explicitly.
    }

    if (samples < 2) throw InvalidInput("mc mode needs at least 2 samples");
    const int max_len = 100 * std::max(1, f.n);
    std::vector<double> vals(samples);
    parallel_for(static_cast<std::size_t>(samples), workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        StoppedPath path = sample_stopped_path(chain, ab, rng, max_len);
        double s = 0.0;
        for (std::size_t j = 1; j < path.states.size(); ++j)
            s += phi.at({path.states[j - 1], path.states[j]});
        vals[i] = 1.0 / s;
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(samples);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    double std_err = std::sqrt(ss / (static_cast<double>(samples) - 1.0) /
                               static_cast<double>(samples));
    rep.value = mean;
    rep.kind = BoundKind::BkMc;
    rep.residual_or_stderr = std_err;
    rep.meta = "flow=" + hex16(flow_hash(f)) + " seed=" + std::to_string(seed) +
               " samples=" + std::to_string(samples) + warning;
    return rep;
}

CapacityReport thomson_bound(const Network& net, const UnitFlow& f) {
    double energy = 0.0;
    for (const auto& [e, v] : f.edges)
        if (v > 0.0) energy += v * rn_derivative(net, e.first, e.second, v);
    if (!(energy > 0.0)) throw InvalidInput("flow has zero energy; Thomson bound undefined");
    CapacityReport rep;
    rep.value = 1.0 / energy;
    rep.kind = BoundKind::ThomsonLower;
    rep.residual_or_stderr = 0.0;
    rep.meta = "flow=" + hex16(flow_hash(f)) + " energy=" + fmt_g12(energy);
    return rep;
}

CapacityReport dirichlet_upper_bound(const Network& net, const Potential& h,
                                     const PartitionPair& ab) {
    const double slack = 1e-12;
    if (h.values.size() != static_cast<std::size_t>(net.size()))
        throw InvalidInput("potential size mismatch");
    for (StateId a : ab.a)
        if (std::abs(h[a] - 1.0) > slack) throw InvalidInput("inadmissible potential: h != 1 on A");
    for (StateId b : ab.b)
        if (std::abs(h[b]) > slack) throw InvalidInput("inadmissible potential: h != 0 on B");
    for (double v : h.values)
        if (v < -slack || v > 1.0 + slack)
            throw InvalidInput("inadmissible potential: values leave [0,1]");
    CapacityReport rep;
    rep.value = dirichlet_energy(net, h);
    rep.kind = BoundKind::DirichletUpper;
    rep.meta = "test potential";
    return rep;
}

OrderingReport verify_ordering(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                               double tol) {
    OrderingReport rep;
    rep.tol = tol;
    rep.thomson = thomson_bound(net, f).value;
    rep.bk_exact = bk_flow_estimate(net, f, ab, BkMode::Exact).value;
    rep.cap = capacity(net, ab).value;
    rep.thomson_le_bk = rep.thomson <= rep.bk_exact + tol;
    rep.bk_le_cap = rep.bk_exact <= rep.cap + tol;
    return rep;
}

}  // namespace capnet
