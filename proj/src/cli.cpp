#include "capnet/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "capnet/bounds.hpp"
#include "capnet/dirichlet.hpp"
#include "capnet/equiv.hpp"
#include "capnet/flow.hpp"
#include "capnet/sim.hpp"
#include "capnet/testgen.hpp"
#include "capnet/truncation.hpp"

namespace capnet::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const Report& rep, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << rep.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InvalidInput("cannot write file '" + out_path + "'");
        out << rep.str();
    }
}

PartitionPair resolve_ab(const Network& net, const std::vector<std::string>& a_names,
                         const std::vector<std::string>& b_names) {
    if (!a_names.empty() || !b_names.empty()) {
        if (a_names.empty() || b_names.empty())
            throw InvalidInput("--A and --B must be given together");
        return make_partition(net, a_names, b_names);
    }
    if (net.embedded_ab()) return *net.embedded_ab();
    throw InvalidInput("no A/B sets: embed `set A`/`set B` in the network file "
                       "or pass --A and --B");
}

void report_violations(Report& rep, const std::string& prefix,
                       const ValidationReport& validation) {
    for (const auto& v : validation.violations)
        rep.raw("violation " + prefix + v.rule + " " + v.where + " " + fmt_g12(v.magnitude));
}

struct CommonArgs {
    std::string net_path;
    std::vector<std::string> a_names, b_names;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    bool seed_given = false;
    long samples = 0;
    int workers = 1;
    std::string out_path;
};

std::uint64_t effective_seed(const CommonArgs& c) {
    if (c.seed_given) return c.seed;
    if (const char* env = std::getenv("CAPNET_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& c, bool needs_net = true) {
    auto* net_opt = cmd->add_option("--net", c.net_path, "network file")
                        ->check(CLI::ExistingFile);
    if (needs_net) net_opt->required();
    cmd->add_option("--A", c.a_names, "override A states")->delimiter(',');
    cmd->add_option("--B", c.b_names, "override B states")->delimiter(',');
    cmd->add_option("--tol", c.tol, "numerical tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "rng master seed (fallback: CAPNET_SEED)")
        ->each([&c](const std::string&) { c.seed_given = true; });
    cmd->add_option("--samples", c.samples, "Monte Carlo sample count");
    cmd->add_option("--workers", c.workers, "worker thread cap")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out_path, "write the report here instead of stdout");
}

struct LoadedNet {
    Network net;
    PartitionPair ab;
    std::uint64_t hash;
};

LoadedNet load_net(const CommonArgs& c) {
    std::string text = read_file(c.net_path);
    Network net = load_network(text);
    PartitionPair ab = resolve_ab(net, c.a_names, c.b_names);
    return {std::move(net), std::move(ab), fnv1a64(text)};
}

int finish(Report& rep, const CommonArgs& c, bool ok) {
    write_output(rep, c.out_path);
    return ok ? 0 : 1;
}

}  // namespace

Report verify_suite(const Network& net, const PartitionPair& ab, const VerifyOptions& opts) {
    Report rep;
    rep.kv("seed", static_cast<long long>(opts.seed));
    rep.kv("tol", opts.tol);
    rep.kv("samples", static_cast<long long>(opts.samples));
    const double tol = opts.tol;

    auto validation = validate(net, &ab);
    report_violations(rep, "", validation);
    rep.check("network-valid", validation.ok(), static_cast<double>(validation.violations.size()));
    if (!validation.ok()) {
        rep.raw("note remaining checks skipped");
        return rep;
    }
    bool killed = has_killing(net);
    rep.check("kill-free", !killed, killed ? 1.0 : 0.0);
    if (killed) {
        rep.raw("note remaining checks skipped");
        return rep;
    }

    // Dirichlet solve + charge identity
    Potential h = solve_harmonic(net, ab, tol);
    CapacityReport cap = capacity(net, ab, tol);
    rep.kv("cap", cap.value);
    rep.check("dirichlet-solve", true, cap.residual_or_stderr);
    ChargePair q = equilibrium_charges(net, h, ab);
    double charge_resid = std::max(std::abs(q.qa - cap.value), std::abs(q.qa + q.qb));
    rep.check("charge-identity", charge_resid <= tol * std::max(cap.value, 1.0), charge_resid);

    // harmonic flow: validity, attainment, discrepancy
    UnitFlow hflow = harmonic_flow(net, h, cap.value);
    auto fval = validate_unit_flow(net, hflow, ab, tol, true);
    report_violations(rep, "flow-", fval);
    rep.check("harmonic-flow-valid", fval.ok(), static_cast<double>(fval.violations.size()));
    double bk = bk_flow_estimate(net, hflow, ab, BkMode::Exact).value;
    rep.check("bk-attains-cap", std::abs(bk - cap.value) <= tol, std::abs(bk - cap.value));
    double th = thomson_bound(net, hflow).value;
    rep.check("thomson-attains-cap", std::abs(th - cap.value) <= tol, std::abs(th - cap.value));

    // random admissible potentials: energy >= Cap
    double worst_upper = -1e300;
    for (int i = 0; i < opts.n_potentials; ++i) {
        Rng rng = Rng::stream(opts.seed, 1000 + static_cast<std::uint64_t>(i));
        Potential v = random_admissible_potential(net, ab, rng);
        worst_upper = std::max(worst_upper, cap.value - dirichlet_upper_bound(net, v, ab).value);
    }
    rep.check("dirichlet-upper-random", worst_upper <= tol, worst_upper);

    // random loop-free flows: thomson <= bk <= Cap
    double worst_lower = -1e300, worst_jensen = -1e300;
    for (int i = 0; i < opts.n_flows; ++i) {
        Rng rng = Rng::stream(opts.seed, 2000 + static_cast<std::uint64_t>(i));
        UnitFlow f = random_unit_flow(net, ab, rng);
        double fbk = bk_flow_estimate(net, f, ab, BkMode::Exact).value;
        double fth = thomson_bound(net, f).value;
        worst_lower = std::max(worst_lower, fbk - cap.value);
        worst_jensen = std::max(worst_jensen, fth - fbk);
    }
    rep.check("bk-lower-random", worst_lower <= tol, worst_lower);
    rep.check("jensen-ordering", worst_jensen <= tol, worst_jensen);

    // discrepancy of the harmonic flow vanishes
    double psi_max = 0.0;
    bool psi_ok = true;
    try {
        FlowDiscrepancy d = induced_flow(hflow, ab, tol);
        for (const auto& [e, v] : d.psi) psi_max = std::max(psi_max, std::abs(v));
        psi_ok = psi_max <= tol;
    } catch (const Error&) {
        psi_ok = false;
        psi_max = 1.0;
    }
    rep.check("discrepancy-harmonic", psi_ok, psi_max);

    // truncation monotonicity on an automatic 2-level ladder
    {
        std::vector<StateId> level1 = ab.a;
        level1.insert(level1.end(), ab.b.begin(), ab.b.end());
        std::vector<StateId> interior;
        for (StateId x = 0; x < net.size(); ++x)
            if (!in_set(ab.a, x) && !in_set(ab.b, x)) interior.push_back(x);
        for (std::size_t i = 0; i < (interior.size() + 1) / 2; ++i)
            level1.push_back(interior[i]);
        std::sort(level1.begin(), level1.end());
        std::vector<StateId> level2(net.size());
        for (StateId x = 0; x < net.size(); ++x) level2[x] = x;
        TruncationLadder ladder{{level1, level2}};
        auto sweep = truncation_sweep(net, ladder, ab, tol);
        double resid = std::max(sweep[0].cap - sweep[1].cap,
                                std::abs(sweep[1].cap - cap.value));
        rep.kv("truncation-cap1", sweep[0].cap);
        rep.kv("truncation-cap2", sweep[1].cap);
        rep.check("truncation-monotone", resid <= tol, resid);
    }

    // Monte Carlo hitting probabilities against the solver
    {
        double worst_z = 0.0;
        bool ok = true;
        for (StateId x = 0; x < net.size(); ++x) {
            if (net.inert(x) || in_set(ab.a, x) || in_set(ab.b, x)) continue;
            std::uint64_t state_seed = Rng::stream(opts.seed, 3000 + static_cast<std::uint64_t>(x))
                                           .next_u64();
            HittingEstimate est = estimate_hitting_prob(net, x, ab, opts.samples, state_seed, 0.0,
                                                        opts.workers);
            double diff = std::abs(est.value - h[x]);
            if (est.std_error > 0.0) {
                worst_z = std::max(worst_z, diff / est.std_error);
                ok = ok && diff <= 4.0 * est.std_error;
            } else {
                ok = ok && diff == 0.0;
            }
        }
        rep.check("mc-hitting", ok, worst_z);
    }
    return rep;
}

namespace {

int cmd_solve(const CommonArgs& c, bool charges_only) {
    LoadedNet ln = load_net(c);
    Report rep;
    rep.kv("command", charges_only ? std::string("charges") : std::string("solve"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("tol", c.tol);
    Potential h = solve_harmonic(ln.net, ln.ab, c.tol);
    CapacityReport cap = capacity(ln.net, ln.ab, c.tol);
    ChargePair q = equilibrium_charges(ln.net, h, ln.ab);
    rep.kv("cap", cap.value);
    rep.kv("solver-residual", cap.residual_or_stderr);
    rep.kv("qa", q.qa);
    rep.kv("qb", q.qb);
    if (!charges_only)
        for (StateId x = 0; x < ln.net.size(); ++x)
            rep.kv("h " + ln.net.name(x), h[x]);
    return finish(rep, c, true);
}

int cmd_iterate(const CommonArgs& c, int max_steps) {
    LoadedNet ln = load_net(c);
    Report rep;
    rep.kv("command", std::string("iterate"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("tol", c.tol);
    Potential gab = iterate_minimal_solution(ln.net, ln.ab, c.tol, max_steps);
    PartitionPair ba{ln.ab.b, ln.ab.a};
    Potential gba = iterate_minimal_solution(ln.net, ba, c.tol, max_steps);
    for (StateId x = 0; x < ln.net.size(); ++x) rep.kv("gab " + ln.net.name(x), gab[x]);
    for (StateId x = 0; x < ln.net.size(); ++x) rep.kv("gba " + ln.net.name(x), gba[x]);
    if (has_killing(ln.net)) {
        Potential esc = iterate_escape_mass(ln.net, ln.ab, c.tol, max_steps);
        for (StateId x = 0; x < ln.net.size(); ++x) rep.kv("escape " + ln.net.name(x), esc[x]);
    }
    return finish(rep, c, true);
}

int cmd_flow_check(const CommonArgs& c, const std::string& flow_path, bool require_loop_free) {
    LoadedNet ln = load_net(c);
    std::string ftext = read_file(flow_path);
    UnitFlow f = load_unit_flow(ftext, ln.net);
    Report rep;
    rep.kv("command", std::string("flow-check"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("flow-hash", hex16(fnv1a64(ftext)));
    rep.kv("tol", c.tol);
    auto val = validate_unit_flow(ln.net, f, ln.ab, c.tol, require_loop_free);
    report_violations(rep, "flow-", val);
    rep.check("flow-valid", val.ok(), static_cast<double>(val.violations.size()));
    rep.kv("flow-mass", f.total_mass());
    rep.kv("loop-free", std::string(is_loop_free(f) ? "yes" : "no"));
    return finish(rep, c, val.ok());
}

int cmd_bounds(const CommonArgs& c, const std::string& flow_path, const std::string& paths_path,
               std::size_t path_budget) {
    LoadedNet ln = load_net(c);
    Report rep;
    rep.kv("command", std::string("bounds"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("tol", c.tol);
    CapacityReport cap = capacity(ln.net, ln.ab, c.tol);
    rep.kv("cap", cap.value);
    bool ok = true;
    if (!flow_path.empty()) {
        std::string ftext = read_file(flow_path);
        UnitFlow f = load_unit_flow(ftext, ln.net);
        rep.kv("flow-hash", hex16(fnv1a64(ftext)));
        auto val = validate_unit_flow(ln.net, f, ln.ab, c.tol);
        report_violations(rep, "flow-", val);
        rep.check("flow-valid", val.ok(), static_cast<double>(val.violations.size()));
        if (!val.ok()) {
            write_output(rep, c.out_path);
            return 1;
        }
        CapacityReport th = thomson_bound(ln.net, f);
        rep.kv("thomson", th.value);
        CapacityReport bk;
        try {
            bk = bk_flow_estimate(ln.net, f, ln.ab, BkMode::Exact, c.samples, effective_seed(c),
                                  c.workers, path_budget);
        } catch (const CycleInSupport&) {
            if (c.samples < 2) throw;
            bk = bk_flow_estimate(ln.net, f, ln.ab, BkMode::Mc, c.samples, effective_seed(c),
                                  c.workers, path_budget);
        }
        rep.kv(bound_kind_name(bk.kind), bk.value);
        if (bk.kind == BoundKind::BkMc) rep.kv("bk-stderr", bk.residual_or_stderr);
        double jensen = th.value - bk.value;
        double lower = bk.value - cap.value;
        bool order_ok = jensen <= c.tol && lower <= c.tol;
        rep.check("ordering", order_ok, std::max(jensen, lower));
        ok = ok && order_ok;
    }
    if (!paths_path.empty()) {
        std::string ptext = read_file(paths_path);
        PathMeasure pm = load_path_measure(ptext, ln.net);
        rep.kv("paths-hash", hex16(fnv1a64(ptext)));
        CapacityReport bkp = bk_path_estimate(ln.net, pm, ln.ab);
        rep.kv("bk-path", bkp.value);
        bool le = bkp.value <= cap.value + c.tol;
        rep.check("path-lower-bound", le, bkp.value - cap.value);
        ok = ok && le;
    }
    return finish(rep, c, ok);
}

int cmd_sample(const CommonArgs& c, const std::string& flow_path, int max_len_opt) {
    LoadedNet ln = load_net(c);
    std::string ftext = read_file(flow_path);
    UnitFlow f = load_unit_flow(ftext, ln.net);
    auto val = validate_unit_flow(ln.net, f, ln.ab, c.tol);
    Report rep;
    rep.kv("command", std::string("sample"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("flow-hash", hex16(fnv1a64(ftext)));
    if (!val.ok()) {
        report_violations(rep, "flow-", val);
        rep.check("flow-valid", false, static_cast<double>(val.violations.size()));
        write_output(rep, c.out_path);
        return 1;
    }
    long samples = c.samples > 0 ? c.samples : 1000;
    std::uint64_t seed = effective_seed(c);
    rep.kv("seed", static_cast<long long>(seed));
    rep.kv("samples", static_cast<long long>(samples));
    int max_len = max_len_opt > 0 ? max_len_opt : 100 * std::max(1, ln.net.size());
    FlowChain chain = flow_to_chain(f, ln.ab);

    std::vector<int> lengths(samples);
    std::vector<char> selfavoiding(samples);
    parallel_for(static_cast<std::size_t>(samples), c.workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        StoppedPath p = sample_stopped_path(chain, ln.ab, rng, max_len);
        lengths[i] = p.edge_count();
        auto sorted = p.states;
        std::sort(sorted.begin(), sorted.end());
        selfavoiding[i] =
            std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() ? 1 : 0;
    });
    double mean_len = 0.0, sa = 0.0;
    for (long i = 0; i < samples; ++i) {
        mean_len += lengths[i];
        sa += selfavoiding[i];
    }
    mean_len /= static_cast<double>(samples);
    rep.kv("mean-length", mean_len);
    rep.kv("selfavoiding-fraction", sa / static_cast<double>(samples));
    rep.kv("flow-mass", f.total_mass());
    CapacityReport mc = bk_flow_estimate(ln.net, f, ln.ab, BkMode::Mc, samples, seed, c.workers);
    rep.kv("bk-mc", mc.value);
    rep.kv("bk-stderr", mc.residual_or_stderr);
    return finish(rep, c, true);
}

int cmd_truncate_sweep(const CommonArgs& c, const std::string& ladder_path) {
    LoadedNet ln = load_net(c);
    std::string ltext = read_file(ladder_path);
    TruncationLadder ladder = load_ladder(ltext, ln.net);
    Report rep;
    rep.kv("command", std::string("truncate-sweep"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("ladder-hash", hex16(fnv1a64(ltext)));
    rep.kv("tol", c.tol);
    auto sweep = truncation_sweep(ln.net, ladder, ln.ab, c.tol);
    for (const auto& lc : sweep)
        rep.raw("level " + std::to_string(lc.level) + " cap " + fmt_g12(lc.cap));
    return finish(rep, c, true);
}

int cmd_equiv(const CommonArgs& c, const std::string& paths_path,
              const std::string& emit_network_path) {
    LoadedNet ln = load_net(c);
    std::string ptext = read_file(paths_path);
    PathMeasure pm = load_path_measure(ptext, ln.net);
    Report rep;
    rep.kv("command", std::string("equiv"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("paths-hash", hex16(fnv1a64(ptext)));
    EquivalentNetwork eq = build_equivalent_network(ln.net, pm, ln.ab);
    for (std::size_t i = 0; i < eq.chains.size(); ++i) {
        const auto& chain = eq.chains[i];
        std::string line = "chain " + std::to_string(i) + " p " + fmt_g12(chain.probability) +
                           " cond " + fmt_g12(chain.conductance) + " path";
        for (StateId x : chain.path.states) line += " " + ln.net.name(x);
        rep.raw(line);
    }
    rep.kv("total", eq.total);
    CapacityReport bkp = bk_path_estimate(ln.net, pm, ln.ab);
    rep.kv("bk-path", bkp.value);
    rep.check("equivalent-agrees", std::abs(eq.total - bkp.value) <= 1e-12,
              std::abs(eq.total - bkp.value));
    if (!emit_network_path.empty()) {
        std::ofstream out(emit_network_path, std::ios::binary);
        if (!out) throw InvalidInput("cannot write file '" + emit_network_path + "'");
        out << emit_equivalent_network(eq, ln.net);
        rep.kv("emitted-network", emit_network_path);
    }
    return finish(rep, c, rep.all_pass());
}

int cmd_simulate(const CommonArgs& c, const std::string& x0_name, double t_max, bool chain_only,
                 const std::string& traj_path) {
    LoadedNet ln = load_net(c);
    StateId x0 = ln.net.require_state(x0_name);
    std::uint64_t seed = effective_seed(c);
    Report rep;
    rep.kv("command", std::string("simulate"));
    rep.kv("net-hash", hex16(ln.hash));
    rep.kv("seed", static_cast<long long>(seed));
    rep.kv("x0", x0_name);
    if (t_max <= 0.0) t_max = default_t_max(ln.net);
    if (!traj_path.empty() || c.samples == 0) {
        Rng rng = Rng::stream(seed, 0);
        Trajectory traj = simulate_jump_process(ln.net, x0, ln.ab, rng, t_max, chain_only);
        if (!traj_path.empty()) {
            std::ofstream out(traj_path, std::ios::binary);
            if (!out) throw InvalidInput("cannot write file '" + traj_path + "'");
            out << dump_trajectory(traj, ln.net);
            rep.kv("trajectory", traj_path);
        }
        rep.kv("terminal", std::string(terminal_name(traj.terminal)));
        rep.kv("jumps", static_cast<long long>(traj.events.size() - 1));
        rep.kv("final-time", traj.events.back().time);
    }
    if (c.samples > 0) {
        HittingEstimate est = estimate_hitting_prob(ln.net, x0, ln.ab, c.samples, seed, t_max,
                                                    c.workers, chain_only);
        rep.kv("samples", static_cast<long long>(est.samples));
        rep.kv("censored", static_cast<long long>(est.censored));
        rep.kv("hit-a-fraction", est.value);
        rep.kv("stderr", est.std_error);
    }
    return finish(rep, c, true);
}

int cmd_verify(const CommonArgs& c) {
    LoadedNet ln = load_net(c);
    VerifyOptions opts;
    opts.seed = effective_seed(c);
    opts.samples = c.samples > 0 ? c.samples : 10000;
    opts.tol = c.tol;
    opts.workers = c.workers;
    Report body = verify_suite(ln.net, ln.ab, opts);
    Report rep;
    rep.kv("command", std::string("verify"));
    rep.kv("net-hash", hex16(ln.hash));
    for (const auto& line : body.lines()) rep.raw(line);
    write_output(rep, c.out_path);
    return body.all_pass() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"capnet: capacities of finite reversible networks via the "
                 "Dirichlet, Thomson and Berman-Konsowa principles"};
    app.require_subcommand(1);

    CommonArgs c;
    std::string flow_path, paths_path, ladder_path, x0_name, traj_path, emit_network_path;
    bool require_loop_free = false, chain_only = false;
    int max_steps = 100000, max_len = 0;
    double t_max = 0.0;
    std::size_t path_budget = 1000000;

    auto* solve = app.add_subcommand("solve", "harmonic potential, capacity, charges");
    add_common(solve, c);

    auto* charges = app.add_subcommand("charges", "capacity and equilibrium charges");
    add_common(charges, c);

    auto* iterate = app.add_subcommand("iterate", "minimal-solution iteration (killing allowed)");
    add_common(iterate, c);
    iterate->add_option("--max-steps", max_steps, "iteration cap")->check(CLI::PositiveNumber);

    auto* bounds = app.add_subcommand("bounds", "variational bounds for supplied test objects");
    add_common(bounds, c);
    bounds->add_option("--flow", flow_path, "unit flow file")->check(CLI::ExistingFile);
    bounds->add_option("--paths", paths_path, "path measure file")->check(CLI::ExistingFile);
    bounds->add_option("--path-budget", path_budget, "exact-enumeration path cap");

    auto* flow_check = app.add_subcommand("flow-check", "validate a unit flow file");
    add_common(flow_check, c);
    flow_check->add_option("--flow", flow_path, "unit flow file")
        ->check(CLI::ExistingFile)
        ->required();
    flow_check->add_flag("--require-loop-free", require_loop_free,
                         "also fail on cycles in the support");

    auto* sample = app.add_subcommand("sample", "sample stopped paths from a flow");
    add_common(sample, c);
    sample->add_option("--flow", flow_path, "unit flow file")
        ->check(CLI::ExistingFile)
        ->required();
    sample->add_option("--max-len", max_len, "per-path length cap");

    auto* tsweep = app.add_subcommand("truncate-sweep", "capacities along a truncation ladder");
    add_common(tsweep, c);
    tsweep->add_option("--ladder", ladder_path, "ladder file")
        ->check(CLI::ExistingFile)
        ->required();

    auto* equiv = app.add_subcommand("equiv", "equivalent parallel-chain network");
    add_common(equiv, c);
    equiv->add_option("--paths", paths_path, "path measure file")
        ->check(CLI::ExistingFile)
        ->required();
    equiv->add_option("--emit-network", emit_network_path, "write a loadable network file");

    auto* simulate = app.add_subcommand("simulate", "jump-process simulation");
    add_common(simulate, c);
    simulate->add_option("--x0", x0_name, "start state")->required();
    simulate->add_option("--t-max", t_max, "censoring horizon")->check(CLI::PositiveNumber);
    simulate->add_flag("--chain-only", chain_only, "skip exponential clocks");
    simulate->add_option("--traj", traj_path, "dump the first trajectory here");

    auto* verify = app.add_subcommand("verify", "cross-principle consistency suite");
    add_common(verify, c);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(c, false);
        if (charges->parsed()) return cmd_solve(c, true);
        if (iterate->parsed()) return cmd_iterate(c, max_steps);
        if (bounds->parsed()) return cmd_bounds(c, flow_path, paths_path, path_budget);
        if (flow_check->parsed()) return cmd_flow_check(c, flow_path, require_loop_free);
        if (sample->parsed()) return cmd_sample(c, flow_path, max_len);
        if (tsweep->parsed()) return cmd_truncate_sweep(c, ladder_path);
        if (equiv->parsed()) return cmd_equiv(c, paths_path, emit_network_path);
        if (simulate->parsed()) return cmd_simulate(c, x0_name, t_max, chain_only, traj_path);
        if (verify->parsed()) return cmd_verify(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "usage error: no subcommand\n";
    return 2;
}

}  // namespace capnet::cli
