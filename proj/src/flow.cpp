#include "capnet/flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace capnet {

void UnitFlow::add(StateId from, StateId to, double mass) {
    if (from == to) throw InvalidInput("flow self-edge forbidden");
    if (from < 0 || to < 0 || from >= n || to >= n) throw InvalidInput("flow edge out of range");
    if (!(mass > 0.0)) throw InvalidInput("flow mass must be positive");
    if (edges.count({to, from}))
        throw InvalidInput("flow edge and its reverse both present (" + std::to_string(from) +
                           "," + std::to_string(to) + ")");
    if (!edges.emplace(DirectedEdge{from, to}, mass).second)
        throw InvalidInput("repeated flow edge");
}

void UnitFlow::add_raw(StateId from, StateId to, double mass) {
    edges[{from, to}] = mass;
}

double UnitFlow::at(StateId from, StateId to) const {
    auto it = edges.find({from, to});
    return it == edges.end() ? 0.0 : it->second;
}

double UnitFlow::total_mass() const {
    double s = 0.0;
    for (const auto& [e, v] : edges) s += v;
    return s;
}

std::vector<double> UnitFlow::out_mass() const {
    std::vector<double> nu(n, 0.0);
    for (const auto& [e, v] : edges) nu[e.first] += v;
    return nu;
}

std::vector<double> UnitFlow::in_mass() const {
    std::vector<double> m(n, 0.0);
    for (const auto& [e, v] : edges) m[e.second] += v;
    return m;
}

bool is_loop_free(const UnitFlow& f) {
    // DFS cycle detection on the support digraph
    std::vector<std::vector<StateId>> succ(f.n);
    for (const auto& [e, v] : f.edges)
        if (v > 0.0) succ[e.first].push_back(e.second);
    std::vector<int> color(f.n, 0);  // 0 new, 1 on stack, 2 done
    std::function<bool(StateId)> visit = [&](StateId x) {
        color[x] = 1;
        for (StateId y : succ[x]) {
            if (color[y] == 1) return false;
            if (color[y] == 0 && !visit(y)) return false;
        }
        color[x] = 2;
        return true;
    };
    for (StateId x = 0; x < f.n; ++x)
        if (color[x] == 0 && !visit(x)) return false;
    return true;
}

ValidationReport validate_unit_flow(const Network& net, const UnitFlow& f, const PartitionPair& ab,
                                    double tol, bool require_loop_free) {
    ValidationReport rep;
    auto state_name = [&](StateId x) { return net.name(x); };
    for (const auto& [e, v] : f.edges) {
        auto [x, y] = e;
        std::string where = state_name(x) + "->" + state_name(y);
        if (v < 0.0) rep.violations.push_back({"negative-mass", where, v});
        if (v > 0.0 && f.at(y, x) > 0.0 && x < y)
            rep.violations.push_back({"directedness", where, std::min(v, f.at(y, x))});
        if (v > 0.0 && !(net.cond(x, y) > 0.0))
            rep.violations.push_back({"absolute-continuity", where, v});
        if (v > 0.0 && in_set(ab.a, y))
            rep.violations.push_back({"inflow-into-A", where, v});
        if (v > 0.0 && in_set(ab.b, x))
            rep.violations.push_back({"outflow-from-B", where, v});
    }
    auto nu = f.out_mass();
    auto inm = f.in_mass();
    double out_a = 0.0, in_b = 0.0;
    for (StateId a : ab.a) out_a += nu[a];
    for (StateId b : ab.b) in_b += inm[b];
    if (std::abs(out_a - 1.0) > tol)
        rep.violations.push_back({"unit-outflow-A", "A", std::abs(out_a - 1.0)});
    if (std::abs(in_b - 1.0) > tol)
        rep.violations.push_back({"unit-inflow-B", "B", std::abs(in_b - 1.0)});
    for (StateId x = 0; x < f.n; ++x) {
        if (in_set(ab.a, x) || in_set(ab.b, x)) continue;
        double resid = std::abs(inm[x] - nu[x]);
        if (resid > tol) rep.violations.push_back({"kirchhoff", state_name(x), resid});
    }
    if (require_loop_free && !is_loop_free(f))
        rep.violations.push_back({"loop", "support digraph", 0.0});
    return rep;
}

UnitFlow harmonic_flow(const Network& net, const Potential& h, double cap, double mass_floor) {
    if (!(cap > 0.0)) throw InvalidInput("harmonic flow needs a positive capacity");
    UnitFlow f(net.size());
    for (StateId x = 0; x < net.size(); ++x)
        for (const auto& [y, k] : net.neighbors(x)) {
            double drop = h[x] - h[y];
            double mass = drop * k / cap;
            if (drop > 0.0 && k > 0.0 && mass > mass_floor) f.add(x, y, mass);
        }
    return f;
}

FlowChain flow_to_chain(const UnitFlow& f, const PartitionPair& ab) {
    FlowChain chain;
    chain.n = f.n;
    chain.nu = f.out_mass();
    chain.rows.assign(f.n, {});
    for (const auto& [e, v] : f.edges)
        if (v > 0.0) chain.rows[e.first].emplace_back(e.second, v / chain.nu[e.first]);
    double init_mass = 0.0;
    for (StateId a : ab.a) init_mass += chain.nu[a];
    if (!(init_mass > 0.0)) throw InvalidInput("flow has no outflow from A; chain has no start");
    for (StateId a : ab.a)
        if (chain.nu[a] > 0.0) chain.init.emplace_back(a, chain.nu[a] / init_mass);
    return chain;
}

StoppedPath sample_stopped_path(const FlowChain& chain, const PartitionPair& ab, Rng& rng,
                                int max_len) {
    StoppedPath path;
    StateId x = chain.init[rng.next_categorical(chain.init)].first;
    path.states.push_back(x);
    while (!in_set(ab.b, x)) {
        if (path.edge_count() >= max_len)
            throw PathLengthExceeded("sampled path exceeded max length " +
                                         std::to_string(max_len) + " (defective flow?)",
                                     path);
        const auto& row = chain.rows[x];
        if (row.empty())
            throw PathLengthExceeded("sampled path stuck at '" + std::to_string(x) +
                                         "' with no outgoing mass",
                                     path);
        x = row[rng.next_categorical(row)].first;
        path.states.push_back(x);
    }
    return path;
}

StoppedPath sample_stopped_path(const FlowChain& chain, const PartitionPair& ab,
                                std::uint64_t rng_seed, int max_len) {
    Rng rng(rng_seed);
    return sample_stopped_path(chain, ab, rng, max_len);
}

PathMeasure enumerate_stopped_paths(const FlowChain& chain, const PartitionPair& ab,
                                    std::size_t max_paths) {
    PathMeasure pm;
    std::vector<StateId> stack_path;
    std::vector<char> on_stack(chain.n, 0);

    std::function<void(StateId, double)> walk = [&](StateId x, double prob) {
        stack_path.push_back(x);
        if (in_set(ab.b, x)) {
            if (pm.support.size() >= max_paths)
                throw PathBudgetExceeded("stopped-path enumeration exceeded budget of " +
                                         std::to_string(max_paths));
            pm.support.push_back({StoppedPath{stack_path}, prob});
            stack_path.pop_back();
            return;
        }
        if (on_stack[x])
            throw CycleInSupport("flow support contains a cycle reachable from A; "
                                 "exact enumeration unavailable, use mc mode");
        const auto& row = chain.rows[x];
        if (row.empty())
            throw SolverError("trapped mass: state with inflow but no outgoing row");
        on_stack[x] = 1;
        for (const auto& [y, p] : row) walk(y, prob * p);
        on_stack[x] = 0;
        stack_path.pop_back();
    };
    for (const auto& [a, p0] : chain.init) walk(a, p0);
    return pm;
}

FlowDiscrepancy induced_flow(const UnitFlow& f, const PartitionPair& ab, double tol) {
    FlowChain chain = flow_to_chain(f, ab);

    // Reachable support from the start distribution; visits off it are zero.
    std::vector<char> reach(chain.n, 0);
    {
        std::vector<StateId> stack;
        for (const auto& [a, p] : chain.init)
            if (p > 0.0 && !reach[a]) {
                reach[a] = 1;
                stack.push_back(a);
            }
        while (!stack.empty()) {
            StateId x = stack.back();
            stack.pop_back();
            if (in_set(ab.b, x)) continue;  // chain stops on entering B
            for (const auto& [y, p] : chain.rows[x])
                if (!reach[y]) {
                    reach[y] = 1;
                    stack.push_back(y);
                }
        }
    }

    std::vector<StateId> unknowns;
    std::vector<int> pos(chain.n, -1);
    for (StateId x = 0; x < chain.n; ++x) {
        if (!reach[x] || in_set(ab.b, x)) continue;
        if (chain.rows[x].empty())
            throw SolverError("trapped mass: reachable state '" + std::to_string(x) +
                              "' has no outgoing flow");
        pos[x] = static_cast<int>(unknowns.size());
        unknowns.push_back(x);
    }

    const int m = static_cast<int>(unknowns.size());
    Eigen::VectorXd visits(m);
    if (m > 0) {
        // v(y) = init(y) + sum_x v(x) ell(x,y)  over non-B reachable states
        Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        for (const auto& [a, p] : chain.init)
            if (pos[a] >= 0) rhs(pos[a]) += p;
        for (int i = 0; i < m; ++i)
            for (const auto& [y, p] : chain.rows[unknowns[i]])
                if (pos[y] >= 0) sys(pos[y], i) -= p;
        visits = sys.partialPivLu().solve(rhs);
        double resid = (sys * visits - rhs).lpNorm<Eigen::Infinity>();
        if (!(resid <= 1e-9))
            throw SolverError("singular visit system (mass trapped); residual " + fmt_g12(resid));
    }

    FlowDiscrepancy d;
    for (int i = 0; i < m; ++i) {
        StateId x = unknowns[i];
        for (const auto& [y, p] : chain.rows[x]) d.tilde_phi[{x, y}] = visits(i) * p;
    }
    for (const auto& [e, v] : f.edges) {
        auto it = d.tilde_phi.find(e);
        double tv = it == d.tilde_phi.end() ? 0.0 : it->second;
        d.psi[e] = v - tv;
    }
    for (const auto& [e, tv] : d.tilde_phi)
        if (!f.edges.count(e)) d.psi[e] = -tv;

    std::vector<double> div(chain.n, 0.0);
    for (const auto& [e, v] : d.psi) {
        if (v < -tol)
            throw SolverError("discrepancy is negative beyond tolerance: psi = " + fmt_g12(v));
        div[e.first] += v;
        div[e.second] -= v;
    }
    for (StateId x = 0; x < chain.n; ++x)
        if (std::abs(div[x]) > tol)
            throw SolverError("discrepancy violates Kirchhoff's law at state " +
                              std::to_string(x) + ": " + fmt_g12(div[x]));
    return d;
}

void check_path_membership(const StoppedPath& p, const PartitionPair& ab) {
    if (p.states.size() < 2) throw InvalidInput("path must have at least one edge");
    if (!in_set(ab.a, p.states.front())) throw InvalidInput("path does not start in A");
    if (!in_set(ab.b, p.states.back())) throw InvalidInput("path does not end in B");
    for (std::size_t i = 1; i + 1 < p.states.size(); ++i)
        if (in_set(ab.b, p.states[i])) throw InvalidInput("path enters B before its endpoint");
    for (std::size_t i = 1; i < p.states.size(); ++i)
        if (p.states[i] == p.states[i - 1]) throw InvalidInput("path repeats a state in place");
}

void check_path_measure(const PathMeasure& pm, const PartitionPair& ab, double tol) {
    if (pm.support.empty()) throw InvalidInput("empty path measure");
    double total = 0.0;
    for (const auto& [path, p] : pm.support) {
        if (!(p > 0.0)) throw InvalidInput("path probability must be positive");
        check_path_membership(path, ab);
        total += p;
    }
    if (std::abs(total - 1.0) > tol)
        throw InvalidInput("path probabilities sum to " + fmt_g12(total) + ", not 1");
    for (std::size_t i = 0; i < pm.support.size(); ++i)
        for (std::size_t j = i + 1; j < pm.support.size(); ++j)
            if (pm.support[i].first == pm.support[j].first)
                throw InvalidInput("duplicate path in path measure");
}

EdgeMeasure path_measure_to_flow(const PathMeasure& pm, const PartitionPair& ab) {
    EdgeMeasure phi;
    for (const auto& [path, p] : pm.support) {
        check_path_membership(path, ab);
        for (std::size_t i = 1; i < path.states.size(); ++i)
            phi[{path.states[i - 1], path.states[i]}] += p;
    }
    return phi;
}

UnitFlow load_unit_flow(std::string_view text, const Network& net) {
    UnitFlow f(net.size());
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        std::istringstream is(line);
        std::string kw;
        if (!(is >> kw) || kw[0] == '#') continue;
        if (kw != "flow") throw ParseError("unknown directive '" + kw + "'", line_no);
        std::string from, to, val;
        if (!(is >> from >> to >> val)) throw ParseError("flow needs <from> <to> <value>", line_no);
        try {
            f.add(net.require_state(from), net.require_state(to), std::stod(val));
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + val + "'", line_no);
        }
    }
    return f;
}

std::string serialize_flow(const UnitFlow& f, const Network& net) {
    std::ostringstream out;
    for (const auto& [e, v] : f.edges)
        out << "flow " << net.name(e.first) << ' ' << net.name(e.second) << ' '
            << fmt_shortest(v) << '\n';
    return out.str();
}

PathMeasure load_path_measure(std::string_view text, const Network& net) {
    PathMeasure pm;
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        std::istringstream is(line);
        std::string kw;
        if (!(is >> kw) || kw[0] == '#') continue;
        if (kw != "path") throw ParseError("unknown directive '" + kw + "'", line_no);
        std::string ptok;
        if (!(is >> ptok)) throw ParseError("path needs <p> <s0> ... <sn>", line_no);
        StoppedPath path;
        std::string s;
        while (is >> s) {
            if (s[0] == '#') break;
            try {
                path.states.push_back(net.require_state(s));
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no);
            }
        }
        if (path.states.size() < 2) throw ParseError("path needs at least two states", line_no);
        try {
            pm.support.push_back({std::move(path), std::stod(ptok)});
        } catch (const std::exception&) {
            throw ParseError("bad number '" + ptok + "'", line_no);
        }
    }
    return pm;
}

std::string serialize_path_measure(const PathMeasure& pm, const Network& net) {
    std::ostringstream out;
    for (const auto& [path, p] : pm.support) {
        out << "path " << fmt_shortest(p);
        for (StateId x : path.states) out << ' ' << net.name(x);
        out << '\n';
    }
    return out.str();
}

std::uint64_t flow_hash(const UnitFlow& f) {
    std::string repr;
    for (const auto& [e, v] : f.edges) {
        repr += std::to_string(e.first) + ">" + std::to_string(e.second) + "=";
        repr += fmt_shortest(v) + ";";
    }
    return fnv1a64(repr);
}

}  // namespace capnet
