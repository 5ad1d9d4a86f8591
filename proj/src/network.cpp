#include "capnet/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace capnet {

StateId Network::add_state(std::string name, double mu) {
    if (index_of(name)) throw InvalidInput("duplicate state '" + name + "'");
    names_.push_back(std::move(name));
    mu_.push_back(mu);
    kill_.push_back(0.0);
    inert_.push_back(0);
    adj_.emplace_back();
    return static_cast<StateId>(names_.size()) - 1;
}

std::optional<StateId> Network::index_of(const std::string& name) const {
    for (StateId i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

StateId Network::require_state(const std::string& name) const {
    auto idx = index_of(name);
    if (!idx) throw InvalidInput("unknown state '" + name + "'");
    return *idx;
}

void Network::insert_directed(StateId x, StateId y, double k) {
    auto& row = adj_[x];
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const auto& e, StateId v) { return e.first < v; });
    if (it != row.end() && it->first == y)
        throw InvalidInput("repeated edge " + names_[x] + " " + names_[y]);
    row.insert(it, {y, k});
}

void Network::add_edge(StateId x, StateId y, double k) {
    if (x == y) throw InvalidInput("self-loop forbidden at '" + names_[x] + "'");
    insert_directed(x, y, k);
    insert_directed(y, x, k);
}

void Network::add_half_edge(StateId x, StateId y, double k) {
    if (x == y) throw InvalidInput("self-loop forbidden at '" + names_[x] + "'");
    insert_directed(x, y, k);
}

void Network::set_kill(StateId x, double rate) { kill_[x] = rate; }

void Network::mark_inert(StateId x) { inert_[x] = 1; }

double Network::cond(StateId x, StateId y) const {
    const auto& row = adj_[x];
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const auto& e, StateId v) { return e.first < v; });
    return (it != row.end() && it->first == y) ? it->second : 0.0;
}

double Network::total_cond(StateId x) const {
    double s = 0.0;
    for (const auto& [_, k] : adj_[x]) s += k;
    return s;
}

double Network::lambda(StateId x) const { return (total_cond(x) + mu_[x] * kill_[x]) / mu_[x]; }

std::vector<std::tuple<StateId, StateId, double>> Network::undirected_edges() const {
    std::vector<std::tuple<StateId, StateId, double>> out;
    for (StateId x = 0; x < size(); ++x)
        for (const auto& [y, k] : adj_[x])
            if (x < y && cond(y, x) == k) out.emplace_back(x, y, k);
    return out;
}

bool Network::operator==(const Network& other) const {
    if (names_ != other.names_ || mu_ != other.mu_ || kill_ != other.kill_ ||
        inert_ != other.inert_ || adj_ != other.adj_)
        return false;
    if (embedded_ab_.has_value() != other.embedded_ab_.has_value()) return false;
    if (embedded_ab_ && (embedded_ab_->a != other.embedded_ab_->a ||
                         embedded_ab_->b != other.embedded_ab_->b))
        return false;
    return true;
}

bool in_set(const std::vector<StateId>& sorted_set, StateId x) {
    return std::binary_search(sorted_set.begin(), sorted_set.end(), x);
}

PartitionPair make_partition(const Network& net, const std::vector<std::string>& a_names,
                             const std::vector<std::string>& b_names) {
    PartitionPair ab;
    for (const auto& n : a_names) ab.a.push_back(net.require_state(n));
    for (const auto& n : b_names) ab.b.push_back(net.require_state(n));
    std::sort(ab.a.begin(), ab.a.end());
    std::sort(ab.b.begin(), ab.b.end());
    ab.a.erase(std::unique(ab.a.begin(), ab.a.end()), ab.a.end());
    ab.b.erase(std::unique(ab.b.begin(), ab.b.end()), ab.b.end());
    if (ab.a.empty() || ab.b.empty()) throw InvalidInput("A and B must be nonempty");
    for (StateId x : ab.a)
        if (in_set(ab.b, x)) throw InvalidInput("A and B overlap at '" + net.name(x) + "'");
    return ab;
}

namespace {

double parse_number(const std::string& tok, int line_no) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError("bad number '" + tok + "'", line_no);
    return v;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        // strip trailing comment glued to a token boundary
        auto hash = t.find('#');
        if (hash != std::string::npos) {
            if (hash > 0) toks.push_back(t.substr(0, hash));
            break;
        }
        toks.push_back(t);
    }
    return toks;
}

}  // namespace

Network load_network(std::string_view text) {
    Network net;
    std::vector<std::string> a_names, b_names;
    bool saw_a = false, saw_b = false;
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        try {
            if (kw == "state") {
                if (toks.size() != 2 && toks.size() != 3)
                    throw ParseError("state needs <name> [<mu>]", line_no);
                double mu = toks.size() == 3 ? parse_number(toks[2], line_no) : 1.0;
                if (!(mu > 0.0)) throw ParseError("mu must be > 0", line_no);
                net.add_state(toks[1], mu);
            } else if (kw == "edge" || kw == "rawedge") {
                if (toks.size() != 4) throw ParseError(kw + " needs <from> <to> <K>", line_no);
                double k = parse_number(toks[3], line_no);
                if (k < 0.0) throw ParseError("negative conductance", line_no);
                StateId x = net.require_state(toks[1]);
                StateId y = net.require_state(toks[2]);
                if (kw == "edge")
                    net.add_edge(x, y, k);
                else
                    net.add_half_edge(x, y, k);
            } else if (kw == "kill") {
                if (toks.size() != 3) throw ParseError("kill needs <name> <rate>", line_no);
                double r = parse_number(toks[2], line_no);
                if (r < 0.0) throw ParseError("negative kill rate", line_no);
                net.set_kill(net.require_state(toks[1]), r);
            } else if (kw == "inert") {
                if (toks.size() != 2) throw ParseError("inert needs <name>", line_no);
                net.mark_inert(net.require_state(toks[1]));
            } else if (kw == "set") {
                if (toks.size() < 3 || (toks[1] != "A" && toks[1] != "B"))
                    throw ParseError("set needs A|B and at least one state", line_no);
                auto& dst = toks[1] == "A" ? a_names : b_names;
                bool& seen = toks[1] == "A" ? saw_a : saw_b;
                if (seen) throw ParseError("duplicate set " + toks[1] + " line", line_no);
                seen = true;
                dst.assign(toks.begin() + 2, toks.end());
            } else {
                throw ParseError("unknown directive '" + kw + "'", line_no);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (saw_a != saw_b) throw ParseError("set A and set B must appear together", line_no);
    if (saw_a) net.set_embedded_ab(make_partition(net, a_names, b_names));
    return net;
}

std::string serialize(const Network& net) {
    std::ostringstream out;
    for (StateId x = 0; x < net.size(); ++x)
        out << "state " << net.name(x) << ' ' << fmt_shortest(net.mu(x)) << '\n';
    // symmetric pairs as `edge`, anything else as `rawedge`
    for (StateId x = 0; x < net.size(); ++x) {
        for (const auto& [y, k] : net.neighbors(x)) {
            double back = net.cond(y, x);
            bool has_back = false;
            for (const auto& [z, kb] : net.neighbors(y))
                if (z == x) { has_back = true; (void)kb; }
            if (has_back && back == k) {
                if (x < y)
                    out << "edge " << net.name(x) << ' ' << net.name(y) << ' '
                        << fmt_shortest(k) << '\n';
            } else {
                out << "rawedge " << net.name(x) << ' ' << net.name(y) << ' '
                    << fmt_shortest(k) << '\n';
            }
        }
    }
    for (StateId x = 0; x < net.size(); ++x)
        if (net.kill(x) != 0.0)
            out << "kill " << net.name(x) << ' ' << fmt_shortest(net.kill(x)) << '\n';
    for (StateId x = 0; x < net.size(); ++x)
        if (net.inert(x)) out << "inert " << net.name(x) << '\n';
    if (net.embedded_ab()) {
        out << "set A";
        for (StateId x : net.embedded_ab()->a) out << ' ' << net.name(x);
        out << "\nset B";
        for (StateId x : net.embedded_ab()->b) out << ' ' << net.name(x);
        out << '\n';
    }
    return out.str();
}

std::vector<StateId> reachable_from(const Network& net, const std::vector<StateId>& seed) {
    std::vector<char> seen(net.size(), 0);
    std::vector<StateId> stack = seed;
    for (StateId s : seed) seen[s] = 1;
    while (!stack.empty()) {
        StateId x = stack.back();
        stack.pop_back();
        for (const auto& [y, k] : net.neighbors(x))
            if (k > 0.0 && !seen[y]) {
                seen[y] = 1;
                stack.push_back(y);
            }
    }
    std::vector<StateId> out;
    for (StateId x = 0; x < net.size(); ++x)
        if (seen[x]) out.push_back(x);
    return out;
}

ValidationReport validate(const Network& net, const PartitionPair* ab, double sym_rel_tol) {
    ValidationReport rep;
    for (StateId x = 0; x < net.size(); ++x) {
        if (!(net.mu(x) > 0.0))
            rep.violations.push_back({"mu-positive", net.name(x), net.mu(x)});
        if (net.kill(x) < 0.0)
            rep.violations.push_back({"kill-nonnegative", net.name(x), net.kill(x)});
        for (const auto& [y, k] : net.neighbors(x)) {
            if (k < 0.0)
                rep.violations.push_back({"K-nonnegative", net.name(x) + "-" + net.name(y), k});
            if (y == x)
                rep.violations.push_back({"self-loop", net.name(x), k});
            if (x < y || net.cond(y, x) == 0.0) {
                double back = net.cond(y, x);
                double diff = std::abs(k - back);
                if (diff > sym_rel_tol * std::max(std::abs(k), std::abs(back)))
                    rep.violations.push_back({"K-symmetry", net.name(x) + "-" + net.name(y), diff});
            }
        }
        double lam = net.lambda(x);
        if (lam == 0.0 && !net.inert(x))
            rep.violations.push_back({"zero jump rate", net.name(x), 0.0});
        if (lam > 0.0 && net.inert(x))
            rep.violations.push_back({"inert-with-positive-rate", net.name(x), lam});
    }
    if (ab) {
        auto reach = reachable_from(net, [&] {
            std::vector<StateId> s = ab->a;
            s.insert(s.end(), ab->b.begin(), ab->b.end());
            return s;
        }());
        for (StateId x = 0; x < net.size(); ++x)
            if (!net.inert(x) && !in_set(reach, x))
                rep.violations.push_back({"unreachable from A∪B", net.name(x), 0.0});
    }
    return rep;
}

JumpKernel jump_kernel(const Network& net, StateId x) {
    double lam = net.lambda(x);
    if (!(lam > 0.0)) throw InvalidInput("inert state has no jump kernel: '" + net.name(x) + "'");
    JumpKernel jk;
    double denom = net.mu(x) * lam;
    for (const auto& [y, k] : net.neighbors(x))
        if (k > 0.0) jk.moves.emplace_back(y, k / denom);
    jk.cemetery = net.kill(x) / lam;
    return jk;
}

}  // namespace capnet
