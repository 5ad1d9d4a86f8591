#include "capnet/truncation.hpp"

#include <algorithm>
#include <sstream>

#include "capnet/dirichlet.hpp"

namespace capnet {

Network truncate(const Network& net, const std::vector<StateId>& subset,
                 const PartitionPair& ab) {
    std::vector<char> keep(net.size(), 0);
    for (StateId x : subset) {
        if (x < 0 || x >= net.size()) throw InvalidInput("truncation subset state out of range");
        keep[x] = 1;
    }
    for (StateId a : ab.a)
        if (!keep[a]) throw InvalidInput("truncation subset misses A-state '" + net.name(a) + "'");
    for (StateId b : ab.b)
        if (!keep[b]) throw InvalidInput("truncation subset misses B-state '" + net.name(b) + "'");

    Network out;
    for (StateId x = 0; x < net.size(); ++x) out.add_state(net.name(x), net.mu(x));
    for (const auto& [x, y, k] : net.undirected_edges())
        if (keep[x] && keep[y]) out.add_edge(x, y, k);
    for (StateId x = 0; x < net.size(); ++x) {
        out.set_kill(x, net.kill(x));
        if (net.inert(x) || out.lambda(x) == 0.0) out.mark_inert(x);
    }
    if (net.embedded_ab()) out.set_embedded_ab(*net.embedded_ab());
    return out;
}

bool connects(const Network& net, const PartitionPair& ab) {
    auto reach = reachable_from(net, ab.a);
    for (StateId b : ab.b)
        if (in_set(reach, b)) return true;
    return false;
}

void check_ladder(const TruncationLadder& ladder, const Network& net, const PartitionPair& ab) {
    if (ladder.levels.empty()) throw InvalidInput("empty truncation ladder");
    for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
        const auto& level = ladder.levels[i];
        for (StateId x : level)
            if (x < 0 || x >= net.size()) throw InvalidInput("ladder state out of range");
        for (StateId a : ab.a)
            if (!in_set(level, a))
                throw InvalidInput("ladder level " + std::to_string(i + 1) + " misses an A-state");
        for (StateId b : ab.b)
            if (!in_set(level, b))
                throw InvalidInput("ladder level " + std::to_string(i + 1) + " misses a B-state");
        if (i > 0)
            for (StateId x : ladder.levels[i - 1])
                if (!in_set(level, x))
                    throw InvalidInput("ladder levels are not nested at level " +
                                       std::to_string(i + 1));
    }
}

std::vector<LevelCapacity> truncation_sweep(const Network& net, const TruncationLadder& ladder,
                                            const PartitionPair& ab, double tol) {
    check_ladder(ladder, net, ab);
    std::vector<LevelCapacity> out;
    for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
        Network tnet = truncate(net, ladder.levels[i], ab);
        LevelCapacity lc;
        lc.level = static_cast<int>(i) + 1;
        lc.connected = connects(tnet, ab);
        lc.cap = lc.connected ? capacity(tnet, ab, tol).value : 0.0;
        if (!out.empty() && lc.cap < out.back().cap - tol)
            throw SolverError("truncated capacities are not monotone: level " +
                              std::to_string(lc.level));
        out.push_back(lc);
    }
    return out;
}

TruncationLadder load_ladder(std::string_view text, const Network& net) {
    TruncationLadder ladder;
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        std::istringstream is(line);
        std::string kw;
        if (!(is >> kw) || kw[0] == '#') continue;
        if (kw != "level") throw ParseError("unknown directive '" + kw + "'", line_no);
        std::vector<StateId> level;
        std::string name;
        while (is >> name) {
            if (name[0] == '#') break;
            try {
                level.push_back(net.require_state(name));
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no);
            }
        }
        if (level.empty()) throw ParseError("level needs at least one state", line_no);
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
        ladder.levels.push_back(std::move(level));
    }
    return ladder;
}

}  // namespace capnet
