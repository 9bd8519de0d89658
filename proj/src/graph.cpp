#include "sentinel/graph.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace sentinel {

RetweetGraph::RetweetGraph(std::vector<AccountId> nodes,
                           std::vector<std::tuple<AccountId, AccountId, std::int64_t>> arcs) {
    for (const auto& [s, r, _] : arcs) {
        nodes.push_back(s);
        nodes.push_back(r);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    ids_ = std::move(nodes);
    in_.assign(ids_.size(), 0);
    out_.assign(ids_.size(), 0);

    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> merged;
    for (const auto& [s, r, w] : arcs) {
        if (w < 1) throw ParameterError("arc weight must be a positive integer");
        if (s == r) continue;
        merged[{*index_of(s), *index_of(r)}] += w;
    }
    arcs_.reserve(merged.size());
    for (const auto& [key, w] : merged) {
        arcs_.push_back({key.first, key.second, w});
        in_[key.first] += w;
        out_[key.second] += w;
        total_ += w;
    }
}

std::optional<std::size_t> RetweetGraph::index_of(std::string_view id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

RetweetGraph RetweetGraph::induced(std::span<const std::size_t> nodes) const {
    std::vector<char> keep(ids_.size(), 0);
    std::vector<AccountId> kept_ids;
    for (auto n : nodes) {
        keep[n] = 1;
        kept_ids.push_back(ids_[n]);
    }
    std::vector<std::tuple<AccountId, AccountId, std::int64_t>> kept_arcs;
    for (const auto& a : arcs_)
        if (keep[a.source] && keep[a.retweeter]) kept_arcs.emplace_back(ids_[a.source], ids_[a.retweeter], a.weight);
    return RetweetGraph(std::move(kept_ids), std::move(kept_arcs));
}

RetweetGraph build_retweet_graph(std::span<const TweetRecord> records) {
    std::vector<std::tuple<AccountId, AccountId, std::int64_t>> arcs;
    for (const auto& r : records) {
        if (!r.retweeted_author_id || *r.retweeted_author_id == r.author_id) continue;
        arcs.emplace_back(*r.retweeted_author_id, r.author_id, 1);
    }
    return RetweetGraph({}, std::move(arcs));
}

std::vector<std::vector<std::size_t>> weak_components(const RetweetGraph& graph) {
    const std::size_t n = graph.node_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& a : graph.arcs()) {
        auto ra = find(a.source), rb = find(a.retweeter);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(v);

    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, members] : groups) out.push_back(std::move(members));
    // Members ascend, so front() is the lexicographically smallest id of each component.
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return out;
}

RetweetGraph largest_component(const RetweetGraph& graph) {
    if (graph.empty()) throw EmptyGraphError("retweet graph has no nodes");
    const auto components = weak_components(graph);
    return graph.induced(components.front());
}

void write_edge_list(std::ostream& out, const RetweetGraph& graph) {
    for (const auto& a : graph.arcs())
        out << graph.id(a.source) << ' ' << graph.id(a.retweeter) << ' ' << a.weight << '\n';
}

RetweetGraph read_edge_list(std::istream& in) {
    std::vector<std::tuple<AccountId, AccountId, std::int64_t>> arcs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        AccountId s, r;
        std::int64_t w = 0;
        if (!(fields >> s >> r >> w)) throw ParseError("edge list line " + std::to_string(line_no) + ": expected 'source retweeter weight'");
        arcs.emplace_back(std::move(s), std::move(r), w);
    }
    return RetweetGraph({}, std::move(arcs));
}

void save_edge_list(const std::filesystem::path& path, const RetweetGraph& graph) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_edge_list(out, graph);
}

RetweetGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_edge_list(in);
}

}  // namespace sentinel
