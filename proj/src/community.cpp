#include "sentinel/community.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace sentinel {

Partition::Partition(Assignment assignment) : assignment_(std::move(assignment)) {
    for (const auto& [node, label] : assignment_) communities_[label].push_back(node);
}

Partition::Partition(std::span<const AccountId> nodes, std::span<const CommunityLabel> labels) {
    if (nodes.size() != labels.size()) throw ParameterError("node and label counts differ");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!assignment_.emplace(nodes[i], labels[i]).second)
            throw ParameterError("node assigned twice: " + nodes[i]);
    }
    for (const auto& [node, label] : assignment_) communities_[label].push_back(node);
}

std::optional<CommunityLabel> Partition::label_of(std::string_view node) const {
    const auto it = assignment_.find(node);
    if (it == assignment_.end()) return std::nullopt;
    return it->second;
}

std::size_t Partition::community_size(CommunityLabel label) const {
    const auto it = communities_.find(label);
    return it == communities_.end() ? 0 : it->second.size();
}

std::vector<CommunityLabel> Partition::labels_for(const RetweetGraph& graph) const {
    std::vector<CommunityLabel> labels;
    labels.reserve(graph.node_count());
    for (const auto& id : graph.ids()) {
        const auto label = label_of(id);
        if (!label) throw CoverageError("node " + id + " has no community");
        labels.push_back(*label);
    }
    return labels;
}

Partition Partition::restricted_to(const std::set<AccountId, std::less<>>& nodes) const {
    Assignment kept;
    for (const auto& [node, label] : assignment_)
        if (nodes.contains(node)) kept.emplace(node, label);
    return Partition(std::move(kept));
}

double modularity(const RetweetGraph& graph, std::span<const CommunityLabel> labels) {
    if (labels.size() != graph.node_count()) throw CoverageError("label count does not match node count");
    const double w = static_cast<double>(graph.total_weight());
    if (w <= 0) throw DegenerateError("modularity undefined for a graph without arcs");

    std::unordered_map<CommunityLabel, double> internal, in_sum, out_sum;
    for (const auto& a : graph.arcs())
        if (labels[a.source] == labels[a.retweeter]) internal[labels[a.source]] += static_cast<double>(a.weight);
    for (std::size_t k = 0; k < graph.node_count(); ++k) {
        in_sum[labels[k]] += static_cast<double>(graph.in_degree(k));
        out_sum[labels[k]] += static_cast<double>(graph.out_degree(k));
    }
    double q = 0;
    for (const auto& [label, ins] : in_sum) {
        const auto it = internal.find(label);
        const double inside = it == internal.end() ? 0.0 : it->second;
        q += inside - ins * out_sum[label] / w;
    }
    return q / w;
}

double modularity(const RetweetGraph& graph, const Partition& partition) {
    const auto labels = partition.labels_for(graph);
    return modularity(graph, labels);
}

Mxd modularity_matrix(const RetweetGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    const double w = static_cast<double>(graph.total_weight());
    if (w <= 0) throw DegenerateError("modularity undefined for a graph without arcs");
    Vxd in(n), out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        in(k) = static_cast<double>(graph.in_degree(static_cast<std::size_t>(k)));
        out(k) = static_cast<double>(graph.out_degree(static_cast<std::size_t>(k)));
    }
    Mxd m = -(in * out.transpose()) / w;
    for (const auto& a : graph.arcs())
        m(static_cast<Eigen::Index>(a.source), static_cast<Eigen::Index>(a.retweeter)) += static_cast<double>(a.weight);
    return m;
}

namespace {

struct WeightedArc {
    std::size_t from;
    std::size_t to;
    double weight;
};

// One aggregation level. Self-loops are internal weight of merged communities.
struct Level {
    std::size_t n = 0;
    std::vector<double> in, out;
    std::vector<WeightedArc> arcs;
};

double level_modularity(const Level& level, const std::vector<std::size_t>& comm, double w) {
    std::vector<double> inside(level.n, 0.0), in_sum(level.n, 0.0), out_sum(level.n, 0.0);
    for (const auto& a : level.arcs)
        if (comm[a.from] == comm[a.to]) inside[comm[a.from]] += a.weight;
    for (std::size_t i = 0; i < level.n; ++i) {
        in_sum[comm[i]] += level.in[i];
        out_sum[comm[i]] += level.out[i];
    }
    double q = 0;
    for (std::size_t c = 0; c < level.n; ++c) q += inside[c] - in_sum[c] * out_sum[c] / w;
    return q / w;
}

// Local moving until no node improves. Returns true if any node moved.
bool move_nodes(const Level& level, double w, std::mt19937_64& rng, std::vector<std::size_t>& comm) {
    const std::size_t n = level.n;
    // Symmetric neighbour weights A_ij + A_ji, self-loops excluded: they travel with the node.
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    {
        std::vector<std::unordered_map<std::size_t, double>> acc(n);
        for (const auto& a : level.arcs) {
            if (a.from == a.to) continue;
            acc[a.from][a.to] += a.weight;
            acc[a.to][a.from] += a.weight;
        }
        for (std::size_t i = 0; i < n; ++i) {
            adj[i].assign(acc[i].begin(), acc[i].end());
            std::sort(adj[i].begin(), adj[i].end());
        }
    }

    comm.resize(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> comm_in(level.in), comm_out(level.out);
    std::vector<std::size_t> comm_size(n, 1);
    std::vector<std::size_t> empty_ids;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> link(n, 0.0);
    std::vector<char> touched_flag(n, 0);
    std::vector<std::size_t> touched;

    const double eps = 1e-12 * w;
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        std::shuffle(order.begin(), order.end(), rng);
        for (const std::size_t i : order) {
            const std::size_t home = comm[i];
            comm_in[home] -= level.in[i];
            comm_out[home] -= level.out[i];
            --comm_size[home];

            touched.clear();
            auto touch = [&](std::size_t c) {
                if (!touched_flag[c]) {
                    touched_flag[c] = 1;
                    touched.push_back(c);
                }
            };
            touch(home);
            for (const auto& [j, wij] : adj[i]) {
                touch(comm[j]);
                link[comm[j]] += wij;
            }
            auto gain = [&](std::size_t c) {
                return link[c] - (level.in[i] * comm_out[c] + level.out[i] * comm_in[c]) / w;
            };

            const double home_gain = gain(home);
            std::size_t best = home;
            double best_gain = home_gain;
            for (const std::size_t c : touched) {
                const double g = gain(c);
                if (g > best_gain) {
                    best = c;
                    best_gain = g;
                }
            }
            // Leaving for an empty community has gain 0.
            if (comm_size[home] > 0 && 0.0 > best_gain) {
                best_gain = 0.0;
                best = empty_ids.back();
            }
            if (best != home && best_gain <= home_gain + eps) best = home;

            for (const std::size_t c : touched) {
                link[c] = 0;
                touched_flag[c] = 0;
            }

            if (best != home) {
                moved = true;
                any_move = true;
                if (comm_size[home] == 0) empty_ids.push_back(home);
                if (comm_size[best] == 0) empty_ids.erase(std::find(empty_ids.begin(), empty_ids.end(), best));
            }
            comm[i] = best;
            comm_in[best] += level.in[i];
            comm_out[best] += level.out[i];
            ++comm_size[best];
        }
    }
    return any_move;
}

// Renumbers communities to 0..k-1 in order of first appearance.
std::size_t compact(std::vector<std::size_t>& comm) {
    std::unordered_map<std::size_t, std::size_t> remap;
    for (auto& c : comm) {
        const auto [it, _] = remap.try_emplace(c, remap.size());
        c = it->second;
    }
    return remap.size();
}

Level aggregate(const Level& level, const std::vector<std::size_t>& comm, std::size_t k) {
    Level next;
    next.n = k;
    next.in.assign(k, 0.0);
    next.out.assign(k, 0.0);
    for (std::size_t i = 0; i < level.n; ++i) {
        next.in[comm[i]] += level.in[i];
        next.out[comm[i]] += level.out[i];
    }
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& a : level.arcs) merged[{comm[a.from], comm[a.to]}] += a.weight;
    for (const auto& [key, wt] : merged) next.arcs.push_back({key.first, key.second, wt});
    return next;
}

}  // namespace

LouvainRun louvain_run(const RetweetGraph& graph, std::uint64_t seed) {
    if (graph.empty()) throw EmptyGraphError("louvain on an empty graph");
    const double w = static_cast<double>(graph.total_weight());
    if (w <= 0) throw DegenerateError("louvain needs at least one arc");

    Level level;
    level.n = graph.node_count();
    for (std::size_t k = 0; k < level.n; ++k) {
        level.in.push_back(static_cast<double>(graph.in_degree(k)));
        level.out.push_back(static_cast<double>(graph.out_degree(k)));
    }
    for (const auto& a : graph.arcs()) level.arcs.push_back({a.source, a.retweeter, static_cast<double>(a.weight)});

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> membership(level.n);
    std::iota(membership.begin(), membership.end(), 0);

    LouvainRun run;
    {
        std::vector<std::size_t> singletons(level.n);
        std::iota(singletons.begin(), singletons.end(), 0);
        run.phase_modularity.push_back(level_modularity(level, singletons, w));
    }
    while (true) {
        std::vector<std::size_t> comm;
        if (!move_nodes(level, w, rng, comm)) break;
        const std::size_t k = compact(comm);
        for (auto& m : membership) m = comm[m];
        run.phase_modularity.push_back(level_modularity(level, comm, w));
        if (k == level.n) break;
        level = aggregate(level, comm, k);
    }

    // Relabel by descending size, ties by smallest member id (node indices follow id order).
    std::vector<std::size_t> size, first;
    for (std::size_t v = 0; v < membership.size(); ++v) {
        const auto c = membership[v];
        if (c >= size.size()) {
            size.resize(c + 1, 0);
            first.resize(c + 1, membership.size());
        }
        ++size[c];
        first[c] = std::min(first[c], v);
    }
    std::vector<std::size_t> order(size.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (size[a] != size[b]) return size[a] > size[b];
        return first[a] < first[b];
    });
    std::vector<CommunityLabel> rank(size.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<CommunityLabel>(r);
    std::vector<CommunityLabel> labels(membership.size());
    for (std::size_t v = 0; v < membership.size(); ++v) labels[v] = rank[membership[v]];

    run.partition = Partition(graph.ids(), labels);
    return run;
}

Partition louvain(const RetweetGraph& graph, std::uint64_t seed) { return louvain_run(graph, seed).partition; }

PairCounts pair_counts(const Partition& first, const Partition& second) {
    if (first.node_count() != second.node_count())
        throw DomainError("partitions cover different node sets");
    std::map<std::pair<CommunityLabel, CommunityLabel>, double> joint;
    auto it2 = second.assignment().begin();
    for (const auto& [node, label] : first.assignment()) {
        if (it2->first != node) throw DomainError("partitions cover different node sets");
        ++joint[{label, it2->second}];
        ++it2;
    }
    auto choose2 = [](double x) { return x * (x - 1) / 2; };
    PairCounts pc;
    pc.nodes = static_cast<std::int64_t>(first.node_count());
    pc.pairs = choose2(static_cast<double>(pc.nodes));
    for (const auto& [_, members] : first.communities()) {
        const double s = static_cast<double>(members.size());
        pc.same_first += choose2(s);
        pc.cube_sum_first += s * s * s;
    }
    for (const auto& [_, members] : second.communities()) {
        const double s = static_cast<double>(members.size());
        pc.same_second += choose2(s);
        pc.cube_sum_second += s * s * s;
    }
    for (const auto& [_, c] : joint) pc.same_both += choose2(c);
    return pc;
}

double rand_index(const Partition& first, const Partition& second) {
    const auto pc = pair_counts(first, second);
    if (pc.pairs <= 0) throw UndefinedError("Rand index needs at least two nodes");
    // agreements = pairs together in both + pairs apart in both
    const double apart_both = pc.pairs - pc.same_first - pc.same_second + pc.same_both;
    return (pc.same_both + apart_both) / pc.pairs;
}

double z_rand_variance(const PairCounts& pc) {
    const double n = static_cast<double>(pc.nodes);
    const double m = pc.pairs, m1 = pc.same_first, m2 = pc.same_second;
    const double c1 = n * (n * n - 3 * n - 2) - 8 * (n + 1) * m1 + 4 * pc.cube_sum_first;
    const double c2 = n * (n * n - 3 * n - 2) - 8 * (n + 1) * m2 + 4 * pc.cube_sum_second;
    const double a1 = (4 * m1 - 2 * m) * (4 * m1 - 2 * m);
    const double a2 = (4 * m2 - 2 * m) * (4 * m2 - 2 * m);
    return m / 16 - a1 * a2 / (256 * m * m) + c1 * c2 / (16 * n * (n - 1) * (n - 2)) +
           (a1 - 4 * c1 - 4 * m) * (a2 - 4 * c2 - 4 * m) / (64 * n * (n - 1) * (n - 2) * (n - 3));
}

double z_rand(const Partition& first, const Partition& second) {
    const auto pc = pair_counts(first, second);
    if (pc.nodes < 4) throw UndefinedError("z-Rand needs at least four nodes");
    const double variance = z_rand_variance(pc);
    // Round-off can leave a tiny residue where the exact variance is 0.
    if (!(variance > 1e-9 * pc.pairs)) throw UndefinedError("z-Rand undefined: zero variance (degenerate partitions)");
    const double expected = pc.same_first * pc.same_second / pc.pairs;
    return (pc.same_both - expected) / std::sqrt(variance);
}

std::pair<Partition, Partition> restrict_to_common(const Partition& first, const Partition& second) {
    std::set<AccountId, std::less<>> common;
    for (const auto& [node, _] : first.assignment())
        if (second.label_of(node)) common.insert(node);
    return {first.restricted_to(common), second.restricted_to(common)};
}

void write_partition(std::ostream& out, const Partition& partition) {
    for (const auto& [node, label] : partition.assignment()) out << node << ' ' << label << '\n';
}

Partition read_partition(std::istream& in) {
    Partition::Assignment assignment;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        AccountId node;
        CommunityLabel label{};
        if (!(fields >> node >> label))
            throw ParseError("partition line " + std::to_string(line_no) + ": expected 'node_id community_label'");
        if (!assignment.emplace(std::move(node), label).second)
            throw ParseError("partition line " + std::to_string(line_no) + ": node listed twice");
    }
    return Partition(std::move(assignment));
}

void save_partition(const std::filesystem::path& path, const Partition& partition) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_partition(out, partition);
}

Partition load_partition(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_partition(in);
}

}  // namespace sentinel
