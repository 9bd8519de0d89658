#pragma once

#include "sentinel/graph.hpp"
#include "sentinel/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace sentinel {

/// Node -> community assignment. Every node carries exactly one label.
class Partition {
public:
    using Assignment = std::map<AccountId, CommunityLabel, std::less<>>;
    using Communities = std::map<CommunityLabel, std::vector<AccountId>>;

    Partition() = default;
    explicit Partition(Assignment assignment);
    Partition(std::span<const AccountId> nodes, std::span<const CommunityLabel> labels);

    std::optional<CommunityLabel> label_of(std::string_view node) const;
    const Assignment& assignment() const { return assignment_; }
    /// Members per label, each member list sorted.
    const Communities& communities() const { return communities_; }

    std::size_t node_count() const { return assignment_.size(); }
    std::size_t community_count() const { return communities_.size(); }
    std::size_t community_size(CommunityLabel label) const;

    /// Labels of the graph's nodes in node-index order. Throws CoverageError.
    std::vector<CommunityLabel> labels_for(const RetweetGraph& graph) const;

    Partition restricted_to(const std::set<AccountId, std::less<>>& nodes) const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.assignment_ == b.assignment_; }

private:
    Assignment assignment_;
    Communities communities_;
};

/// Directed weighted modularity
///   Q = (1/w) sum_ij (A_ij - w_i^in w_j^out / w) delta(C_i, C_j).
/// Throws CoverageError when a graph node is unassigned, DegenerateError when w = 0.
double modularity(const RetweetGraph& graph, const Partition& partition);
double modularity(const RetweetGraph& graph, std::span<const CommunityLabel> labels);

/// Dense M_ij = A_ij - w_i^in w_j^out / w, for small graphs and checks.
Mxd modularity_matrix(const RetweetGraph& graph);

struct LouvainRun {
    Partition partition;
    /// Modularity of the singleton start, then after each local-moving phase.
    std::vector<double> phase_modularity;
};

/// Multi-level Louvain on the symmetrized modularity matrix M + M^T.
/// Node sweep order is shuffled from `seed`; a node moves only on a strictly
/// positive gain. Labels are renumbered 0.. by descending community size,
/// ties by smallest member id.
LouvainRun louvain_run(const RetweetGraph& graph, std::uint64_t seed);
Partition louvain(const RetweetGraph& graph, std::uint64_t seed);

/// Co-classification pair counts between two partitions of the same nodes.
struct PairCounts {
    std::int64_t nodes = 0;
    double pairs = 0;        // M = n(n-1)/2
    double same_first = 0;   // M1: pairs together in the first partition
    double same_second = 0;  // M2: pairs together in the second partition
    double same_both = 0;    // w11
    double cube_sum_first = 0;   // sum of cubed community sizes, first partition
    double cube_sum_second = 0;
};

/// Throws DomainError when the node sets differ.
PairCounts pair_counts(const Partition& first, const Partition& second);

/// Fraction of node pairs the two partitions classify consistently.
double rand_index(const Partition& first, const Partition& second);

/// (w11 - M1 M2 / M) / sigma, with sigma from the hypergeometric model of
/// Hubert's pair counting. Throws UndefinedError when sigma is zero.
double z_rand(const Partition& first, const Partition& second);
double z_rand_variance(const PairCounts& counts);

/// Both partitions restricted to the nodes they share.
std::pair<Partition, Partition> restrict_to_common(const Partition& first, const Partition& second);

/// "node_id community_label" per line.
void write_partition(std::ostream& out, const Partition& partition);
Partition read_partition(std::istream& in);
void save_partition(const std::filesystem::path& path, const Partition& partition);
Partition load_partition(const std::filesystem::path& path);

}  // namespace sentinel
