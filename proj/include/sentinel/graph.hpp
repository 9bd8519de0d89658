#pragma once

#include "sentinel/ingest.hpp"
#include "sentinel/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <tuple>
#include <string>
#include <vector>

namespace sentinel {

/// Arc from a retweeted account (source) to the account that retweeted it.
/// `weight` is A_ij: how often `retweeter` retweeted `source`.
struct Arc {
    std::size_t source;
    std::size_t retweeter;
    std::int64_t weight;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Weighted directed retweet graph. Nodes are stored in ascending id order so
/// that node indices, and everything derived from them, are independent of
/// record order. Immutable once built.
class RetweetGraph {
public:
    RetweetGraph() = default;

    /// Arcs may repeat (weights add); self-loops are dropped; weights must be >= 1.
    RetweetGraph(std::vector<AccountId> nodes, std::vector<std::tuple<AccountId, AccountId, std::int64_t>> arcs);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }
    bool empty() const { return ids_.empty(); }

    const std::vector<AccountId>& ids() const { return ids_; }
    const AccountId& id(std::size_t node) const { return ids_[node]; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    /// Sorted by (source, retweeter).
    std::span<const Arc> arcs() const { return arcs_; }

    /// Times the node was retweeted.
    std::int64_t in_degree(std::size_t node) const { return in_[node]; }
    /// Times the node retweeted others.
    std::int64_t out_degree(std::size_t node) const { return out_[node]; }
    std::int64_t total_weight() const { return total_; }

    /// Induced subgraph on the given node indices.
    RetweetGraph induced(std::span<const std::size_t> nodes) const;

private:
    std::vector<AccountId> ids_;
    std::vector<Arc> arcs_;
    std::vector<std::int64_t> in_;
    std::vector<std::int64_t> out_;
    std::int64_t total_ = 0;
};

/// Arc i -> j for every record where j retweeted i (i != j). Accounts that
/// never retweet and are never retweeted do not appear.
RetweetGraph build_retweet_graph(std::span<const TweetRecord> records);

/// Induced subgraph on the largest weakly connected component. Ties go to
/// the component whose smallest id sorts first. Throws EmptyGraphError.
RetweetGraph largest_component(const RetweetGraph& graph);

/// Weakly connected components as sorted node-index lists, largest first.
std::vector<std::vector<std::size_t>> weak_components(const RetweetGraph& graph);

/// "source retweeter weight" per line.
void write_edge_list(std::ostream& out, const RetweetGraph& graph);
RetweetGraph read_edge_list(std::istream& in);
void save_edge_list(const std::filesystem::path& path, const RetweetGraph& graph);
RetweetGraph load_edge_list(const std::filesystem::path& path);

}  // namespace sentinel
