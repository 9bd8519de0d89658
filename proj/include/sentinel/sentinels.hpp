#pragma once

#include "sentinel/community.hpp"
#include "sentinel/graph.hpp"
#include "sentinel/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace sentinel {

struct SentinelAccount {
    AccountId account_id;
    std::int64_t in_degree = 0;

    friend bool operator==(const SentinelAccount&, const SentinelAccount&) = default;
};

struct SentinelCommunity {
    CommunityLabel label{};
    std::size_t community_size = 0;
    /// Descending in-degree, ties by ascending id. At most k entries.
    std::vector<SentinelAccount> accounts;
    /// Selected in-degree over the community's total in-degree.
    double coverage_fraction = 0;
};

struct SentinelSet {
    std::size_t k = 15;
    std::vector<SentinelCommunity> communities;

    /// account -> community label for every selected account.
    std::map<AccountId, CommunityLabel, std::less<>> roster() const;
};

/// Decides whether a community is kept (e.g. predominantly English).
using CommunityFilter = std::function<bool(CommunityLabel)>;

inline bool accept_all(CommunityLabel) { return true; }

/// Among the `top_m` largest communities (ties by label), keep those passing
/// `filter` and select each one's `k` most-retweeted members.
SentinelSet select_sentinels(const RetweetGraph& graph, const Partition& partition, std::size_t k = 15,
                             std::size_t top_m = 50, const CommunityFilter& filter = accept_all);

/// Fraction of code points that are ASCII, ignoring whitespace. 1.0 for empty text.
double ascii_ratio(std::string_view text);

/// Stand-in language check: a community passes when at least `threshold` of
/// a seeded sample of up to `sample_size` of its members' tweets have an
/// ASCII ratio of at least `threshold`.
class AsciiLanguageFilter {
public:
    AsciiLanguageFilter(std::span<const TweetRecord> records, const Partition& partition, std::uint64_t seed,
                        double threshold = 0.8, std::size_t sample_size = 100);

    bool operator()(CommunityLabel label) const;
    double english_share(CommunityLabel label) const;

private:
    std::map<CommunityLabel, double> share_;
    double threshold_ = 0.8;
};

struct ObservationWindow {
    Day first;
    Day last;  // inclusive

    std::size_t length() const;
    bool contains(Day d) const { return d >= first && d <= last; }
};

/// Active account bookkeeping. An account is active on day d when it has an
/// observed tweet on or after d.
struct ActivityLedger {
    ObservationWindow window;
    std::map<AccountId, Day, std::less<>> last_seen;
    std::map<AccountId, std::int64_t, std::less<>> active_days;
    /// Daily active sentinel counts, indexed by day offset from window.first.
    std::map<CommunityLabel, std::vector<std::int64_t>> community_daily_active;
    std::map<ClusterLabel, std::vector<std::int64_t>> cluster_daily_active;
    std::map<CommunityLabel, std::int64_t> community_active_days;
    std::map<ClusterLabel, std::int64_t> cluster_active_days;
};

/// `roster` maps sentinel accounts to their community; `clusters` maps
/// communities to clusters and may be empty. Records from accounts outside
/// the roster are ignored. Tweets after the window still mark the whole window
/// active. Throws ParameterError when the window is empty.
ActivityLedger activity(std::span<const TweetRecord> records,
                        const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                        const std::map<CommunityLabel, ClusterLabel>& clusters, ObservationWindow window);

/// "community_label account_id in_degree" per line.
void write_roster(std::ostream& out, const SentinelSet& set);
SentinelSet read_roster(std::istream& in);
void save_roster(const std::filesystem::path& path, const SentinelSet& set);
SentinelSet load_roster(const std::filesystem::path& path);

}  // namespace sentinel
