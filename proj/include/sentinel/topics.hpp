#pragma once

#include "sentinel/ingest.hpp"
#include "sentinel/sentinels.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentinel {

struct TopicLexicon {
    std::string name;
    std::vector<std::string> substrings;  // lowercase
    std::optional<std::string> parent;

    /// Case-insensitive substring search on the raw text.
    bool matches(std::string_view text) const;
};

std::vector<TweetRecord> filter_topic(std::span<const TweetRecord> records, const TopicLexicon& lexicon);

/// Lexicon file: one substring per line, '#' comments. A line
/// "# parent: <name>" makes the lexicon a subtopic of <name>.
TopicLexicon read_lexicon(std::istream& in, std::string name);
TopicLexicon load_lexicon(const std::filesystem::path& path);

/// Named lexicons with acyclic parent links.
class LexiconSet {
public:
    void add(TopicLexicon lexicon);
    /// Throws ParameterError on a missing parent or a cycle.
    void validate() const;

    bool contains(std::string_view name) const { return lexicons_.contains(std::string(name)); }
    const TopicLexicon& get(std::string_view name) const;
    std::vector<std::string> names() const;
    /// Ancestors first, `name` last.
    std::vector<std::string> chain(std::string_view name) const;

    /// Records matching `name` and each of its ancestors.
    std::vector<TweetRecord> select(std::span<const TweetRecord> records, std::string_view name) const;
    bool matches(std::string_view text, std::string_view name) const;

private:
    std::map<std::string, TopicLexicon> lexicons_;
};

/// Every *.txt file in `dir`, named by file stem.
LexiconSet load_lexicon_dir(const std::filesystem::path& dir);

struct TopicCounts {
    /// topic -> community -> tweets
    std::map<std::string, std::map<CommunityLabel, std::int64_t>> by_community;
    /// topic -> cluster -> tweets per window day
    std::map<std::string, std::map<ClusterLabel, std::vector<std::int64_t>>> daily_by_cluster;
};

/// Counts sentinel tweets in the window per topic (ancestor chain applied).
TopicCounts count_topics(std::span<const TweetRecord> records, const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                         const std::map<CommunityLabel, ClusterLabel>& clusters, const LexiconSet& lexicons,
                         const ObservationWindow& window);

struct TopicRate {
    std::string topic;
    CommunityLabel community{};
    std::int64_t count = 0;
    std::int64_t active_account_days = 0;
    double per_capita = 0;
    std::optional<double> sum_scaled;  // r_i / sum_j r_j
    std::optional<double> max_scaled;  // r_i / max_j r_j
};

struct DailyRate {
    std::string topic;
    ClusterLabel cluster{};
    Day day;
    std::int64_t count = 0;
    std::int64_t active_accounts = 0;
    std::optional<double> rate;  // count * per_accounts / active_accounts
};

struct RateTable {
    std::vector<TopicRate> rows;
    std::vector<DailyRate> daily;
    /// Communities dropped for having zero active account days.
    std::vector<CommunityLabel> excluded;
    double per_accounts = 15;
};

RateTable rate_table(const TopicCounts& counts, const ActivityLedger& ledger, double per_accounts = 15);

/// topic,community,count,active_account_days,per_capita,sum_scaled,max_scaled
void write_rates(std::ostream& out, const RateTable& table);
/// topic,cluster,day,count,active_accounts,rate
void write_daily_rates(std::ostream& out, const RateTable& table);
/// topic,community,count
void write_topic_counts(std::ostream& out, const TopicCounts& counts);

}  // namespace sentinel
