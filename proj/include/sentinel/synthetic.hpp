#pragma once

#include "sentinel/config.hpp"
#include "sentinel/ingest.hpp"
#include "sentinel/sentinels.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sentinel {

/// Shape of a generated test corpus: clusters of retweet communities placed
/// along one media axis, a daily stream of COVID tweets, and one identical
/// viral message posted in two clusters on a single day.
struct SyntheticSpec {
    std::uint64_t seed = 7;
    std::size_t clusters = 3;
    std::size_t communities_per_cluster = 3;
    std::size_t sentinels_per_community = 3;
    std::size_t days = 30;
    Day first_day = Day{std::chrono::year{2020} / 7 / 1};
    std::size_t split_day = 14;   // offset of the first analysis day
    std::size_t burst_day = 24;   // offset of the injected day (day 25)
    std::size_t burst_first = 1;  // clusters receiving the viral message
    std::size_t burst_second = 2;
    std::size_t viral_posts_per_sentinel = 2;
    std::size_t covid_tweets_per_day = 3;  // per sentinel
    std::size_t url_tweets_per_day = 2;    // per sentinel
};

struct SyntheticCorpus {
    std::vector<TweetRecord> recruit;
    std::vector<TweetRecord> sentinel;
    ObservationWindow window;
    Timestamp split{};
    Day burst_day;
    /// Ground truth: account -> generated community, community -> cluster.
    std::map<AccountId, int> community_of;
    std::map<int, int> cluster_of;
    /// Intended sentinels (the most retweeted accounts of each community).
    std::vector<AccountId> sentinels;
    std::vector<std::string> viral_tweet_ids;
    std::string viral_text;
};

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec = {});

/// Config matching the corpus; corpus paths and output dir are left for the caller.
PipelineConfig synthetic_config(const SyntheticSpec& spec, const SyntheticCorpus& corpus);

/// Writes recruit.jsonl, sentinels.jsonl and pipeline.conf into `dir`.
PipelineConfig write_synthetic(const std::filesystem::path& dir, const SyntheticSpec& spec = {});

}  // namespace sentinel
