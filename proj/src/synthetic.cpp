#include "sentinel/synthetic.hpp"

#include "sentinel/error.hpp"

#include <fstream>
#include <random>
#include <set>

namespace sentinel {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::string account(std::size_t community, std::size_t member) {
    return "a" + std::to_string(community) + "_" + (member < 10 ? "0" : "") + std::to_string(member);
}

// Cluster-specific pseudo-words, e.g. "kalo3" for cluster 0.
std::vector<std::string> vocabulary(std::size_t cluster, std::size_t size) {
    static const char* const kSyllables[] = {"ka", "lo", "mi", "ru", "ten", "vo", "sa", "ni", "pe", "dor", "qui", "zan"};
    std::vector<std::string> words;
    for (std::size_t i = 0; i < size; ++i)
        words.push_back(std::string(kSyllables[(i + cluster * 5) % 12]) + kSyllables[(i / 12 + cluster * 7) % 12] +
                        std::to_string(cluster) + "x" + std::to_string(i));
    return words;
}

// Phrases shared by every cluster except the first.
const std::vector<std::string>& shared_phrases() {
    static const std::vector<std::string> phrases = {
        "cases rising again across county hospitals",
        "governor announces new reopening plan",
        "school board debates fall classes",
        "testing lines stretch around block",
        "officials report record daily numbers",
        "restaurants struggle under capacity limits",
        "health department updates guidance tonight",
        "nursing homes restrict family visits",
        "state extends emergency order again",
        "local clinic offers free testing",
        "travel quarantine rules change weekend",
        "churches sue over gathering limits",
    };
    return phrases;
}

const std::vector<std::string>& first_cluster_phrases() {
    static const std::vector<std::string> phrases = {
        "scientists urge patience public health",
        "frontline workers deserve hazard pay",
        "federal response called inadequate",
        "experts warn second wave",
    };
    return phrases;
}

const std::vector<std::string>& topic_terms() {
    static const std::vector<std::string> terms = {"mask", "vaccine", "hcq", "plandemic", "death rate", "mild"};
    return terms;
}

TweetRecord record(std::string id, AccountId author, Day day, int minute, std::string text) {
    TweetRecord r;
    r.tweet_id = std::move(id);
    r.author_id = std::move(author);
    r.created_at = Timestamp{day.time_since_epoch()} + std::chrono::minutes(minute);
    r.text = std::move(text);
    return r;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.clusters < 2 || spec.communities_per_cluster == 0 || spec.sentinels_per_community == 0)
        throw ParameterError("synthetic corpus needs at least 2 clusters and nonempty communities");
    if (spec.burst_day >= spec.days || spec.split_day == 0 || spec.split_day >= spec.days)
        throw ParameterError("synthetic burst and split days must fall inside the window");
    if (spec.burst_first >= spec.clusters || spec.burst_second >= spec.clusters || spec.burst_first == spec.burst_second)
        throw ParameterError("synthetic burst clusters are invalid");

    Rng rng(spec.seed);
    SyntheticCorpus corpus;
    const std::size_t communities = spec.clusters * spec.communities_per_cluster;
    const std::size_t hubs = spec.sentinels_per_community;
    corpus.window = {spec.first_day, spec.first_day + std::chrono::days(spec.days - 1)};
    corpus.split = Timestamp{(spec.first_day + std::chrono::days(spec.split_day)).time_since_epoch()};
    corpus.burst_day = spec.first_day + std::chrono::days(spec.burst_day);

    std::vector<std::vector<AccountId>> members(communities);
    for (std::size_t c = 0; c < communities; ++c) {
        corpus.cluster_of[static_cast<int>(c)] = static_cast<int>(c / spec.communities_per_cluster);
        const std::size_t size = hubs + 8 + c;
        for (std::size_t i = 0; i < size; ++i) {
            members[c].push_back(account(c, i));
            corpus.community_of[members[c].back()] = static_cast<int>(c);
        }
        for (std::size_t i = 0; i < hubs; ++i) corpus.sentinels.push_back(members[c][i]);
    }

    // Recruitment corpus: every member retweets each hub, rank 0 most often;
    // light random traffic among the rest and a few cross-community arcs.
    const Day recruit_day = spec.first_day - std::chrono::days(20);
    std::size_t next_id = 0;
    auto retweet = [&](const AccountId& retweeter, const AccountId& source, std::int64_t times) {
        for (std::int64_t t = 0; t < times; ++t) {
            auto r = record("r" + std::to_string(next_id++), retweeter, recruit_day + std::chrono::days(pick(rng, 14)),
                            static_cast<int>(pick(rng, 1440)), "RT @" + source + ": sharing this update with everyone");
            r.retweeted_author_id = source;
            corpus.recruit.push_back(std::move(r));
        }
    };
    for (std::size_t c = 0; c < communities; ++c) {
        const auto& m = members[c];
        for (std::size_t j = 0; j < m.size(); ++j) {
            for (std::size_t h = 0; h < hubs; ++h)
                if (h != j) retweet(m[j], m[h], static_cast<std::int64_t>(hubs - h + 2));
            for (int extra = 0; extra < 2; ++extra) {
                const std::size_t target = hubs + pick(rng, m.size() - hubs);
                if (target != j) retweet(m[j], m[target], 1);
            }
        }
        const std::size_t cluster = c / spec.communities_per_cluster;
        const std::size_t sibling = cluster * spec.communities_per_cluster + (c + 1) % spec.communities_per_cluster;
        const std::size_t stranger = (c + spec.communities_per_cluster) % communities;
        for (const std::size_t other : {sibling, sibling, stranger})
            if (other != c) retweet(members[other][hubs + pick(rng, members[other].size() - hubs)], m[hubs], 1);
    }

    // Domain pools along one axis: left, neutral, right.
    const std::vector<std::vector<std::string>> pools = {
        {"www.leftdaily.com", "progressnews.org"}, {"citywire.net", "www.dailyledger.com"}, {"rightreport.com", "patriotpost.net"}};
    std::vector<std::vector<std::string>> words(spec.clusters);
    for (std::size_t k = 0; k < spec.clusters; ++k) words[k] = vocabulary(k, 120);

    std::size_t sentinel_id = 0;
    auto post = [&](const AccountId& author, Day day, std::string text) -> TweetRecord& {
        corpus.sentinel.push_back(record("s" + std::to_string(sentinel_id++), author, day,
                                         static_cast<int>(pick(rng, 1440)), std::move(text)));
        return corpus.sentinel.back();
    };

    for (std::size_t d = 0; d < spec.days; ++d) {
        const Day day = spec.first_day + std::chrono::days(d);
        for (std::size_t c = 0; c < communities; ++c) {
            const std::size_t cluster = c / spec.communities_per_cluster;
            const double x = 2.0 * static_cast<double>(cluster) / static_cast<double>(spec.clusters - 1) - 1.0 +
                             0.04 * (static_cast<double>(c % spec.communities_per_cluster) - 1.0);
            const auto& vocab = words[cluster];
            for (std::size_t h = 0; h < hubs; ++h) {
                const auto& author = members[c][h];
                for (std::size_t u = 0; u < spec.url_tweets_per_day; ++u) {
                    const double left = std::max(0.0, (1.0 - x) / 2.0);
                    const double right = std::max(0.0, (1.0 + x) / 2.0);
                    const double roll = uniform(rng) * (left + right + 0.5);
                    const auto& pool = roll < left ? pools[0] : roll < left + right ? pools[2] : pools[1];
                    const std::string url = "https://" + pool[pick(rng, pool.size())] + "/story/" + std::to_string(pick(rng, 100000));
                    auto& r = post(author, day, "worth a read " + url);
                    r.urls.push_back(url);
                    if (uniform(rng) < 0.1) r.urls.push_back("https://bit.ly/" + std::to_string(pick(rng, 9999)));
                }
                for (std::size_t t = 0; t < spec.covid_tweets_per_day; ++t) {
                    std::string text = "covid " + vocab[pick(rng, vocab.size())];
                    if (uniform(rng) < 0.4) {
                        const auto& terms = topic_terms();
                        const std::size_t bias = cluster + 1 == spec.clusters ? 3 : 0;
                        text += " " + terms[std::min(terms.size() - 1, bias + pick(rng, terms.size() - bias))];
                    }
                    text += " " + vocab[pick(rng, vocab.size())];
                    if (uniform(rng) < 0.5) {
                        const auto& phrases = cluster == 0 ? first_cluster_phrases() : shared_phrases();
                        text += " " + phrases[pick(rng, phrases.size())];
                    }
                    for (int w = 0; w < 3; ++w) text += " " + vocab[pick(rng, vocab.size())];
                    post(author, day, std::move(text));
                }
            }
            // Non-sentinel chatter that the pipeline must ignore.
            post(members[c][hubs], day, "covid chatter from a regular account " + vocab[pick(rng, vocab.size())]);
        }
    }

    // The viral message: identical text, retweeted by every sentinel of the two clusters.
    corpus.viral_text =
        "covid leaked memo shows hospitals paid to inflate death counts share before they delete this "
        "doctors silenced across the country wake up";
    std::size_t viral_id = 0;
    for (std::size_t c = 0; c < communities; ++c) {
        const std::size_t cluster = c / spec.communities_per_cluster;
        if (cluster != spec.burst_first && cluster != spec.burst_second) continue;
        for (std::size_t h = 0; h < hubs; ++h)
            for (std::size_t p = 0; p < spec.viral_posts_per_sentinel; ++p) {
                auto r = record("v" + std::to_string(viral_id++), members[c][h], corpus.burst_day,
                                static_cast<int>(600 + pick(rng, 600)), "RT @viralsource: " + corpus.viral_text);
                r.retweeted_author_id = "viralsource";
                corpus.viral_tweet_ids.push_back(r.tweet_id);
                corpus.sentinel.push_back(std::move(r));
            }
    }
    return corpus;
}

PipelineConfig synthetic_config(const SyntheticSpec& spec, const SyntheticCorpus& corpus) {
    PipelineConfig config;
    config.window_first = corpus.window.first;
    config.window_last = corpus.window.last;
    config.split = corpus.split;
    config.k = spec.sentinels_per_community;
    config.top_m = spec.clusters * spec.communities_per_cluster;
    config.clusters = spec.clusters;
    config.min_count = 10;
    config.seed = spec.seed;
    config.per_accounts = static_cast<double>(spec.sentinels_per_community);
    return config;
}

PipelineConfig write_synthetic(const std::filesystem::path& dir, const SyntheticSpec& spec) {
    const auto corpus = make_synthetic_corpus(spec);
    std::filesystem::create_directories(dir);
    auto write = [&](const std::filesystem::path& path, const std::vector<TweetRecord>& records) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        write_tweet_stream(out, records);
    };
    write(dir / "recruit.jsonl", corpus.recruit);
    write(dir / "sentinels.jsonl", corpus.sentinel);

    auto config = synthetic_config(spec, corpus);
    config.recruit_corpus = "recruit.jsonl";
    config.sentinel_corpus = "sentinels.jsonl";
    config.out_dir = "out";
    std::ofstream out(dir / "pipeline.conf", std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / "pipeline.conf").string());
    write_config(out, config);
    config.recruit_corpus = dir / config.recruit_corpus;
    config.sentinel_corpus = dir / config.sentinel_corpus;
    config.out_dir = dir / config.out_dir;
    return config;
}

}  // namespace sentinel
