#pragma once

#include "sentinel/ingest.hpp"
#include "sentinel/sentinels.hpp"
#include "sentinel/topics.hpp"
#include "sentinel/types.hpp"

#include <cmath>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentinel {

struct TweetDoc {
    std::string tweet_id;
    TokenDoc doc;
};

/// All topical tweets one community sent on one day, as a trigram bag.
struct CommunityDayDoc {
    CommunityLabel community{};
    Day day;
    TrigramCounts trigrams;
    std::vector<TweetDoc> tweets;

    void add(TweetDoc tweet);
    /// Drops matching tweets and rebuilds the trigram bag. Returns how many were removed.
    std::size_t remove_if(const std::function<bool(const TweetDoc&)>& pred);
};

/// day -> community -> document
using DayDocIndex = std::map<Day, std::map<CommunityLabel, CommunityDayDoc>>;

/// Builds documents from roster tweets inside `window` that `is_topical` accepts.
DayDocIndex build_day_docs(std::span<const TweetRecord> records,
                           const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                           const std::function<bool(const TweetRecord&)>& is_topical, const Stopwords& stopwords,
                           const ObservationWindow& window);

/// u.v / (|u||v|). Throws UndefinedError when either bag is empty.
double cosine_similarity(const TrigramCounts& u, const TrigramCounts& v);

/// Mean cosine similarity over cross pairs with two non-empty bags; nullopt
/// when there is no such pair.
std::optional<double> intercluster_similarity(std::span<const TrigramCounts> a, std::span<const TrigramCounts> b);

/// Same, looking the clusters' communities up in one day's documents.
/// Missing communities count as empty documents.
std::optional<double> intercluster_similarity(const std::map<CommunityLabel, CommunityDayDoc>& day,
                                              std::span<const CommunityLabel> a, std::span<const CommunityLabel> b);

/// (value - mean(history)) / sd(history), population SD. nullopt when the SD
/// is at most `eps`.
template <typename Scalar>
std::optional<Scalar> standardized_deviation(Scalar value, std::span<const Scalar> history, Scalar eps) {
    if (history.empty()) return std::nullopt;
    const Eigen::Map<const VectorX<Scalar>> h(history.data(), static_cast<Eigen::Index>(history.size()));
    const Scalar mean = h.mean();
    const Scalar sd = std::sqrt((h.array() - mean).square().mean());
    if (!(sd > eps)) return std::nullopt;
    return (value - mean) / sd;
}

struct BurstParams {
    std::size_t min_history = 7;
    double threshold = 2.0;
    /// Flag on H >= threshold when false, H > threshold when true.
    bool strict = false;
    double eps = 1e-12;
};

/// Per-day similarity between two clusters with burst scores.
struct SimilaritySeries {
    ClusterLabel first{};
    ClusterLabel second{};
    std::vector<Day> days;
    std::vector<std::optional<double>> similarity;
    std::vector<std::optional<double>> burst;
    std::vector<bool> flagged;

    std::string pair_name() const;
    std::optional<std::size_t> index_of(Day d) const;
};

/// H(A,B,t) over the valid days before t. nullopt when s_t is invalid, fewer
/// than `min_history` valid prior days exist, or their SD is at most `eps`.
std::optional<double> burst_score(std::span<const std::optional<double>> similarity, std::size_t t,
                                  std::size_t min_history = 7, double eps = 1e-12);

/// Same, with s_t replaced by `value` (history unchanged).
std::optional<double> burst_score_for(std::span<const std::optional<double>> similarity, std::size_t t,
                                      std::optional<double> value, std::size_t min_history = 7, double eps = 1e-12);

bool exceeds(double h, const BurstParams& params);

/// Fills `burst` and `flagged` and returns the flagged days.
std::vector<Day> flag_days(SimilaritySeries& series, const BurstParams& params = {});

SimilaritySeries similarity_series(const DayDocIndex& docs, const std::map<ClusterLabel, std::vector<CommunityLabel>>& clusters,
                                   ClusterLabel first, ClusterLabel second, const ObservationWindow& window);

/// day,pair,s,valid,H,flagged
void write_similarity_header(std::ostream& out);
void write_similarity_rows(std::ostream& out, const SimilaritySeries& series);
/// Reads the series CSV back, one series per pair, in file order.
std::vector<SimilaritySeries> read_similarity(std::istream& in);

}  // namespace sentinel
