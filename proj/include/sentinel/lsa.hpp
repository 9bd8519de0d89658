#pragma once

#include "sentinel/similarity.hpp"
#include "sentinel/types.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentinel {

using SparseMatrixXd = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Tweet x trigram count matrix. Tweets without trigrams are left out;
/// `rows` lists the tweet ids kept, `terms` the sorted trigram vocabulary.
struct DocumentTermMatrix {
    SparseMatrixXd counts;
    std::vector<std::string> rows;
    std::vector<Trigram> terms;
};

DocumentTermMatrix document_term_matrix(std::span<const TweetDoc> tweets);

/// Leading singular values (non-increasing) and the matching left (document)
/// singular vectors as columns.
struct DocumentSvd {
    Vxd singular_values;
    Mxd document_vectors;
};

/// Top `k` singular triplets of the document side, from the eigensystem of
/// the document Gram matrix. Zero singular values are dropped.
DocumentSvd document_svd(const SparseMatrixXd& counts, std::size_t k);

/// Indices of the entries above the sharpest drop in sorted magnitude. Only
/// the `window` largest magnitudes are examined; the drop is the largest ratio
/// between consecutive magnitudes and must be at least `min_ratio`, else
/// nothing is selected. A single nonzero entry is selected on its own.
template <typename Derived>
std::vector<Eigen::Index> select_above_gap(const Eigen::MatrixBase<Derived>& components, std::size_t window,
                                           typename Derived::Scalar min_ratio) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = components.size();
    if (n == 0) return {};
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return std::abs(components(a)) > std::abs(components(b)); });
    const Scalar top = std::abs(components(order[0]));
    if (!(top > Scalar(0))) return {};
    const std::size_t m = std::min<std::size_t>(window, order.size());
    if (m == 1) return {order[0]};

    const Scalar floor = top * Scalar(1e-12);
    std::size_t cut = 0;
    Scalar best = Scalar(0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Scalar hi = std::abs(components(order[i]));
        const Scalar lo = std::abs(components(order[i + 1]));
        const Scalar ratio = lo <= floor ? std::numeric_limits<Scalar>::infinity() : hi / lo;
        if (ratio > best) {
            best = ratio;
            cut = i;
        }
    }
    if (best < min_ratio) return {};
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut + 1)};
}

struct LsaParams {
    std::size_t k = 5;
    std::size_t window = 50;
    double min_gap_ratio = 2.0;
};

struct TopicalExtraction {
    Day day;
    ClusterLabel cluster{};
    std::vector<double> singular_values;
    /// Selected tweet ids per singular vector, sorted.
    std::vector<std::vector<std::string>> per_vector;
    /// Union over the vectors, sorted.
    std::vector<std::string> topical;
};

/// Empty extraction when no tweet has a trigram.
TopicalExtraction lsa_topical_tweets(std::span<const TweetDoc> tweets, const LsaParams& params = {});

/// Every tweet of the given communities on one day, sorted by id.
std::vector<TweetDoc> cluster_tweets(const std::map<CommunityLabel, CommunityDayDoc>& day,
                                     std::span<const CommunityLabel> communities);

double trigram_jaccard(const TrigramCounts& a, const TrigramCounts& b);

struct DriverConfirmation {
    Day day;
    ClusterLabel first{};
    ClusterLabel second{};
    /// Topical tweets matched across the clusters, per side.
    std::vector<std::string> common_first;
    std::vector<std::string> common_second;
    std::optional<double> original_similarity;
    std::optional<double> recomputed_similarity;
    std::optional<double> original_burst;
    std::optional<double> recomputed_burst;
    bool is_driver = false;
};

/// Removes topical tweets common to both clusters (trigram Jaccard at least
/// `match_threshold` against some topical tweet of the other cluster) and
/// recomputes s_t and H with the history unchanged. The removed tweets drive
/// the burst when the recomputed H no longer meets the flag rule; an invalid
/// recomputed similarity counts as not flagged.
DriverConfirmation confirm_drivers(const SimilaritySeries& series, Day day,
                                   const std::map<CommunityLabel, CommunityDayDoc>& day_docs,
                                   const std::map<ClusterLabel, std::vector<CommunityLabel>>& clusters,
                                   const TopicalExtraction& first, const TopicalExtraction& second,
                                   double match_threshold = 0.5, const BurstParams& params = {});

}  // namespace sentinel
