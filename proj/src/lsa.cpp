#include "sentinel/lsa.hpp"

#include "sentinel/error.hpp"

#include <Eigen/Eigenvalues>

#include <set>

namespace sentinel {

DocumentTermMatrix document_term_matrix(std::span<const TweetDoc> tweets) {
    DocumentTermMatrix m;
    std::set<Trigram> vocab;
    for (const auto& t : tweets)
        for (const auto& [g, _] : t.doc.trigram_counts) vocab.insert(g);
    m.terms.assign(vocab.begin(), vocab.end());

    std::vector<Eigen::Triplet<double>> entries;
    Eigen::Index row = 0;
    for (const auto& t : tweets) {
        if (t.doc.trigram_counts.empty()) continue;
        for (const auto& [g, c] : t.doc.trigram_counts) {
            const auto col = std::lower_bound(m.terms.begin(), m.terms.end(), g) - m.terms.begin();
            entries.emplace_back(row, static_cast<Eigen::Index>(col), static_cast<double>(c));
        }
        m.rows.push_back(t.tweet_id);
        ++row;
    }
    m.counts.resize(row, static_cast<Eigen::Index>(m.terms.size()));
    m.counts.setFromTriplets(entries.begin(), entries.end());
    return m;
}

DocumentSvd document_svd(const SparseMatrixXd& counts, std::size_t k) {
    DocumentSvd out;
    if (counts.rows() == 0 || k == 0) {
        out.singular_values.resize(0);
        out.document_vectors.resize(counts.rows(), 0);
        return out;
    }
    const Mxd gram = Mxd(counts * counts.transpose());
    Eigen::SelfAdjointEigenSolver<Mxd> eig(gram);
    if (eig.info() != Eigen::Success) throw Error("eigen decomposition of the document Gram matrix failed");

    const Eigen::Index n = gram.rows();
    const double top = std::max(0.0, eig.eigenvalues()(n - 1));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = n - 1; i >= 0 && keep.size() < k; --i)
        if (eig.eigenvalues()(i) > top * 1e-12 && eig.eigenvalues()(i) > 0) keep.push_back(i);

    out.singular_values.resize(static_cast<Eigen::Index>(keep.size()));
    out.document_vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.singular_values(static_cast<Eigen::Index>(j)) = std::sqrt(eig.eigenvalues()(keep[j]));
        out.document_vectors.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(keep[j]);
    }
    return out;
}

TopicalExtraction lsa_topical_tweets(std::span<const TweetDoc> tweets, const LsaParams& params) {
    if (params.k == 0) throw ParameterError("LSA needs k > 0");
    TopicalExtraction out;
    // Fixed row order keeps the selection independent of input order.
    std::vector<TweetDoc> sorted(tweets.begin(), tweets.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.tweet_id < b.tweet_id; });
    const auto matrix = document_term_matrix(sorted);
    if (matrix.rows.empty()) return out;

    const auto svd = document_svd(matrix.counts, params.k);
    std::set<std::string> all;
    for (Eigen::Index j = 0; j < svd.singular_values.size(); ++j) {
        out.singular_values.push_back(svd.singular_values(j));
        std::vector<std::string> chosen;
        for (const auto idx : select_above_gap(svd.document_vectors.col(j), params.window, params.min_gap_ratio))
            chosen.push_back(matrix.rows[static_cast<std::size_t>(idx)]);
        std::sort(chosen.begin(), chosen.end());
        all.insert(chosen.begin(), chosen.end());
        out.per_vector.push_back(std::move(chosen));
    }
    out.topical.assign(all.begin(), all.end());
    return out;
}

std::vector<TweetDoc> cluster_tweets(const std::map<CommunityLabel, CommunityDayDoc>& day,
                                     std::span<const CommunityLabel> communities) {
    std::vector<TweetDoc> out;
    for (const auto label : communities)
        if (const auto it = day.find(label); it != day.end())
            out.insert(out.end(), it->second.tweets.begin(), it->second.tweets.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.tweet_id < b.tweet_id; });
    return out;
}

double trigram_jaccard(const TrigramCounts& a, const TrigramCounts& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t shared = 0;
    for (const auto& [g, _] : a)
        if (b.contains(g)) ++shared;
    return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

DriverConfirmation confirm_drivers(const SimilaritySeries& series, Day day,
                                   const std::map<CommunityLabel, CommunityDayDoc>& day_docs,
                                   const std::map<ClusterLabel, std::vector<CommunityLabel>>& clusters,
                                   const TopicalExtraction& first, const TopicalExtraction& second,
                                   double match_threshold, const BurstParams& params) {
    const auto t = series.index_of(day);
    if (!t) throw ParameterError("day " + format_day(day) + " is not in the similarity series");

    DriverConfirmation out;
    out.day = day;
    out.first = series.first;
    out.second = series.second;
    out.original_similarity = series.similarity[*t];
    out.original_burst = burst_score(series.similarity, *t, params.min_history, params.eps);

    const auto& members_a = clusters.at(series.first);
    const auto& members_b = clusters.at(series.second);
    std::map<std::string, const TrigramCounts*> bag;
    for (const auto& [_, doc] : day_docs)
        for (const auto& tw : doc.tweets) bag[tw.tweet_id] = &tw.doc.trigram_counts;
    auto bag_of = [&](const std::string& id) -> const TrigramCounts* {
        const auto it = bag.find(id);
        return it == bag.end() ? nullptr : it->second;
    };

    std::set<std::string> common_a, common_b;
    for (const auto& ida : first.topical) {
        const auto* ta = bag_of(ida);
        if (!ta) continue;
        for (const auto& idb : second.topical) {
            const auto* tb = bag_of(idb);
            if (!tb || trigram_jaccard(*ta, *tb) < match_threshold) continue;
            common_a.insert(ida);
            common_b.insert(idb);
        }
    }
    out.common_first.assign(common_a.begin(), common_a.end());
    out.common_second.assign(common_b.begin(), common_b.end());
    if (common_a.empty()) {
        out.recomputed_similarity = out.original_similarity;
        out.recomputed_burst = out.original_burst;
        out.is_driver = false;
        return out;
    }

    auto pruned = day_docs;
    auto strip = [&](std::span<const CommunityLabel> members, const std::set<std::string>& ids) {
        for (const auto label : members)
            if (auto it = pruned.find(label); it != pruned.end())
                it->second.remove_if([&](const TweetDoc& tw) { return ids.contains(tw.tweet_id); });
    };
    strip(members_a, common_a);
    strip(members_b, common_b);

    out.recomputed_similarity = intercluster_similarity(pruned, members_a, members_b);
    out.recomputed_burst = burst_score_for(series.similarity, *t, out.recomputed_similarity, params.min_history, params.eps);
    out.is_driver = !(out.recomputed_burst && exceeds(*out.recomputed_burst, params));
    return out;
}

}  // namespace sentinel
