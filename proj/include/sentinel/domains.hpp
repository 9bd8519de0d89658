#pragma once

#include "sentinel/error.hpp"
#include "sentinel/ingest.hpp"
#include "sentinel/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentinel {

/// Community x domain link fractions over qualifying domains.
struct DomainMatrix {
    std::vector<CommunityLabel> communities;  // row order, ascending
    std::vector<std::string> domains;         // column order, ascending
    Mxd fractions;
    /// Links that survived exclusion, per row. The row denominator.
    std::vector<std::int64_t> retained_links;
    /// Rows with no retained links (left as zeros).
    std::vector<CommunityLabel> empty_rows;
    std::int64_t excluded_links = 0;
    std::int64_t unparseable_links = 0;
};

/// Columns are domains linked more than `min_count` times by at least one
/// community. Entry (i, j) is links from i to j over all retained links of i.
DomainMatrix domain_frequency_matrix(const std::map<CommunityLabel, std::vector<std::string>>& urls_by_community,
                                     std::int64_t min_count, const DomainSet& shorteners);

/// Loading vector and per-row projections of the first principal axis.
template <typename Scalar>
struct PrincipalAxis {
    VectorX<Scalar> loadings;
    VectorX<Scalar> scores;
    Scalar singular_value{};
};

/// First principal axis of the column-centred matrix (no scaling). The sign
/// puts the largest-magnitude loading positive (first such column on ties).
/// Throws DegenerateError when every row is identical.
template <typename Derived>
PrincipalAxis<typename Derived::Scalar> first_principal_axis(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    if (x.rows() < 2 || x.cols() < 1) throw DegenerateError("principal axis needs at least 2 rows and 1 column");
    const MatrixX<Scalar> centered = x.rowwise() - x.colwise().mean();
    const Scalar scale = std::max<Scalar>(Scalar(1), x.cwiseAbs().maxCoeff());
    if (centered.cwiseAbs().maxCoeff() <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale)
        throw DegenerateError("zero variance: all rows are identical");

    Eigen::BDCSVD<MatrixX<Scalar>> svd(centered, Eigen::ComputeThinV);
    PrincipalAxis<Scalar> axis;
    axis.loadings = svd.matrixV().col(0);
    axis.singular_value = svd.singularValues()(0);
    Eigen::Index top = 0;
    axis.loadings.cwiseAbs().maxCoeff(&top);
    if (axis.loadings(top) < Scalar(0)) axis.loadings = -axis.loadings;
    axis.scores = centered * axis.loadings;
    return axis;
}

struct LinkedDomainScore {
    std::vector<std::string> domains;
    Vxd loadings;  // unit norm
    std::vector<CommunityLabel> communities;
    Vxd scores;  // zero mean
    std::string sign_convention;

    std::map<CommunityLabel, double> score_map() const;
};

/// PCA score per community. With `anchor_domain` set, the sign is flipped if
/// needed so that domain's loading is non-negative.
LinkedDomainScore first_principal_component(const DomainMatrix& matrix,
                                            const std::optional<std::string>& anchor_domain = std::nullopt);

enum class Linkage { Centroid, Average };

/// Agglomerative clustering of scalar values, cut at `k` clusters. Returns a
/// cluster index per value; clusters are numbered by ascending centroid.
/// Throws DegenerateError when there are fewer than k distinct values.
template <typename Scalar>
std::vector<int> agglomerate_1d(std::span<const Scalar> values, std::size_t k, Linkage linkage = Linkage::Centroid) {
    if (k == 0) throw ParameterError("cluster count must be positive");
    std::vector<Scalar> distinct(values.begin(), values.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < k) throw DegenerateError("fewer distinct scores than requested clusters");

    std::vector<std::vector<std::size_t>> clusters(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) clusters[i] = {i};
    auto mean = [&](const std::vector<std::size_t>& c) {
        Scalar s{};
        for (auto i : c) s += values[i];
        return s / static_cast<Scalar>(c.size());
    };
    auto distance = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        if (linkage == Linkage::Centroid) return std::abs(mean(a) - mean(b));
        Scalar s{};
        for (auto i : a)
            for (auto j : b) s += std::abs(values[i] - values[j]);
        return s / static_cast<Scalar>(a.size() * b.size());
    };
    while (clusters.size() > k) {
        std::size_t best_a = 0, best_b = 1;
        Scalar best = distance(clusters[0], clusters[1]);
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const Scalar d = distance(clusters[a], clusters[b]);
                if (d < best) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(), clusters[best_b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return mean(clusters[a]) < mean(clusters[b]); });
    std::vector<int> label(values.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        for (auto i : clusters[order[rank]]) label[i] = static_cast<int>(rank);
    return label;
}

struct ClusterAssignment {
    std::map<CommunityLabel, ClusterLabel> cluster_of;
    std::vector<double> centroids;  // ascending, indexed by cluster label
    Linkage linkage = Linkage::Centroid;

    std::size_t cluster_count() const { return centroids.size(); }
    std::vector<CommunityLabel> members(ClusterLabel cluster) const;
};

ClusterAssignment cluster_scores(const LinkedDomainScore& scores, std::size_t k = 3,
                                 Linkage linkage = Linkage::Centroid);

/// CSV with a header row of domains; first column is the community label.
void write_domain_matrix(std::ostream& out, const DomainMatrix& matrix);
DomainMatrix read_domain_matrix(std::istream& in);
/// domain,loading
void write_loadings(std::ostream& out, const LinkedDomainScore& score);
/// community,score,cluster
void write_scores(std::ostream& out, const LinkedDomainScore& score, const ClusterAssignment& clusters);
/// Reads community,score,cluster rows back into a cluster assignment.
ClusterAssignment read_clusters(std::istream& in);

}  // namespace sentinel
