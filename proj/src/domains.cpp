#include "sentinel/domains.hpp"

#include "sentinel/csv.hpp"

#include <istream>
#include <ostream>
#include <set>

namespace sentinel {

DomainMatrix domain_frequency_matrix(const std::map<CommunityLabel, std::vector<std::string>>& urls_by_community,
                                     std::int64_t min_count, const DomainSet& shorteners) {
    if (min_count < 0) throw ParameterError("min_count must be non-negative");
    DomainMatrix m;
    std::map<CommunityLabel, std::map<std::string, std::int64_t>> counts;
    std::set<std::string> qualifying;
    for (const auto& [label, urls] : urls_by_community) {
        auto& row = counts[label];
        std::int64_t retained = 0;
        for (const auto& url : urls) {
            std::optional<std::string> domain;
            try {
                domain = extract_domain(url, shorteners);
            } catch (const ParseError&) {
                ++m.unparseable_links;
                continue;
            }
            if (!domain) {
                ++m.excluded_links;
                continue;
            }
            ++row[*domain];
            ++retained;
        }
        for (const auto& [domain, c] : row)
            if (c > min_count) qualifying.insert(domain);
        m.communities.push_back(label);
        m.retained_links.push_back(retained);
        if (retained == 0) m.empty_rows.push_back(label);
    }
    m.domains.assign(qualifying.begin(), qualifying.end());
    m.fractions = Mxd::Zero(static_cast<Eigen::Index>(m.communities.size()), static_cast<Eigen::Index>(m.domains.size()));
    for (std::size_t i = 0; i < m.communities.size(); ++i) {
        if (m.retained_links[i] == 0) continue;
        const auto& row = counts[m.communities[i]];
        for (std::size_t j = 0; j < m.domains.size(); ++j) {
            const auto it = row.find(m.domains[j]);
            if (it != row.end())
                m.fractions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    static_cast<double>(it->second) / static_cast<double>(m.retained_links[i]);
        }
    }
    return m;
}

std::map<CommunityLabel, double> LinkedDomainScore::score_map() const {
    std::map<CommunityLabel, double> out;
    for (std::size_t i = 0; i < communities.size(); ++i) out[communities[i]] = scores(static_cast<Eigen::Index>(i));
    return out;
}

LinkedDomainScore first_principal_component(const DomainMatrix& matrix, const std::optional<std::string>& anchor_domain) {
    auto axis = first_principal_axis(matrix.fractions);
    LinkedDomainScore out;
    out.domains = matrix.domains;
    out.communities = matrix.communities;
    out.sign_convention = "largest-loading-positive";
    if (anchor_domain) {
        const auto it = std::find(matrix.domains.begin(), matrix.domains.end(), *anchor_domain);
        if (it == matrix.domains.end()) throw ParameterError("anchor domain not in matrix: " + *anchor_domain);
        if (axis.loadings(it - matrix.domains.begin()) < 0) {
            axis.loadings = -axis.loadings;
            axis.scores = -axis.scores;
        }
        out.sign_convention = "anchor:" + *anchor_domain;
    }
    out.loadings = std::move(axis.loadings);
    out.scores = std::move(axis.scores);
    return out;
}

std::vector<CommunityLabel> ClusterAssignment::members(ClusterLabel cluster) const {
    std::vector<CommunityLabel> out;
    for (const auto& [community, c] : cluster_of)
        if (c == cluster) out.push_back(community);
    return out;
}

ClusterAssignment cluster_scores(const LinkedDomainScore& scores, std::size_t k, Linkage linkage) {
    if (scores.communities.size() < k) throw DegenerateError("fewer communities than clusters");
    std::vector<double> values(scores.scores.data(), scores.scores.data() + scores.scores.size());
    const auto labels = agglomerate_1d<double>(values, k, linkage);

    ClusterAssignment out;
    out.linkage = linkage;
    out.centroids.assign(k, 0.0);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.cluster_of[scores.communities[i]] = labels[i];
        out.centroids[static_cast<std::size_t>(labels[i])] += values[i];
        ++sizes[static_cast<std::size_t>(labels[i])];
    }
    for (std::size_t c = 0; c < k; ++c) out.centroids[c] /= static_cast<double>(sizes[c]);
    return out;
}

void write_domain_matrix(std::ostream& out, const DomainMatrix& matrix) {
    std::vector<std::string> header{"community"};
    header.insert(header.end(), matrix.domains.begin(), matrix.domains.end());
    out << csv::join(header) << '\n';
    for (std::size_t i = 0; i < matrix.communities.size(); ++i) {
        out << matrix.communities[i];
        for (Eigen::Index j = 0; j < matrix.fractions.cols(); ++j)
            out << ',' << csv::number(matrix.fractions(static_cast<Eigen::Index>(i), j));
        out << '\n';
    }
}

DomainMatrix read_domain_matrix(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.empty()) throw ParseError("domain matrix CSV is empty");
    DomainMatrix m;
    m.domains.assign(rows[0].begin() + 1, rows[0].end());
    m.fractions.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(m.domains.size()));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != m.domains.size() + 1) throw ParseError("domain matrix row has wrong width");
        m.communities.push_back(static_cast<CommunityLabel>(csv::to_int(rows[i][0])));
        for (std::size_t j = 0; j < m.domains.size(); ++j)
            m.fractions(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) = csv::to_double(rows[i][j + 1]);
    }
    return m;
}

void write_loadings(std::ostream& out, const LinkedDomainScore& score) {
    out << "domain,loading\n";
    for (std::size_t j = 0; j < score.domains.size(); ++j)
        out << csv::field(score.domains[j]) << ',' << csv::number(score.loadings(static_cast<Eigen::Index>(j))) << '\n';
}

void write_scores(std::ostream& out, const LinkedDomainScore& score, const ClusterAssignment& clusters) {
    out << "community,score,cluster\n";
    for (std::size_t i = 0; i < score.communities.size(); ++i) {
        const auto label = score.communities[i];
        out << label << ',' << csv::number(score.scores(static_cast<Eigen::Index>(i))) << ','
            << clusters.cluster_of.at(label) << '\n';
    }
}

ClusterAssignment read_clusters(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.empty() || rows[0].size() < 3 || rows[0][2] != "cluster") throw ParseError("expected community,score,cluster CSV");
    ClusterAssignment out;
    std::map<ClusterLabel, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 3) throw ParseError("short row in scores CSV");
        const auto community = static_cast<CommunityLabel>(csv::to_int(rows[i][0]));
        const auto cluster = static_cast<ClusterLabel>(csv::to_int(rows[i][2]));
        out.cluster_of[community] = cluster;
        auto& [sum, n] = acc[cluster];
        sum += csv::to_double(rows[i][1]);
        ++n;
    }
    for (const auto& [cluster, sn] : acc) {
        if (cluster != static_cast<ClusterLabel>(out.centroids.size())) throw ParseError("cluster labels must be 0..k-1");
        out.centroids.push_back(sn.first / static_cast<double>(sn.second));
    }
    return out;
}

}  // namespace sentinel
