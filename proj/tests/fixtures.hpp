#pragma once

#include "sentinel/pipeline.hpp"
#include "sentinel/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace fixture {

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sentinel_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Pipeline clusters holding the sentinels of the two generated clusters that
/// received the viral message, ordered (smaller, larger). nullopt when the
/// recovered clusters do not separate them.
inline std::optional<std::pair<sentinel::ClusterLabel, sentinel::ClusterLabel>> injected_pair(
    const sentinel::SyntheticSpec& spec, const sentinel::SyntheticCorpus& corpus, const sentinel::PipelineReport& report) {
    std::set<sentinel::ClusterLabel> first, second;
    for (const auto& [account, community] : report.sentinels.roster()) {
        const auto gen_community = corpus.community_of.find(account);
        if (gen_community == corpus.community_of.end()) continue;
        const auto gen_cluster = static_cast<std::size_t>(corpus.cluster_of.at(gen_community->second));
        const auto found = report.clusters.cluster_of.find(community);
        if (found == report.clusters.cluster_of.end()) continue;
        if (gen_cluster == spec.burst_first) first.insert(found->second);
        if (gen_cluster == spec.burst_second) second.insert(found->second);
    }
    if (first.size() != 1 || second.size() != 1 || *first.begin() == *second.begin()) return std::nullopt;
    return std::minmax(*first.begin(), *second.begin());
}

}  // namespace fixture
