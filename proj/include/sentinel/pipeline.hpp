#pragma once

#include "sentinel/config.hpp"
#include "sentinel/domains.hpp"
#include "sentinel/error.hpp"
#include "sentinel/lsa.hpp"
#include "sentinel/sentinels.hpp"
#include "sentinel/similarity.hpp"
#include "sentinel/stats.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <vector>

namespace sentinel {

/// A pipeline stage failed. The original error is nested (std::nested_exception).
class StageError : public Error {
public:
    StageError(std::string stage, std::filesystem::path artifact, const std::string& cause);
    const std::string& stage() const { return stage_; }
    const std::filesystem::path& artifact() const { return artifact_; }

private:
    std::string stage_;
    std::filesystem::path artifact_;
};

/// Artifact file names, relative to the output directory.
namespace artifact {
inline constexpr const char* kIngest = "ingest.csv";
inline constexpr const char* kEdges = "edges.txt";
inline constexpr const char* kPartition = "partition.txt";
inline constexpr const char* kModularity = "modularity.csv";
inline constexpr const char* kRoster = "roster.txt";
inline constexpr const char* kCoverage = "coverage.csv";
inline constexpr const char* kDomainMatrix = "domain_matrix.csv";
inline constexpr const char* kLoadings = "loadings.csv";
inline constexpr const char* kScores = "scores.csv";
inline constexpr const char* kTopicCounts = "topic_counts.csv";
inline constexpr const char* kRates = "rates.csv";
inline constexpr const char* kDailyRates = "daily_rates.csv";
inline constexpr const char* kSimilarity = "similarity.csv";
inline constexpr const char* kAdf = "adf.csv";
inline constexpr const char* kLsa = "lsa.json";
inline constexpr const char* kStats = "stats.json";
}  // namespace artifact

struct StageRecord {
    std::string name;
    bool resumed = false;
};

struct PipelineReport {
    std::vector<StageRecord> stages;
    std::size_t recruit_records = 0;
    std::size_t sentinel_records = 0;
    std::size_t skipped_lines = 0;
    SentinelSet sentinels;
    ClusterAssignment clusters;
    std::vector<SimilaritySeries> similarity;
    std::vector<TopicalExtraction> extractions;
    std::vector<DriverConfirmation> drivers;
    std::optional<ChiSquareResult> chi_square;
    std::optional<double> alpha;

    const SimilaritySeries* series(ClusterLabel a, ClusterLabel b) const;
};

struct RunOptions {
    /// Reuse persisted graph, partition, roster and cluster artifacts when present.
    bool resume = true;
};

/// Runs every stage in order and writes the artifacts into config.out_dir.
/// Once a stage is recomputed, every later stage is recomputed too.
PipelineReport run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

/// LSA extraction for both clusters of every flagged (pair, day), followed by
/// driver confirmation. extractions[2i] and [2i + 1] belong to drivers[i].
struct DriverAnalysis {
    std::vector<TopicalExtraction> extractions;
    std::vector<DriverConfirmation> drivers;
};

DriverAnalysis analyze_flagged_days(std::span<const SimilaritySeries> series, const DayDocIndex& docs,
                                   const std::map<ClusterLabel, std::vector<CommunityLabel>>& members,
                                   const LsaParams& params, double match_threshold, const BurstParams& burst);

/// JSON array with one entry per flagged (pair, day).
void write_lsa_report(std::ostream& out, const DriverAnalysis& analysis);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace sentinel
