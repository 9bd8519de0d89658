#pragma once

#include "sentinel/adf.hpp"
#include "sentinel/domains.hpp"
#include "sentinel/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sentinel {

struct PipelineConfig {
    std::filesystem::path recruit_corpus;   // tweets used to build the retweet graph
    std::filesystem::path sentinel_corpus;  // tweets collected from the sentinels
    Day window_first{};
    Day window_last{};  // inclusive
    /// Sentinel tweets before this instant characterize the communities.
    Timestamp split{};

    std::size_t k = 15;
    std::size_t top_m = 50;
    std::int64_t min_count = 10;
    std::size_t clusters = 3;
    Linkage linkage = Linkage::Centroid;
    std::optional<std::string> anchor_domain;

    bool language_filter = true;
    double english_threshold = 0.8;

    std::string similarity_topic = "covid";
    double per_accounts = 15;
    double threshold = 2.0;
    bool strict = false;
    std::size_t min_history = 7;

    std::size_t lsa_k = 5;
    std::size_t lsa_window = 50;
    double gap_ratio = 2.0;
    double match_threshold = 0.5;

    Significance adf_level = Significance::FivePercent;
    std::uint64_t seed = 1;

    /// Empty paths select the built-in data.
    std::filesystem::path lexicon_dir;
    std::filesystem::path stopwords;
    std::filesystem::path shorteners;

    /// Optional inputs for the reliability and homogeneity tests.
    std::filesystem::path coding;
    std::filesystem::path contingency;

    std::filesystem::path out_dir = "out";

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Names of every config key, in serialization order.
std::vector<std::string> config_keys();

/// Sets one key from its text form. Throws ParseError on an unknown key or bad value.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const PipelineConfig& config, std::string_view key);

/// Flat "key = value" lines; '#' starts a comment line.
PipelineConfig parse_config(std::istream& in);
void write_config(std::ostream& out, const PipelineConfig& config);

/// Applies SENTINEL_<KEY> variables (key upper-cased) found through `lookup`.
void apply_env_overrides(PipelineConfig& config,
                         const std::function<std::optional<std::string>(const std::string&)>& lookup);
std::optional<std::string> process_env(const std::string& name);

/// Parses a file, resolving relative paths against its directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Throws ParameterError on invalid values; with `check_files`, IoError on
/// missing inputs.
void validate(const PipelineConfig& config, bool check_files = true);

std::filesystem::path builtin_data_dir();

}  // namespace sentinel
