#include "sentinel/pipeline.hpp"

#include "sentinel/adf.hpp"
#include "sentinel/community.hpp"
#include "sentinel/csv.hpp"
#include "sentinel/graph.hpp"
#include "sentinel/ingest.hpp"
#include "sentinel/topics.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sentinel {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

StageError::StageError(std::string stage, fs::path artifact, const std::string& cause)
    : Error("stage '" + stage + "' failed (" + artifact.string() + "): " + cause),
      stage_(std::move(stage)),
      artifact_(std::move(artifact)) {}

const SimilaritySeries* PipelineReport::series(ClusterLabel a, ClusterLabel b) const {
    for (const auto& s : similarity)
        if ((s.first == a && s.second == b) || (s.first == b && s.second == a)) return &s;
    return nullptr;
}

void write_file_atomic(const fs::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

class Runner {
public:
    Runner(const PipelineConfig& config, const RunOptions& options, PipelineReport& report)
        : config_(config), options_(options), report_(report) {}

    fs::path path(const char* name) const { return config_.out_dir / name; }

    /// True when the stage may be restored from its artifacts.
    bool resumable(std::initializer_list<const char*> names) const {
        if (!options_.resume || dirty_) return false;
        for (const auto* n : names)
            if (!fs::exists(path(n))) return false;
        return true;
    }

    template <typename Fn>
    void stage(const std::string& name, const char* primary, Fn&& body) {
        bool resumed = false;
        try {
            resumed = body();
        } catch (const std::exception& e) {
            std::throw_with_nested(StageError(name, path(primary), e.what()));
        }
        if (!resumed) dirty_ = true;
        report_.stages.push_back({name, resumed});
    }

    void write(const char* name, const std::string& text) const { write_file_atomic(path(name), text); }

private:
    const PipelineConfig& config_;
    const RunOptions& options_;
    PipelineReport& report_;
    bool dirty_ = false;
};

// FNV-1a over the corpora and the effective config; a change anywhere
// invalidates every stored artifact.
std::string input_fingerprint(const PipelineConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& path : {config.recruit_corpus, config.sentinel_corpus}) {
        std::ifstream in(path, std::ios::binary);
        std::array<char, 1 << 16> buf{};
        while (in.read(buf.data(), buf.size()) || in.gcount() > 0)
            mix(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
        mix("\x1f");
    }
    mix(render([&](std::ostream& out) { write_config(out, config); }));
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

DriverAnalysis analyze_flagged_days(std::span<const SimilaritySeries> series, const DayDocIndex& docs,
                                   const std::map<ClusterLabel, std::vector<CommunityLabel>>& members,
                                   const LsaParams& params, double match_threshold, const BurstParams& burst) {
    static const std::map<CommunityLabel, CommunityDayDoc> kNoDocs;
    DriverAnalysis out;
    for (const auto& s : series)
        for (std::size_t t = 0; t < s.days.size(); ++t) {
            if (t >= s.flagged.size() || !s.flagged[t]) continue;
            const auto it = docs.find(s.days[t]);
            const auto& day = it == docs.end() ? kNoDocs : it->second;
            auto extract = [&](ClusterLabel c) {
                auto e = lsa_topical_tweets(cluster_tweets(day, members.at(c)), params);
                e.day = s.days[t];
                e.cluster = c;
                return e;
            };
            out.extractions.push_back(extract(s.first));
            out.extractions.push_back(extract(s.second));
            const auto& ea = out.extractions[out.extractions.size() - 2];
            const auto& eb = out.extractions.back();
            out.drivers.push_back(confirm_drivers(s, s.days[t], day, members, ea, eb, match_threshold, burst));
        }
    return out;
}

void write_lsa_report(std::ostream& out, const DriverAnalysis& analysis) {
    Json days = Json::array();
    for (std::size_t i = 0; i < analysis.drivers.size(); ++i) {
        const auto& d = analysis.drivers[i];
        Json entry;
        entry["day"] = format_day(d.day);
        entry["pair"] = std::to_string(d.first) + "-" + std::to_string(d.second);
        Json clusters = Json::array();
        for (const auto* e : {&analysis.extractions[2 * i], &analysis.extractions[2 * i + 1]})
            clusters.push_back({{"cluster", e->cluster},
                                {"singular_values", e->singular_values},
                                {"per_vector", e->per_vector},
                                {"topical", e->topical}});
        entry["clusters"] = clusters;
        entry["common"] = {{"first", d.common_first}, {"second", d.common_second}};
        entry["original_similarity"] = optional_number(d.original_similarity);
        entry["recomputed_similarity"] = optional_number(d.recomputed_similarity);
        entry["original_burst"] = optional_number(d.original_burst);
        entry["recomputed_burst"] = optional_number(d.recomputed_burst);
        entry["is_driver"] = d.is_driver;
        days.push_back(std::move(entry));
    }
    out << days.dump(2) << '\n';
}

PipelineReport run_pipeline(const PipelineConfig& config, const RunOptions& options) {
    PipelineReport report;
    Runner run(config, options, report);

    std::vector<TweetRecord> recruit, tweets;
    run.stage("ingest", artifact::kIngest, [&] {
        validate(config);
        fs::create_directories(config.out_dir);
        auto a = parse_tweet_file(config.recruit_corpus);
        auto b = parse_tweet_file(config.sentinel_corpus);
        report.recruit_records = a.records.size();
        report.sentinel_records = b.records.size();
        report.skipped_lines = a.skipped + b.skipped;
        recruit = std::move(a.records);
        tweets = std::move(b.records);
        const std::string text = "corpus,records,skipped\nrecruit," + std::to_string(report.recruit_records) + "," +
                                 std::to_string(a.skipped) + "\nsentinel," + std::to_string(report.sentinel_records) + "," +
                                 std::to_string(b.skipped) + "\nfingerprint," + input_fingerprint(config) + ",\n";
        // Corpora are always parsed; later stages may resume only if the inputs are unchanged.
        const bool unchanged = run.resumable({artifact::kIngest}) && read_text(run.path(artifact::kIngest)) == text;
        if (!unchanged) run.write(artifact::kIngest, text);
        return unchanged;
    });

    RetweetGraph graph;
    run.stage("graph", artifact::kEdges, [&] {
        if (run.resumable({artifact::kEdges})) {
            graph = load_edge_list(run.path(artifact::kEdges));
            return true;
        }
        graph = largest_component(build_retweet_graph(recruit));
        save_edge_list(run.path(artifact::kEdges), graph);
        return false;
    });

    Partition partition;
    run.stage("communities", artifact::kPartition, [&] {
        if (run.resumable({artifact::kPartition, artifact::kModularity})) {
            partition = load_partition(run.path(artifact::kPartition));
            return true;
        }
        const auto result = louvain_run(graph, config.seed);
        partition = result.partition;
        save_partition(run.path(artifact::kPartition), partition);
        std::string text = "phase,modularity\n";
        for (std::size_t i = 0; i < result.phase_modularity.size(); ++i)
            text += std::to_string(i) + "," + csv::number(result.phase_modularity[i]) + "\n";
        text += "final," + csv::number(modularity(graph, partition)) + "\n";
        run.write(artifact::kModularity, text);
        return false;
    });

    run.stage("sentinels", artifact::kRoster, [&] {
        if (run.resumable({artifact::kRoster, artifact::kCoverage})) {
            report.sentinels = load_roster(run.path(artifact::kRoster));
            return true;
        }
        CommunityFilter filter = accept_all;
        std::optional<AsciiLanguageFilter> language;
        if (config.language_filter) {
            language.emplace(recruit, partition, config.seed, config.english_threshold);
            filter = [&](CommunityLabel label) { return (*language)(label); };
        }
        report.sentinels = select_sentinels(graph, partition, config.k, config.top_m, filter);
        if (report.sentinels.communities.empty()) throw EmptyGraphError("no community passed the sentinel filters");
        save_roster(run.path(artifact::kRoster), report.sentinels);
        std::string text = "community,community_size,selected,coverage,english_share\n";
        for (const auto& c : report.sentinels.communities)
            text += std::to_string(c.label) + "," + std::to_string(c.community_size) + "," +
                    std::to_string(c.accounts.size()) + "," + csv::number(c.coverage_fraction) + "," +
                    (language ? csv::number(language->english_share(c.label)) : std::string()) + "\n";
        run.write(artifact::kCoverage, text);
        return false;
    });
    const auto roster = report.sentinels.roster();

    run.stage("characterize", artifact::kScores, [&] {
        if (run.resumable({artifact::kDomainMatrix, artifact::kLoadings, artifact::kScores})) {
            std::ifstream in(run.path(artifact::kScores));
            report.clusters = read_clusters(in);
            return true;
        }
        std::map<CommunityLabel, std::vector<std::string>> urls;
        for (const auto& c : report.sentinels.communities) urls[c.label];
        const Timestamp open{config.window_first.time_since_epoch()};
        for (const auto& r : tweets) {
            const auto it = roster.find(r.author_id);
            if (it == roster.end() || r.created_at < open || r.created_at >= config.split) continue;
            auto& bucket = urls[it->second];
            bucket.insert(bucket.end(), r.urls.begin(), r.urls.end());
        }
        DomainSet shorteners = default_shorteners();
        if (!config.shorteners.empty()) {
            const auto words = read_word_list(config.shorteners);
            shorteners = DomainSet(words.begin(), words.end());
        }
        const auto matrix = domain_frequency_matrix(urls, config.min_count, shorteners);
        const auto score = first_principal_component(matrix, config.anchor_domain);
        report.clusters = cluster_scores(score, config.clusters, config.linkage);
        run.write(artifact::kDomainMatrix, render([&](std::ostream& o) { write_domain_matrix(o, matrix); }));
        run.write(artifact::kLoadings, render([&](std::ostream& o) { write_loadings(o, score); }));
        run.write(artifact::kScores, render([&](std::ostream& o) { write_scores(o, score, report.clusters); }));
        return false;
    });

    std::map<ClusterLabel, std::vector<CommunityLabel>> members;
    for (ClusterLabel k = 0; k < static_cast<ClusterLabel>(report.clusters.cluster_count()); ++k)
        members[k] = report.clusters.members(k);
    const ObservationWindow window{config.window_first, config.window_last};

    LexiconSet lexicons;
    run.stage("topics", artifact::kRates, [&] {
        lexicons = load_lexicon_dir(config.lexicon_dir.empty() ? builtin_data_dir() / "lexicons" : config.lexicon_dir);
        const auto counts = count_topics(tweets, roster, report.clusters.cluster_of, lexicons, window);
        const auto ledger = activity(tweets, roster, report.clusters.cluster_of, window);
        const auto table = rate_table(counts, ledger, config.per_accounts);
        run.write(artifact::kTopicCounts, render([&](std::ostream& o) { write_topic_counts(o, counts); }));
        run.write(artifact::kRates, render([&](std::ostream& o) { write_rates(o, table); }));
        run.write(artifact::kDailyRates, render([&](std::ostream& o) { write_daily_rates(o, table); }));
        return false;
    });

    const BurstParams burst{config.min_history, config.threshold, config.strict};
    DayDocIndex docs;
    run.stage("similarity", artifact::kSimilarity, [&] {
        if (!lexicons.contains(config.similarity_topic))
            throw ParameterError("no lexicon named '" + config.similarity_topic + "'");
        Stopwords stopwords = default_stopwords();
        if (!config.stopwords.empty()) {
            const auto words = read_word_list(config.stopwords);
            stopwords = Stopwords(words.begin(), words.end());
        }
        const auto topic = config.similarity_topic;
        docs = build_day_docs(
            tweets, roster, [&](const TweetRecord& r) { return lexicons.matches(r.text, topic); }, stopwords, window);
        std::ostringstream out;
        write_similarity_header(out);
        for (const auto& [a, _] : members)
            for (const auto& [b, __] : members) {
                if (b <= a) continue;
                auto series = similarity_series(docs, members, a, b, window);
                flag_days(series, burst);
                write_similarity_rows(out, series);
                report.similarity.push_back(std::move(series));
            }
        run.write(artifact::kSimilarity, out.str());
        return false;
    });

    run.stage("adf", artifact::kAdf, [&] {
        std::string text = "pair,nobs,statistic,critical_value,level,stationary,note\n";
        for (const auto& s : report.similarity) {
            std::vector<double> values;
            for (const auto& v : s.similarity)
                if (v) values.push_back(*v);
            text += s.pair_name() + ",";
            try {
                const auto r = adf_test<double>(values, config.adf_level);
                text += std::to_string(r.nobs) + "," + csv::number(r.statistic) + "," + csv::number(r.critical_value) +
                        "," + to_string(r.level) + "," + (r.rejects_unit_root ? "1" : "0") + ",\n";
            } catch (const Error& e) {
                text += std::to_string(values.size() > 0 ? values.size() - 1 : 0) + ",,," + to_string(config.adf_level) +
                        ",," + csv::field(e.what()) + "\n";
            }
        }
        run.write(artifact::kAdf, text);
        return false;
    });

    run.stage("lsa", artifact::kLsa, [&] {
        const LsaParams params{config.lsa_k, config.lsa_window, config.gap_ratio};
        auto analysis = analyze_flagged_days(report.similarity, docs, members, params, config.match_threshold, burst);
        run.write(artifact::kLsa, render([&](std::ostream& o) { write_lsa_report(o, analysis); }));
        report.extractions = std::move(analysis.extractions);
        report.drivers = std::move(analysis.drivers);
        return false;
    });

    run.stage("stats", artifact::kStats, [&] {
        Json out = Json::object();
        if (!config.contingency.empty()) {
            const auto table = load_contingency(config.contingency);
            report.chi_square = chi_square(table);
            out["chi_square"] = {{"statistic", report.chi_square->statistic},
                                 {"df", report.chi_square->df},
                                 {"p_value", report.chi_square->p_value},
                                 {"n", report.chi_square->n}};
        }
        if (!config.coding.empty()) {
            report.alpha = krippendorff_alpha(load_coding_matrix(config.coding));
            out["krippendorff_alpha"] = *report.alpha;
        }
        run.write(artifact::kStats, out.dump(2) + "\n");
        return false;
    });

    return report;
}

}  // namespace sentinel
