// Command-line front end: one subcommand per pipeline stage, plus `run` for
// the whole pipeline, `sample` for drawing coding sets and `synth` for the
// synthetic fixture.

#include "sentinel/adf.hpp"
#include "sentinel/community.hpp"
#include "sentinel/config.hpp"
#include "sentinel/csv.hpp"
#include "sentinel/domains.hpp"
#include "sentinel/graph.hpp"
#include "sentinel/ingest.hpp"
#include "sentinel/lsa.hpp"
#include "sentinel/pipeline.hpp"
#include "sentinel/sentinels.hpp"
#include "sentinel/similarity.hpp"
#include "sentinel/stats.hpp"
#include "sentinel/synthetic.hpp"
#include "sentinel/topics.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <set>

using namespace sentinel;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::vector<TweetRecord> load_corpus(const fs::path& path) {
    auto report = parse_tweet_file(path);
    if (report.skipped > 0) std::cerr << path.string() << ": skipped " << report.skipped << " malformed lines\n";
    return std::move(report.records);
}

ClusterAssignment load_clusters(const fs::path& path) {
    auto in = open_in(path);
    return read_clusters(in);
}

std::map<ClusterLabel, std::vector<CommunityLabel>> members_of(const ClusterAssignment& clusters) {
    std::map<ClusterLabel, std::vector<CommunityLabel>> out;
    for (ClusterLabel k = 0; k < static_cast<ClusterLabel>(clusters.cluster_count()); ++k) out[k] = clusters.members(k);
    return out;
}

LexiconSet load_lexicons(const std::string& dir) {
    return load_lexicon_dir(dir.empty() ? builtin_data_dir() / "lexicons" : fs::path(dir));
}

Stopwords load_stopwords(const std::string& path) {
    if (path.empty()) return default_stopwords();
    const auto words = read_word_list(fs::path(path));
    return Stopwords(words.begin(), words.end());
}

DomainSet load_shorteners(const std::string& path) {
    if (path.empty()) return default_shorteners();
    const auto words = read_word_list(fs::path(path));
    return DomainSet(words.begin(), words.end());
}

Linkage parse_linkage(const std::string& text) {
    if (text == "centroid") return Linkage::Centroid;
    if (text == "average") return Linkage::Average;
    throw ParameterError("linkage must be centroid or average");
}

/// Shared window options.
struct WindowArgs {
    std::string first;
    std::string last;
    void add(CLI::App* app) {
        app->add_option("--first", first, "First window day (YYYY-MM-DD)")->required();
        app->add_option("--last", last, "Last window day, inclusive")->required();
    }
    ObservationWindow window() const { return {parse_day(first), parse_day(last)}; }
};

/// Shared burst-flag options.
struct BurstArgs {
    double threshold = 2.0;
    std::size_t min_history = 7;
    bool strict = false;
    void add(CLI::App* app) {
        app->add_option("--threshold", threshold, "Burst score flag threshold");
        app->add_option("--min-history", min_history, "Valid days required before a burst score is defined");
        app->add_flag("--strict", strict, "Flag on H > threshold instead of H >= threshold");
    }
    BurstParams params() const { return {min_history, threshold, strict}; }
};

void print_series_flags(const std::vector<SimilaritySeries>& series) {
    for (const auto& s : series)
        for (std::size_t t = 0; t < s.days.size(); ++t)
            if (s.flagged[t])
                std::cout << "flagged " << s.pair_name() << ' ' << format_day(s.days[t]) << " H=" << csv::number(*s.burst[t])
                          << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sentinel-community monitoring of COVID-19 tweet streams"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a JSONL corpus and write it back normalized");
    std::string ingest_in, ingest_out;
    ingest->add_option("input", ingest_in, "JSONL tweet corpus")->required();
    ingest->add_option("-o,--output", ingest_out, "Normalized JSONL output");
    ingest->callback([&] {
        const auto report = parse_tweet_file(ingest_in);
        std::cout << "records " << report.records.size() << "\nskipped " << report.skipped << '\n';
        if (!ingest_out.empty()) {
            auto out = open_out(ingest_out);
            write_tweet_stream(out, report.records);
        }
    });

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "Build the retweet graph (largest weak component)");
    std::string graph_in, graph_out;
    bool graph_all = false;
    graph_cmd->add_option("input", graph_in, "JSONL tweet corpus")->required();
    graph_cmd->add_option("-o,--output", graph_out, "Edge list output")->required();
    graph_cmd->add_flag("--all-components", graph_all, "Keep every component");
    graph_cmd->callback([&] {
        const auto records = load_corpus(graph_in);
        auto g = build_retweet_graph(records);
        if (!graph_all) g = largest_component(g);
        save_edge_list(graph_out, g);
        std::cout << "nodes " << g.node_count() << "\narcs " << g.arc_count() << "\nweight " << g.total_weight() << '\n';
    });

    // communities
    auto* comm = app.add_subcommand("communities", "Louvain communities of an edge list");
    std::string comm_edges, comm_out;
    std::uint64_t comm_seed = 1;
    comm->add_option("edges", comm_edges, "Edge list")->required();
    comm->add_option("-o,--output", comm_out, "Partition output")->required();
    comm->add_option("--seed", comm_seed, "Sweep-order seed");
    comm->callback([&] {
        const auto g = load_edge_list(comm_edges);
        const auto run = louvain_run(g, comm_seed);
        save_partition(comm_out, run.partition);
        std::cout << "communities " << run.partition.community_count() << "\nmodularity "
                  << csv::number(modularity(g, run.partition)) << '\n';
    });

    // compare-partitions
    auto* cmp = app.add_subcommand("compare-partitions", "Rand index and z-Rand score on common nodes");
    std::string cmp_a, cmp_b;
    cmp->add_option("first", cmp_a, "Partition file")->required();
    cmp->add_option("second", cmp_b, "Partition file")->required();
    cmp->callback([&] {
        const auto [a, b] = restrict_to_common(load_partition(cmp_a), load_partition(cmp_b));
        std::cout << "common_nodes " << a.node_count() << "\nrand " << csv::number(rand_index(a, b)) << '\n';
        try {
            std::cout << "z_rand " << csv::number(z_rand(a, b)) << '\n';
        } catch (const UndefinedError& e) {
            std::cout << "z_rand undefined (" << e.what() << ")\n";
        }
    });

    // sentinels
    auto* sent = app.add_subcommand("sentinels", "Select the most retweeted accounts of the largest communities");
    std::string sent_edges, sent_part, sent_out, sent_corpus;
    std::size_t sent_k = 15, sent_top = 50;
    double sent_english = 0.8;
    std::uint64_t sent_seed = 1;
    sent->add_option("--edges", sent_edges, "Edge list")->required();
    sent->add_option("--partition", sent_part, "Partition file")->required();
    sent->add_option("-o,--output", sent_out, "Roster output")->required();
    sent->add_option("-k,--k", sent_k, "Sentinels per community");
    sent->add_option("--top-m", sent_top, "Communities to keep, by size");
    sent->add_option("--language-corpus", sent_corpus, "Corpus for the ASCII language filter (omit to skip)");
    sent->add_option("--english-threshold", sent_english, "Share of ASCII tweets required");
    sent->add_option("--seed", sent_seed, "Sampling seed for the language filter");
    sent->callback([&] {
        const auto g = load_edge_list(sent_edges);
        const auto p = load_partition(sent_part);
        CommunityFilter filter = accept_all;
        std::optional<AsciiLanguageFilter> language;
        if (!sent_corpus.empty()) {
            const auto records = load_corpus(sent_corpus);
            language.emplace(records, p, sent_seed, sent_english);
            filter = [&](CommunityLabel c) { return (*language)(c); };
        }
        const auto set = select_sentinels(g, p, sent_k, sent_top, filter);
        save_roster(sent_out, set);
        for (const auto& c : set.communities)
            std::cout << "community " << c.label << " size " << c.community_size << " sentinels " << c.accounts.size()
                      << " coverage " << csv::number(c.coverage_fraction) << '\n';
    });

    // domains
    auto* dom = app.add_subcommand("domains", "Community x domain link-fraction matrix over the baseline period");
    std::string dom_corpus, dom_roster, dom_out, dom_from, dom_until, dom_short;
    std::int64_t dom_min = 10;
    dom->add_option("--corpus", dom_corpus, "Sentinel corpus")->required();
    dom->add_option("--roster", dom_roster, "Roster file")->required();
    dom->add_option("--from", dom_from, "First baseline day (YYYY-MM-DD)");
    dom->add_option("--until", dom_until, "End of the baseline (exclusive timestamp)")->required();
    dom->add_option("--min-count", dom_min, "Keep domains linked more than this often by some community");
    dom->add_option("--shorteners", dom_short, "Shortener domain list (default: built-in)");
    dom->add_option("-o,--output", dom_out, "Matrix CSV output")->required();
    dom->callback([&] {
        const auto records = load_corpus(dom_corpus);
        const auto set = load_roster(dom_roster);
        const auto roster = set.roster();
        const Timestamp until = parse_timestamp(dom_until);
        const Timestamp from = dom_from.empty() ? Timestamp::min() : Timestamp{parse_day(dom_from).time_since_epoch()};
        std::map<CommunityLabel, std::vector<std::string>> urls;
        for (const auto& c : set.communities) urls[c.label];
        for (const auto& r : records) {
            const auto it = roster.find(r.author_id);
            if (it == roster.end() || r.created_at < from || r.created_at >= until) continue;
            urls[it->second].insert(urls[it->second].end(), r.urls.begin(), r.urls.end());
        }
        const auto m = domain_frequency_matrix(urls, dom_min, load_shorteners(dom_short));
        auto out = open_out(dom_out);
        write_domain_matrix(out, m);
        std::cout << "communities " << m.communities.size() << "\ndomains " << m.domains.size() << "\nexcluded_links "
                  << m.excluded_links << "\nunparseable_links " << m.unparseable_links << '\n';
    });

    // cluster
    auto* clu = app.add_subcommand("cluster", "First principal component and 1-D agglomerative clustering");
    std::string clu_matrix, clu_scores, clu_loadings, clu_anchor, clu_linkage = "centroid";
    std::size_t clu_k = 3;
    clu->add_option("matrix", clu_matrix, "Domain matrix CSV")->required();
    clu->add_option("--scores", clu_scores, "Scores CSV output")->required();
    clu->add_option("--loadings", clu_loadings, "Loadings CSV output");
    clu->add_option("-k,--clusters", clu_k, "Number of clusters");
    clu->add_option("--linkage", clu_linkage, "centroid or average");
    clu->add_option("--anchor-domain", clu_anchor, "Domain whose loading is made positive");
    clu->callback([&] {
        auto in = open_in(clu_matrix);
        const auto m = read_domain_matrix(in);
        const auto score = first_principal_component(m, clu_anchor.empty() ? std::nullopt : std::optional(clu_anchor));
        const auto clusters = cluster_scores(score, clu_k, parse_linkage(clu_linkage));
        auto out = open_out(clu_scores);
        write_scores(out, score, clusters);
        if (!clu_loadings.empty()) {
            auto lo = open_out(clu_loadings);
            write_loadings(lo, score);
        }
        for (std::size_t k = 0; k < clusters.cluster_count(); ++k)
            std::cout << "cluster " << k << " centroid " << csv::number(clusters.centroids[k]) << " communities "
                      << clusters.members(static_cast<ClusterLabel>(k)).size() << '\n';
    });

    // topics and rates share their inputs.
    struct TopicArgs {
        std::string corpus, roster, scores, lexicons, output;
        WindowArgs window;
    };
    TopicArgs topic_args, rate_args;
    double rate_per = 15;
    std::string rate_daily;
    auto add_topic_args = [](CLI::App* cmd, TopicArgs& a) {
        cmd->add_option("--corpus", a.corpus, "Sentinel corpus")->required();
        cmd->add_option("--roster", a.roster, "Roster file")->required();
        cmd->add_option("--scores", a.scores, "Scores CSV with clusters")->required();
        cmd->add_option("--lexicons", a.lexicons, "Lexicon directory (default: built-in)");
        cmd->add_option("-o,--output", a.output, "CSV output")->required();
        a.window.add(cmd);
    };
    auto* top = app.add_subcommand("topics", "Topic tweet counts per community and cluster-day");
    add_topic_args(top, topic_args);
    top->callback([&] {
        const auto records = load_corpus(topic_args.corpus);
        const auto roster = load_roster(topic_args.roster).roster();
        const auto clusters = load_clusters(topic_args.scores);
        const auto counts = count_topics(records, roster, clusters.cluster_of, load_lexicons(topic_args.lexicons),
                                         topic_args.window.window());
        auto out = open_out(topic_args.output);
        write_topic_counts(out, counts);
    });
    auto* rat = app.add_subcommand("rates", "Per-capita topic rates, scaled per topic");
    add_topic_args(rat, rate_args);
    rat->add_option("--per-accounts", rate_per, "Daily rates are per this many active accounts");
    rat->add_option("--daily", rate_daily, "Daily cluster rate CSV output");
    rat->callback([&] {
        const auto records = load_corpus(rate_args.corpus);
        const auto roster = load_roster(rate_args.roster).roster();
        const auto clusters = load_clusters(rate_args.scores);
        const auto window = rate_args.window.window();
        const auto counts = count_topics(records, roster, clusters.cluster_of, load_lexicons(rate_args.lexicons), window);
        const auto table = rate_table(counts, activity(records, roster, clusters.cluster_of, window), rate_per);
        auto out = open_out(rate_args.output);
        write_rates(out, table);
        if (!rate_daily.empty()) {
            auto daily = open_out(rate_daily);
            write_daily_rates(daily, table);
        }
    });

    // similarity
    auto* sim = app.add_subcommand("similarity", "Daily inter-cluster trigram similarity and burst flags");
    std::string sim_corpus, sim_roster, sim_scores, sim_lex, sim_topic = "covid", sim_stop, sim_out;
    WindowArgs sim_window;
    BurstArgs sim_burst;
    sim->add_option("--corpus", sim_corpus, "Sentinel corpus")->required();
    sim->add_option("--roster", sim_roster, "Roster file")->required();
    sim->add_option("--scores", sim_scores, "Scores CSV with clusters")->required();
    sim->add_option("--lexicons", sim_lex, "Lexicon directory (default: built-in)");
    sim->add_option("--topic", sim_topic, "Lexicon selecting the tweets compared");
    sim->add_option("--stopwords", sim_stop, "Stopword list (default: built-in)");
    sim->add_option("-o,--output", sim_out, "Similarity CSV output")->required();
    sim_window.add(sim);
    sim_burst.add(sim);
    sim->callback([&] {
        const auto records = load_corpus(sim_corpus);
        const auto roster = load_roster(sim_roster).roster();
        const auto members = members_of(load_clusters(sim_scores));
        const auto lexicons = load_lexicons(sim_lex);
        if (!lexicons.contains(sim_topic)) throw ParameterError("no lexicon named " + sim_topic);
        const auto window = sim_window.window();
        const auto docs = build_day_docs(
            records, roster, [&](const TweetRecord& r) { return lexicons.matches(r.text, sim_topic); },
            load_stopwords(sim_stop), window);
        auto out = open_out(sim_out);
        write_similarity_header(out);
        std::vector<SimilaritySeries> all;
        for (const auto& [a, _] : members)
            for (const auto& [b, __] : members)
                if (a < b) {
                    auto s = similarity_series(docs, members, a, b, window);
                    flag_days(s, sim_burst.params());
                    write_similarity_rows(out, s);
                    all.push_back(std::move(s));
                }
        print_series_flags(all);
    });

    // flag
    auto* flag = app.add_subcommand("flag", "Recompute burst scores and flags of a similarity CSV");
    std::string flag_in, flag_out;
    BurstArgs flag_burst;
    flag->add_option("input", flag_in, "Similarity CSV")->required();
    flag->add_option("-o,--output", flag_out, "Similarity CSV output (default: stdout)");
    flag_burst.add(flag);
    flag->callback([&] {
        auto in = open_in(flag_in);
        auto series = read_similarity(in);
        std::ostringstream text;
        write_similarity_header(text);
        for (auto& s : series) {
            flag_days(s, flag_burst.params());
            write_similarity_rows(text, s);
        }
        if (flag_out.empty()) {
            std::cout << text.str();
        } else {
            auto out = open_out(flag_out);
            out << text.str();
            print_series_flags(series);
        }
    });

    // lsa
    auto* lsa = app.add_subcommand("lsa", "Topical tweets and driver confirmation for flagged days");
    std::string lsa_corpus, lsa_roster, lsa_scores, lsa_sim, lsa_lex, lsa_topic = "covid", lsa_stop, lsa_out;
    LsaParams lsa_params;
    double lsa_match = 0.5;
    WindowArgs lsa_window;
    BurstArgs lsa_burst;
    lsa->add_option("--corpus", lsa_corpus, "Sentinel corpus")->required();
    lsa->add_option("--roster", lsa_roster, "Roster file")->required();
    lsa->add_option("--scores", lsa_scores, "Scores CSV with clusters")->required();
    lsa->add_option("--similarity", lsa_sim, "Flagged similarity CSV")->required();
    lsa->add_option("--lexicons", lsa_lex, "Lexicon directory (default: built-in)");
    lsa->add_option("--topic", lsa_topic, "Lexicon selecting the tweets compared");
    lsa->add_option("--stopwords", lsa_stop, "Stopword list (default: built-in)");
    lsa->add_option("-k,--singular-vectors", lsa_params.k, "Singular vectors examined");
    lsa->add_option("--gap-window", lsa_params.window, "Largest components searched for the drop");
    lsa->add_option("--gap-ratio", lsa_params.min_gap_ratio, "Minimum ratio across the drop");
    lsa->add_option("--match-threshold", lsa_match, "Trigram Jaccard for common tweets");
    lsa->add_option("-o,--output", lsa_out, "JSON report output")->required();
    lsa_window.add(lsa);
    lsa_burst.add(lsa);
    lsa->callback([&] {
        const auto records = load_corpus(lsa_corpus);
        const auto roster = load_roster(lsa_roster).roster();
        const auto members = members_of(load_clusters(lsa_scores));
        const auto lexicons = load_lexicons(lsa_lex);
        if (!lexicons.contains(lsa_topic)) throw ParameterError("no lexicon named " + lsa_topic);
        const auto docs = build_day_docs(
            records, roster, [&](const TweetRecord& r) { return lexicons.matches(r.text, lsa_topic); },
            load_stopwords(lsa_stop), lsa_window.window());
        auto in = open_in(lsa_sim);
        const auto series = read_similarity(in);
        const auto analysis = analyze_flagged_days(series, docs, members, lsa_params, lsa_match, lsa_burst.params());
        auto out = open_out(lsa_out);
        write_lsa_report(out, analysis);
        for (const auto& d : analysis.drivers)
            std::cout << format_day(d.day) << ' ' << d.first << '-' << d.second << " common "
                      << d.common_first.size() + d.common_second.size() << " driver " << (d.is_driver ? "yes" : "no") << '\n';
    });

    // stats
    auto* st = app.add_subcommand("stats", "Chi-square homogeneity test and Krippendorff's alpha");
    std::string st_table, st_coding, st_adf;
    std::vector<std::string> st_rows;
    st->add_option("--table", st_table, "Contingency CSV");
    st->add_option("--rows", st_rows, "Restrict the table to these row labels");
    st->add_option("--coding", st_coding, "Coders x items CSV");
    st->add_option("--adf", st_adf, "Similarity CSV; runs the unit-root test per pair");
    st->callback([&] {
        if (st_table.empty() && st_coding.empty() && st_adf.empty())
            throw ParameterError("give --table, --coding or --adf");
        if (!st_table.empty()) {
            auto table = load_contingency(st_table);
            if (!st_rows.empty()) table = select_rows(table, st_rows);
            const auto r = chi_square(table);
            std::cout << "chi_square " << csv::number(r.statistic) << "\ndf " << r.df << "\nn " << r.n << "\np_value "
                      << csv::number(r.p_value) << '\n';
        }
        if (!st_coding.empty()) std::cout << "krippendorff_alpha " << csv::number(krippendorff_alpha(load_coding_matrix(st_coding))) << '\n';
        if (!st_adf.empty()) {
            auto in = open_in(st_adf);
            for (const auto& s : read_similarity(in)) {
                std::vector<double> v;
                for (const auto& x : s.similarity)
                    if (x) v.push_back(*x);
                const auto r = adf_test<double>(v);
                std::cout << "adf " << s.pair_name() << " statistic " << csv::number(r.statistic) << " critical "
                          << csv::number(r.critical_value) << " stationary " << (r.rejects_unit_root ? "yes" : "no") << '\n';
            }
        }
    });

    // run
    auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
    std::string run_config;
    bool run_fresh = false;
    std::map<std::string, std::string> run_overrides;
    run->add_option("-c,--config", run_config, "Flat key = value config file");
    run->add_flag("--fresh", run_fresh, "Recompute every stage even when artifacts exist");
    for (const auto& key : config_keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        run->add_option_function<std::string>(flag, [&run_overrides, key](const std::string& v) { run_overrides[key] = v; },
                                              "Override config key " + key);
    }
    run->callback([&] {
        PipelineConfig config = run_config.empty() ? PipelineConfig{} : load_config(run_config);
        apply_env_overrides(config, process_env);
        for (const auto& [key, value] : run_overrides) set_config_value(config, key, value);
        const auto report = run_pipeline(config, RunOptions{!run_fresh});
        for (const auto& s : report.stages) std::cout << "stage " << s.name << (s.resumed ? " resumed" : " done") << '\n';
        print_series_flags(report.similarity);
        for (const auto& d : report.drivers)
            std::cout << "driver " << format_day(d.day) << ' ' << d.first << '-' << d.second << ' '
                      << (d.is_driver ? "confirmed" : "not confirmed") << '\n';
        std::cout << "artifacts " << config.out_dir.string() << '\n';
    });

    // sample
    auto* smp = app.add_subcommand("sample", "Stratified random sample of topic tweets per cluster for coding");
    std::string smp_corpus, smp_roster, smp_scores, smp_lex, smp_topic = "covid", smp_out;
    std::size_t smp_per = 100;
    std::uint64_t smp_seed = 1;
    smp->add_option("--corpus", smp_corpus, "Sentinel corpus")->required();
    smp->add_option("--roster", smp_roster, "Roster file")->required();
    smp->add_option("--scores", smp_scores, "Scores CSV with clusters")->required();
    smp->add_option("--lexicons", smp_lex, "Lexicon directory (default: built-in)");
    smp->add_option("--topic", smp_topic, "Lexicon the sampled tweets must match");
    smp->add_option("-n,--per-cluster", smp_per, "Tweets drawn per cluster");
    smp->add_option("--seed", smp_seed, "Sampling seed");
    smp->add_option("-o,--output", smp_out, "JSONL output")->required();
    smp->callback([&] {
        const auto records = load_corpus(smp_corpus);
        const auto roster = load_roster(smp_roster).roster();
        const auto clusters = load_clusters(smp_scores);
        const auto lexicons = load_lexicons(smp_lex);
        if (!lexicons.contains(smp_topic)) throw ParameterError("no lexicon named " + smp_topic);
        std::map<ClusterLabel, std::vector<TweetRecord>> strata;
        for (const auto& r : records) {
            const auto m = roster.find(r.author_id);
            if (m == roster.end() || !lexicons.matches(r.text, smp_topic)) continue;
            const auto c = clusters.cluster_of.find(m->second);
            if (c != clusters.cluster_of.end()) strata[c->second].push_back(r);
        }
        std::mt19937_64 rng(smp_seed);
        std::vector<TweetRecord> sample;
        for (auto& [cluster, tweets] : strata) {
            std::shuffle(tweets.begin(), tweets.end(), rng);
            tweets.resize(std::min(tweets.size(), smp_per));
            sample.insert(sample.end(), tweets.begin(), tweets.end());
            std::cout << "cluster " << cluster << " sampled " << tweets.size() << '\n';
        }
        auto out = open_out(smp_out);
        write_tweet_stream(out, sample);
    });

    // synth
    auto* syn = app.add_subcommand("synth", "Write the synthetic burst fixture and its config");
    std::string syn_dir;
    SyntheticSpec syn_spec;
    syn->add_option("dir", syn_dir, "Output directory")->required();
    syn->add_option("--seed", syn_spec.seed, "Generator seed");
    syn->add_option("--days", syn_spec.days, "Window length in days");
    syn->add_option("--burst-day", syn_spec.burst_day, "Zero-based offset of the injected day");
    syn->callback([&] {
        write_synthetic(syn_dir, syn_spec);
        std::cout << "wrote " << (fs::path(syn_dir) / "pipeline.conf").string() << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        try {
            std::rethrow_if_nested(e);
        } catch (const std::exception& cause) {
            std::cerr << "  caused by: " << cause.what() << '\n';
        }
        return 1;
    }
    return 0;
}
