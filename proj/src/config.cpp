#include "sentinel/config.hpp"

#include "sentinel/csv.hpp"
#include "sentinel/error.hpp"
#include "sentinel/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace sentinel {

namespace {

using Path = std::filesystem::path;

struct Field {
    const char* key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_count(const std::string& v) {
    const auto n = csv::to_int(v);
    if (n < 0) throw ParseError("expected a nonnegative integer: " + v);
    return static_cast<std::uint64_t>(n);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("expected a boolean: " + v);
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

template <typename T>
Field count_field(const char* key, T PipelineConfig::*member) {
    return {key, [member](const PipelineConfig& c) { return std::to_string(c.*member); },
            [member](PipelineConfig& c, const std::string& v) { c.*member = static_cast<T>(to_count(v)); }};
}

Field real_field(const char* key, double PipelineConfig::*member) {
    return {key, [member](const PipelineConfig& c) { return csv::number(c.*member); },
            [member](PipelineConfig& c, const std::string& v) { c.*member = csv::to_double(v); }};
}

Field bool_field(const char* key, bool PipelineConfig::*member) {
    return {key, [member](const PipelineConfig& c) { return from_bool(c.*member); },
            [member](PipelineConfig& c, const std::string& v) { c.*member = to_bool(v); }};
}

Field path_field(const char* key, Path PipelineConfig::*member) {
    return {key, [member](const PipelineConfig& c) { return (c.*member).string(); },
            [member](PipelineConfig& c, const std::string& v) { c.*member = Path(v); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        path_field("recruit_corpus", &PipelineConfig::recruit_corpus),
        path_field("sentinel_corpus", &PipelineConfig::sentinel_corpus),
        {"window_first", [](const PipelineConfig& c) { return format_day(c.window_first); },
         [](PipelineConfig& c, const std::string& v) { c.window_first = parse_day(v); }},
        {"window_last", [](const PipelineConfig& c) { return format_day(c.window_last); },
         [](PipelineConfig& c, const std::string& v) { c.window_last = parse_day(v); }},
        {"split", [](const PipelineConfig& c) { return format_timestamp(c.split); },
         [](PipelineConfig& c, const std::string& v) { c.split = parse_timestamp(v); }},
        count_field("k", &PipelineConfig::k),
        count_field("top_m", &PipelineConfig::top_m),
        count_field("min_count", &PipelineConfig::min_count),
        count_field("clusters", &PipelineConfig::clusters),
        {"linkage", [](const PipelineConfig& c) { return std::string(c.linkage == Linkage::Average ? "average" : "centroid"); },
         [](PipelineConfig& c, const std::string& v) {
             if (v == "centroid") c.linkage = Linkage::Centroid;
             else if (v == "average") c.linkage = Linkage::Average;
             else throw ParseError("linkage must be centroid or average: " + v);
         }},
        {"anchor_domain", [](const PipelineConfig& c) { return c.anchor_domain.value_or(""); },
         [](PipelineConfig& c, const std::string& v) {
             c.anchor_domain = v.empty() ? std::nullopt : std::optional<std::string>(v);
         }},
        bool_field("language_filter", &PipelineConfig::language_filter),
        real_field("english_threshold", &PipelineConfig::english_threshold),
        {"similarity_topic", [](const PipelineConfig& c) { return c.similarity_topic; },
         [](PipelineConfig& c, const std::string& v) { c.similarity_topic = v; }},
        real_field("per_accounts", &PipelineConfig::per_accounts),
        real_field("threshold", &PipelineConfig::threshold),
        bool_field("strict", &PipelineConfig::strict),
        count_field("min_history", &PipelineConfig::min_history),
        count_field("lsa_k", &PipelineConfig::lsa_k),
        count_field("lsa_window", &PipelineConfig::lsa_window),
        real_field("gap_ratio", &PipelineConfig::gap_ratio),
        real_field("match_threshold", &PipelineConfig::match_threshold),
        {"adf_level", [](const PipelineConfig& c) { return to_string(c.adf_level); },
         [](PipelineConfig& c, const std::string& v) { c.adf_level = parse_significance(v); }},
        count_field("seed", &PipelineConfig::seed),
        path_field("lexicon_dir", &PipelineConfig::lexicon_dir),
        path_field("stopwords", &PipelineConfig::stopwords),
        path_field("shorteners", &PipelineConfig::shorteners),
        path_field("coding", &PipelineConfig::coding),
        path_field("contingency", &PipelineConfig::contingency),
        path_field("out_dir", &PipelineConfig::out_dir),
    };
    return table;
}

const Field& field_for(std::string_view key) {
    for (const auto& f : fields())
        if (key == f.key) return f;
    throw ParseError("unknown config key: " + std::string(key));
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.emplace_back(f.key);
    return out;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
    const auto& f = field_for(key);
    try {
        f.set(config, trim(value));
    } catch (const Error& e) {
        throw ParseError(std::string(key) + ": " + e.what());
    }
}

std::string get_config_value(const PipelineConfig& config, std::string_view key) { return field_for(key).get(config); }

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig config;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("config line " + std::to_string(number) + " has no '='");
        set_config_value(config, trim(std::string_view(text).substr(0, eq)), std::string_view(text).substr(eq + 1));
    }
    return config;
}

void write_config(std::ostream& out, const PipelineConfig& config) {
    for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

void apply_env_overrides(PipelineConfig& config,
                         const std::function<std::optional<std::string>(const std::string&)>& lookup) {
    for (const auto& f : fields()) {
        std::string name = "SENTINEL_";
        for (const char* p = f.key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
        if (const auto v = lookup(name)) set_config_value(config, f.key, *v);
    }
}

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    auto config = parse_config(in);
    const auto base = path.parent_path();
    for (Path* p : {&config.recruit_corpus, &config.sentinel_corpus, &config.lexicon_dir, &config.stopwords,
                    &config.shorteners, &config.coding, &config.contingency, &config.out_dir})
        if (!p->empty() && p->is_relative()) *p = base / *p;
    return config;
}

void validate(const PipelineConfig& c, bool check_files) {
    if (c.window_last < c.window_first) throw ParameterError("window_last precedes window_first");
    const Timestamp open{c.window_first.time_since_epoch()};
    const Timestamp close{(c.window_last + std::chrono::days(1)).time_since_epoch()};
    if (c.split <= open || c.split > close) throw ParameterError("split must fall inside the observation window");
    if (c.k == 0 || c.top_m == 0 || c.clusters == 0 || c.min_history == 0 || c.lsa_k == 0 || c.lsa_window == 0)
        throw ParameterError("k, top_m, clusters, min_history, lsa_k and lsa_window must be positive");
    if (c.min_count < 0) throw ParameterError("min_count must be nonnegative");
    if (!(c.per_accounts > 0)) throw ParameterError("per_accounts must be positive");
    if (!(c.gap_ratio >= 1)) throw ParameterError("gap_ratio must be at least 1");
    if (!(c.match_threshold > 0 && c.match_threshold <= 1)) throw ParameterError("match_threshold must be in (0, 1]");
    if (!(c.english_threshold >= 0 && c.english_threshold <= 1)) throw ParameterError("english_threshold must be in [0, 1]");
    if (c.similarity_topic.empty()) throw ParameterError("similarity_topic is empty");
    if (!check_files) return;
    auto need = [](const Path& p, const char* what) {
        if (p.empty()) throw ParameterError(std::string(what) + " is not set");
        if (!std::filesystem::exists(p)) throw IoError(std::string(what) + " not found: " + p.string());
    };
    need(c.recruit_corpus, "recruit_corpus");
    need(c.sentinel_corpus, "sentinel_corpus");
    for (const auto& [p, what] : {std::pair{c.lexicon_dir, "lexicon_dir"}, {c.stopwords, "stopwords"},
                                  {c.shorteners, "shorteners"}, {c.coding, "coding"}, {c.contingency, "contingency"}})
        if (!p.empty()) need(p, what);
}

std::filesystem::path builtin_data_dir() { return SENTINEL_DATA_DIR; }

}  // namespace sentinel
