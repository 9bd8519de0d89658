#include "sentinel/topics.hpp"

#include "sentinel/csv.hpp"
#include "sentinel/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace sentinel {

namespace {

std::string lowered(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::string cell(const std::optional<double>& v) { return v ? csv::number(*v) : std::string(); }

}  // namespace

bool TopicLexicon::matches(std::string_view text) const {
    if (substrings.empty()) return false;
    const auto lower_text = lowered(text);
    return std::any_of(substrings.begin(), substrings.end(),
                       [&](const std::string& s) { return lower_text.find(s) != std::string::npos; });
}

std::vector<TweetRecord> filter_topic(std::span<const TweetRecord> records, const TopicLexicon& lexicon) {
    std::vector<TweetRecord> out;
    for (const auto& r : records)
        if (lexicon.matches(r.text)) out.push_back(r);
    return out;
}

TopicLexicon read_lexicon(std::istream& in, std::string name) {
    TopicLexicon lex;
    lex.name = std::move(name);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto body = trim(t.substr(1));
            if (body.rfind("parent:", 0) == 0) {
                const auto parent = trim(body.substr(7));
                if (!parent.empty()) lex.parent = std::string(parent);
            }
            continue;
        }
        // Leading/trailing spaces are significant inside a phrase only when quoted.
        std::string entry(t);
        if (entry.size() >= 2 && entry.front() == '"' && entry.back() == '"') entry = entry.substr(1, entry.size() - 2);
        if (!entry.empty()) lex.substrings.push_back(lowered(entry));
    }
    return lex;
}

TopicLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_lexicon(in, path.stem().string());
}

void LexiconSet::add(TopicLexicon lexicon) {
    const auto name = lexicon.name;
    lexicons_[name] = std::move(lexicon);
}

void LexiconSet::validate() const {
    for (const auto& [name, _] : lexicons_) (void)chain(name);
}

const TopicLexicon& LexiconSet::get(std::string_view name) const {
    const auto it = lexicons_.find(std::string(name));
    if (it == lexicons_.end()) throw ParameterError("unknown topic: " + std::string(name));
    return it->second;
}

std::vector<std::string> LexiconSet::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : lexicons_) out.push_back(name);
    return out;
}

std::vector<std::string> LexiconSet::chain(std::string_view name) const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::optional<std::string> current = std::string(name);
    while (current) {
        if (!seen.insert(*current).second) throw ParameterError("lexicon parent cycle through " + *current);
        const auto& lex = get(*current);
        out.push_back(*current);
        current = lex.parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool LexiconSet::matches(std::string_view text, std::string_view name) const {
    for (const auto& n : chain(name))
        if (!get(n).matches(text)) return false;
    return true;
}

std::vector<TweetRecord> LexiconSet::select(std::span<const TweetRecord> records, std::string_view name) const {
    std::vector<TweetRecord> current(records.begin(), records.end());
    for (const auto& n : chain(name)) current = filter_topic(current, get(n));
    return current;
}

LexiconSet load_lexicon_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("lexicon directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    LexiconSet set;
    for (const auto& f : files) set.add(load_lexicon(f));
    set.validate();
    return set;
}

TopicCounts count_topics(std::span<const TweetRecord> records, const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                         const std::map<CommunityLabel, ClusterLabel>& clusters, const LexiconSet& lexicons,
                         const ObservationWindow& window) {
    TopicCounts counts;
    const auto names = lexicons.names();
    const std::size_t days = window.length();
    for (const auto& name : names) {
        auto& by_comm = counts.by_community[name];
        auto& daily = counts.daily_by_cluster[name];
        for (const auto& [_, label] : roster) by_comm.try_emplace(label, 0);
        for (const auto& [_, cluster] : clusters) daily.try_emplace(cluster, days, 0);
    }
    for (const auto& r : records) {
        const auto member = roster.find(r.author_id);
        if (member == roster.end() || !window.contains(r.day())) continue;
        const auto cluster = clusters.find(member->second);
        const auto offset = static_cast<std::size_t>((r.day() - window.first).count());
        for (const auto& name : names) {
            if (!lexicons.matches(r.text, name)) continue;
            ++counts.by_community[name][member->second];
            if (cluster != clusters.end()) ++counts.daily_by_cluster[name][cluster->second][offset];
        }
    }
    return counts;
}

RateTable rate_table(const TopicCounts& counts, const ActivityLedger& ledger, double per_accounts) {
    RateTable table;
    table.per_accounts = per_accounts;
    std::set<CommunityLabel> excluded;
    for (const auto& [topic, by_comm] : counts.by_community) {
        std::vector<TopicRate> rows;
        for (const auto& [community, count] : by_comm) {
            const auto it = ledger.community_active_days.find(community);
            const std::int64_t days = it == ledger.community_active_days.end() ? 0 : it->second;
            if (days <= 0) {
                excluded.insert(community);
                continue;
            }
            TopicRate row;
            row.topic = topic;
            row.community = community;
            row.count = count;
            row.active_account_days = days;
            row.per_capita = static_cast<double>(count) / static_cast<double>(days);
            rows.push_back(row);
        }
        double sum = 0, max = 0;
        for (const auto& r : rows) {
            sum += r.per_capita;
            max = std::max(max, r.per_capita);
        }
        for (auto& r : rows) {
            if (sum > 0) r.sum_scaled = r.per_capita / sum;
            if (max > 0) r.max_scaled = r.per_capita / max;
            table.rows.push_back(std::move(r));
        }
    }
    table.excluded.assign(excluded.begin(), excluded.end());

    for (const auto& [topic, by_cluster] : counts.daily_by_cluster) {
        for (const auto& [cluster, series] : by_cluster) {
            const auto active_it = ledger.cluster_daily_active.find(cluster);
            for (std::size_t d = 0; d < series.size(); ++d) {
                DailyRate row;
                row.topic = topic;
                row.cluster = cluster;
                row.day = ledger.window.first + std::chrono::days(static_cast<long>(d));
                row.count = series[d];
                row.active_accounts = active_it == ledger.cluster_daily_active.end() || d >= active_it->second.size()
                                          ? 0
                                          : active_it->second[d];
                if (row.active_accounts > 0)
                    row.rate = static_cast<double>(row.count) * per_accounts / static_cast<double>(row.active_accounts);
                table.daily.push_back(std::move(row));
            }
        }
    }
    return table;
}

void write_rates(std::ostream& out, const RateTable& table) {
    out << "topic,community,count,active_account_days,per_capita,sum_scaled,max_scaled\n";
    for (const auto& r : table.rows)
        out << csv::field(r.topic) << ',' << r.community << ',' << r.count << ',' << r.active_account_days << ','
            << csv::number(r.per_capita) << ',' << cell(r.sum_scaled) << ',' << cell(r.max_scaled) << '\n';
}

void write_daily_rates(std::ostream& out, const RateTable& table) {
    out << "topic,cluster,day,count,active_accounts,rate\n";
    for (const auto& r : table.daily)
        out << csv::field(r.topic) << ',' << r.cluster << ',' << format_day(r.day) << ',' << r.count << ','
            << r.active_accounts << ',' << cell(r.rate) << '\n';
}

void write_topic_counts(std::ostream& out, const TopicCounts& counts) {
    out << "topic,community,count\n";
    for (const auto& [topic, by_comm] : counts.by_community)
        for (const auto& [community, count] : by_comm) out << csv::field(topic) << ',' << community << ',' << count << '\n';
}

}  // namespace sentinel
