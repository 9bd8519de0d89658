#include "sentinel/sentinels.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace sentinel {

std::map<AccountId, CommunityLabel, std::less<>> SentinelSet::roster() const {
    std::map<AccountId, CommunityLabel, std::less<>> out;
    for (const auto& c : communities)
        for (const auto& a : c.accounts) out.emplace(a.account_id, c.label);
    return out;
}

SentinelSet select_sentinels(const RetweetGraph& graph, const Partition& partition, std::size_t k, std::size_t top_m,
                             const CommunityFilter& filter) {
    if (k == 0 || top_m == 0) throw ParameterError("k and top_m must be positive");
    (void)partition.labels_for(graph);  // coverage check

    std::vector<std::pair<CommunityLabel, std::size_t>> by_size;
    for (const auto& [label, members] : partition.communities()) by_size.emplace_back(label, members.size());
    std::stable_sort(by_size.begin(), by_size.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (by_size.size() > top_m) by_size.resize(top_m);

    SentinelSet set;
    set.k = k;
    for (const auto& [label, size] : by_size) {
        if (!filter(label)) continue;
        SentinelCommunity community;
        community.label = label;
        community.community_size = size;

        std::vector<SentinelAccount> members;
        std::int64_t total = 0;
        for (const auto& id : partition.communities().at(label)) {
            const auto node = graph.index_of(id);
            const std::int64_t deg = node ? graph.in_degree(*node) : 0;
            members.push_back({id, deg});
            total += deg;
        }
        std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
            if (a.in_degree != b.in_degree) return a.in_degree > b.in_degree;
            return a.account_id < b.account_id;
        });
        if (members.size() > k) members.resize(k);
        std::int64_t covered = 0;
        for (const auto& m : members) covered += m.in_degree;
        // A community nobody retweeted is covered vacuously.
        community.coverage_fraction = total > 0 ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;
        community.accounts = std::move(members);
        set.communities.push_back(std::move(community));
    }
    return set;
}

double ascii_ratio(std::string_view text) {
    std::size_t ascii = 0, total = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
        if (c < 0x80 && std::isspace(c)) continue;
        ++total;
        if (c < 0x80) ++ascii;
    }
    return total == 0 ? 1.0 : static_cast<double>(ascii) / static_cast<double>(total);
}

AsciiLanguageFilter::AsciiLanguageFilter(std::span<const TweetRecord> records, const Partition& partition,
                                         std::uint64_t seed, double threshold, std::size_t sample_size) {
    std::map<CommunityLabel, std::vector<const TweetRecord*>> by_community;
    for (const auto& r : records)
        if (const auto label = partition.label_of(r.author_id)) by_community[*label].push_back(&r);

    std::mt19937_64 rng(seed);
    for (auto& [label, tweets] : by_community) {
        std::shuffle(tweets.begin(), tweets.end(), rng);
        if (tweets.size() > sample_size) tweets.resize(sample_size);
        const auto english = std::count_if(tweets.begin(), tweets.end(),
                                           [&](const TweetRecord* r) { return ascii_ratio(r->text) >= threshold; });
        share_[label] = static_cast<double>(english) / static_cast<double>(tweets.size());
    }
    // Communities with no sampled tweets keep share 0 and fail.
    for (const auto& [label, _] : partition.communities()) share_.try_emplace(label, 0.0);
    threshold_ = threshold;
}

bool AsciiLanguageFilter::operator()(CommunityLabel label) const { return english_share(label) >= threshold_; }

double AsciiLanguageFilter::english_share(CommunityLabel label) const {
    const auto it = share_.find(label);
    return it == share_.end() ? 0.0 : it->second;
}

std::size_t ObservationWindow::length() const {
    if (last < first) return 0;
    return static_cast<std::size_t>((last - first).count()) + 1;
}

ActivityLedger activity(std::span<const TweetRecord> records,
                        const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                        const std::map<CommunityLabel, ClusterLabel>& clusters, ObservationWindow window) {
    const std::size_t days = window.length();
    if (days == 0) throw ParameterError("observation window is empty");

    ActivityLedger ledger;
    ledger.window = window;
    for (const auto& r : records) {
        if (!roster.contains(r.author_id)) continue;
        const Day d = r.day();
        auto [it, inserted] = ledger.last_seen.try_emplace(r.author_id, d);
        if (!inserted && d > it->second) it->second = d;
    }

    for (const auto& [label, cluster] : clusters) {
        ledger.cluster_daily_active.try_emplace(cluster, days, 0);
        ledger.cluster_active_days.try_emplace(cluster, 0);
    }
    for (const auto& [account, label] : roster) {
        auto& daily = ledger.community_daily_active.try_emplace(label, days, 0).first->second;
        ledger.community_active_days.try_emplace(label, 0);

        std::int64_t active = 0;
        if (const auto it = ledger.last_seen.find(account); it != ledger.last_seen.end() && it->second >= window.first) {
            const auto through = std::min(it->second, window.last);
            active = (through - window.first).count() + 1;
        }
        ledger.active_days[account] = active;
        ledger.community_active_days[label] += active;
        for (std::int64_t d = 0; d < active; ++d) ++daily[static_cast<std::size_t>(d)];

        if (const auto c = clusters.find(label); c != clusters.end()) {
            auto& cdaily = ledger.cluster_daily_active[c->second];
            for (std::int64_t d = 0; d < active; ++d) ++cdaily[static_cast<std::size_t>(d)];
            ledger.cluster_active_days[c->second] += active;
        }
    }
    return ledger;
}

void write_roster(std::ostream& out, const SentinelSet& set) {
    for (const auto& c : set.communities)
        for (const auto& a : c.accounts) out << c.label << ' ' << a.account_id << ' ' << a.in_degree << '\n';
}

SentinelSet read_roster(std::istream& in) {
    SentinelSet set;
    std::map<CommunityLabel, SentinelCommunity> by_label;
    std::vector<CommunityLabel> order;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        CommunityLabel label{};
        SentinelAccount account;
        if (!(fields >> label >> account.account_id >> account.in_degree))
            throw ParseError("roster line " + std::to_string(line_no) + ": expected 'community_label account_id in_degree'");
        auto [it, inserted] = by_label.try_emplace(label);
        if (inserted) {
            it->second.label = label;
            order.push_back(label);
        }
        it->second.accounts.push_back(std::move(account));
    }
    std::size_t k = 0;
    for (auto label : order) {
        k = std::max(k, by_label[label].accounts.size());
        set.communities.push_back(std::move(by_label[label]));
    }
    set.k = std::max<std::size_t>(k, 1);
    return set;
}

void save_roster(const std::filesystem::path& path, const SentinelSet& set) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_roster(out, set);
}

SentinelSet load_roster(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_roster(in);
}

}  // namespace sentinel
