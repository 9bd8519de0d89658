#include "sentinel/similarity.hpp"

#include "sentinel/csv.hpp"
#include "sentinel/error.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace sentinel {

void CommunityDayDoc::add(TweetDoc tweet) {
    accumulate(trigrams, tweet.doc.trigram_counts);
    tweets.push_back(std::move(tweet));
}

std::size_t CommunityDayDoc::remove_if(const std::function<bool(const TweetDoc&)>& pred) {
    const auto before = tweets.size();
    tweets.erase(std::remove_if(tweets.begin(), tweets.end(), pred), tweets.end());
    trigrams.clear();
    for (const auto& t : tweets) accumulate(trigrams, t.doc.trigram_counts);
    return before - tweets.size();
}

DayDocIndex build_day_docs(std::span<const TweetRecord> records,
                           const std::map<AccountId, CommunityLabel, std::less<>>& roster,
                           const std::function<bool(const TweetRecord&)>& is_topical, const Stopwords& stopwords,
                           const ObservationWindow& window) {
    DayDocIndex index;
    for (const auto& r : records) {
        const auto member = roster.find(r.author_id);
        if (member == roster.end() || !window.contains(r.day()) || !is_topical(r)) continue;
        auto& doc = index[r.day()][member->second];
        doc.community = member->second;
        doc.day = r.day();
        doc.add({r.tweet_id, normalize_text(r.text, stopwords)});
    }
    return index;
}

double cosine_similarity(const TrigramCounts& u, const TrigramCounts& v) {
    if (u.empty() || v.empty()) throw UndefinedError("cosine similarity of an empty document");
    const auto& small = u.size() <= v.size() ? u : v;
    const auto& large = u.size() <= v.size() ? v : u;
    double dot = 0;
    for (const auto& [g, c] : small)
        if (const auto it = large.find(g); it != large.end()) dot += static_cast<double>(c) * static_cast<double>(it->second);
    auto norm = [](const TrigramCounts& x) {
        double s = 0;
        for (const auto& [_, c] : x) s += static_cast<double>(c) * static_cast<double>(c);
        return std::sqrt(s);
    };
    // Clamp the rounding excess on identical bags.
    return std::min(1.0, dot / (norm(u) * norm(v)));
}

std::optional<double> intercluster_similarity(std::span<const TrigramCounts> a, std::span<const TrigramCounts> b) {
    double sum = 0;
    std::size_t pairs = 0;
    for (const auto& u : a) {
        if (u.empty()) continue;
        for (const auto& v : b) {
            if (v.empty()) continue;
            sum += cosine_similarity(u, v);
            ++pairs;
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

std::optional<double> intercluster_similarity(const std::map<CommunityLabel, CommunityDayDoc>& day,
                                              std::span<const CommunityLabel> a, std::span<const CommunityLabel> b) {
    auto collect = [&](std::span<const CommunityLabel> labels) {
        std::vector<TrigramCounts> bags;
        for (auto label : labels) {
            const auto it = day.find(label);
            bags.push_back(it == day.end() ? TrigramCounts{} : it->second.trigrams);
        }
        return bags;
    };
    const auto bags_a = collect(a);
    const auto bags_b = collect(b);
    return intercluster_similarity(bags_a, bags_b);
}

std::string SimilaritySeries::pair_name() const { return std::to_string(first) + "-" + std::to_string(second); }

std::optional<std::size_t> SimilaritySeries::index_of(Day d) const {
    const auto it = std::lower_bound(days.begin(), days.end(), d);
    if (it == days.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - days.begin());
}

std::optional<double> burst_score_for(std::span<const std::optional<double>> similarity, std::size_t t,
                                      std::optional<double> value, std::size_t min_history, double eps) {
    if (t >= similarity.size()) throw ParameterError("burst score day out of range");
    if (!value) return std::nullopt;
    std::vector<double> history;
    for (std::size_t tau = 0; tau < t; ++tau)
        if (similarity[tau]) history.push_back(*similarity[tau]);
    if (history.size() < min_history) return std::nullopt;
    return standardized_deviation<double>(*value, history, eps);
}

std::optional<double> burst_score(std::span<const std::optional<double>> similarity, std::size_t t,
                                  std::size_t min_history, double eps) {
    if (t >= similarity.size()) throw ParameterError("burst score day out of range");
    return burst_score_for(similarity, t, similarity[t], min_history, eps);
}

bool exceeds(double h, const BurstParams& params) { return params.strict ? h > params.threshold : h >= params.threshold; }

std::vector<Day> flag_days(SimilaritySeries& series, const BurstParams& params) {
    if (params.min_history == 0) throw ParameterError("min_history must be positive");
    const std::size_t n = series.similarity.size();
    series.burst.assign(n, std::nullopt);
    series.flagged.assign(n, false);
    std::vector<Day> out;
    for (std::size_t t = 0; t < n; ++t) {
        series.burst[t] = burst_score(series.similarity, t, params.min_history, params.eps);
        if (series.burst[t] && exceeds(*series.burst[t], params)) {
            series.flagged[t] = true;
            out.push_back(series.days[t]);
        }
    }
    return out;
}

SimilaritySeries similarity_series(const DayDocIndex& docs, const std::map<ClusterLabel, std::vector<CommunityLabel>>& clusters,
                                   ClusterLabel first, ClusterLabel second, const ObservationWindow& window) {
    const auto& a = clusters.at(first);
    const auto& b = clusters.at(second);
    SimilaritySeries series;
    series.first = first;
    series.second = second;
    static const std::map<CommunityLabel, CommunityDayDoc> kNoDocs;
    for (Day d = window.first; d <= window.last; d += std::chrono::days(1)) {
        const auto it = docs.find(d);
        series.days.push_back(d);
        series.similarity.push_back(intercluster_similarity(it == docs.end() ? kNoDocs : it->second, a, b));
    }
    series.burst.assign(series.days.size(), std::nullopt);
    series.flagged.assign(series.days.size(), false);
    return series;
}

void write_similarity_header(std::ostream& out) { out << "day,pair,s,valid,H,flagged\n"; }

void write_similarity_rows(std::ostream& out, const SimilaritySeries& series) {
    for (std::size_t t = 0; t < series.days.size(); ++t) {
        const auto& s = series.similarity[t];
        std::string h;
        if (t < series.burst.size() && series.burst[t]) h = csv::number(*series.burst[t]);
        const bool flagged = t < series.flagged.size() && series.flagged[t];
        out << format_day(series.days[t]) << ',' << series.pair_name() << ',' << (s ? csv::number(*s) : "") << ','
            << (s ? 1 : 0) << ',' << h << ',' << (flagged ? 1 : 0) << '\n';
    }
}

std::vector<SimilaritySeries> read_similarity(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "day") throw ParseError("expected day,pair,s,valid,H,flagged CSV");
    std::vector<SimilaritySeries> out;
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 6) throw ParseError("similarity row " + std::to_string(i) + " has wrong width");
        auto [it, inserted] = slot.try_emplace(row[1], out.size());
        if (inserted) {
            const auto dash = row[1].find('-', 1);
            if (dash == std::string::npos) throw ParseError("bad pair name " + row[1]);
            SimilaritySeries s;
            s.first = static_cast<ClusterLabel>(csv::to_int(row[1].substr(0, dash)));
            s.second = static_cast<ClusterLabel>(csv::to_int(row[1].substr(dash + 1)));
            out.push_back(std::move(s));
        }
        auto& s = out[it->second];
        s.days.push_back(parse_day(row[0]));
        s.similarity.push_back(row[3] == "1" ? std::optional<double>(csv::to_double(row[2])) : std::nullopt);
        s.burst.push_back(row[4].empty() ? std::nullopt : std::optional<double>(csv::to_double(row[4])));
        s.flagged.push_back(row[5] == "1");
    }
    return out;
}

}  // namespace sentinel
