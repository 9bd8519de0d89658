#pragma once

#include "sentinel/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel {

struct TweetRecord {
    std::string tweet_id;
    AccountId author_id;
    Timestamp created_at;
    std::string text;
    std::optional<AccountId> retweeted_author_id;
    std::vector<std::string> urls;

    bool is_retweet() const { return retweeted_author_id.has_value(); }
    Day day() const { return day_of(created_at); }

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct ParseReport {
    std::vector<TweetRecord> records;
    std::size_t skipped = 0;
};

/// Reads JSON Lines, one tweet per line. Blank lines are ignored; malformed
/// lines (bad JSON, missing fields, bad timestamps, duplicate ids) are skipped
/// and counted. Throws IoError on a failed stream and EmptyCorpusError when
/// nothing parses.
ParseReport parse_tweet_stream(std::istream& in);
ParseReport parse_tweet_file(const std::filesystem::path& path);

/// One JSON object, no trailing newline. Inverse of the line parser.
std::string serialize_tweet(const TweetRecord& record);
void write_tweet_stream(std::ostream& out, const std::vector<TweetRecord>& records);

/// ISO-8601 UTC, "YYYY-MM-DDTHH:MM:SSZ". Fractional seconds and "+00:00" are accepted on input.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);
Day parse_day(std::string_view text);  // "YYYY-MM-DD"
std::string format_day(Day d);

using DomainSet = std::set<std::string, std::less<>>;

/// Lowercased host with a leading "www." removed, or nullopt when the link
/// points at twitter.com (or a subdomain) or a listed shortener.
/// Throws ParseError when no host can be recovered.
std::optional<std::string> extract_domain(std::string_view url, const DomainSet& shorteners);

using Stopwords = std::set<std::string, std::less<>>;

struct TokenDoc {
    std::vector<std::string> tokens;
    TrigramCounts trigram_counts;

    std::int64_t trigram_total() const;
};

TokenDoc normalize_text(std::string_view text, const Stopwords& stopwords);

/// Trigrams over a contiguous token run.
TrigramCounts trigrams_of(const std::vector<std::string>& tokens);

/// Adds `from` into `into`. Concatenating tweets into a document never
/// creates trigrams across tweet boundaries; this is the only combination rule.
void accumulate(TrigramCounts& into, const TrigramCounts& from);

/// One entry per line; blank lines and lines starting with '#' are ignored.
/// Entries are trimmed and lowercased.
std::vector<std::string> read_word_list(std::istream& in);
std::vector<std::string> read_word_list(const std::filesystem::path& path);

Stopwords default_stopwords();
DomainSet default_shorteners();

}  // namespace sentinel
