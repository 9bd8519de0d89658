#include "sentinel/ingest.hpp"

#include "sentinel/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace sentinel {

namespace {

using nlohmann::json;

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (lower(s[i]) != prefix[i]) return false;
    return true;
}

template <typename Int>
Int read_int(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) throw ParseError("timestamp too short: " + std::string(text));
    Int value{};
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len)
        throw ParseError("bad digits in timestamp: " + std::string(text));
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c)
        throw ParseError("malformed timestamp: " + std::string(text));
}

TweetRecord record_from_json(const json& j) {
    TweetRecord r;
    r.tweet_id = j.at("tweet_id").get<std::string>();
    r.author_id = j.at("author_id").get<std::string>();
    r.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    r.text = j.at("text").get<std::string>();
    if (auto it = j.find("retweeted_author_id"); it != j.end() && !it->is_null()) {
        r.retweeted_author_id = it->get<std::string>();
        if (r.retweeted_author_id->empty()) throw ParseError("empty retweeted_author_id");
    }
    if (auto it = j.find("urls"); it != j.end() && !it->is_null()) {
        for (const auto& u : *it) r.urls.push_back(u.get<std::string>());
    }
    if (r.tweet_id.empty() || r.author_id.empty()) throw ParseError("empty identifier");
    return r;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    text = trim(text);
    const int y = read_int<int>(text, 0, 4);
    expect_char(text, 4, '-');
    const unsigned mo = read_int<unsigned>(text, 5, 2);
    expect_char(text, 7, '-');
    const unsigned d = read_int<unsigned>(text, 8, 2);
    if (text.size() < 11 || (text[10] != 'T' && text[10] != ' '))
        throw ParseError("malformed timestamp: " + std::string(text));
    const int hh = read_int<int>(text, 11, 2);
    expect_char(text, 13, ':');
    const int mm = read_int<int>(text, 14, 2);
    expect_char(text, 16, ':');
    const int ss = read_int<int>(text, 17, 2);
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    const std::string_view zone = text.substr(pos);
    if (zone != "Z" && zone != "+00:00" && zone != "")
        throw ParseError("timestamp must be UTC: " + std::string(text));

    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
        throw ParseError("timestamp out of range: " + std::string(text));
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto dp = floor<days>(t);
    const year_month_day ymd{dp};
    const hh_mm_ss hms{t - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Day parse_day(std::string_view text) {
    using namespace std::chrono;
    text = trim(text);
    if (text.size() != 10) throw ParseError("expected YYYY-MM-DD: " + std::string(text));
    const int y = read_int<int>(text, 0, 4);
    expect_char(text, 4, '-');
    const unsigned mo = read_int<unsigned>(text, 5, 2);
    expect_char(text, 7, '-');
    const unsigned d = read_int<unsigned>(text, 8, 2);
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw ParseError("invalid date: " + std::string(text));
    return sys_days{ymd};
}

std::string format_day(Day d) {
    using namespace std::chrono;
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

ParseReport parse_tweet_stream(std::istream& in) {
    if (!in) throw IoError("tweet stream is not readable");
    ParseReport report;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        try {
            auto record = record_from_json(json::parse(line));
            if (!seen.insert(record.tweet_id).second) {
                ++report.skipped;
                continue;
            }
            report.records.push_back(std::move(record));
        } catch (const json::exception&) {
            ++report.skipped;
        } catch (const ParseError&) {
            ++report.skipped;
        }
    }
    if (in.bad()) throw IoError("read failure on tweet stream");
    if (report.records.empty())
        throw EmptyCorpusError("no parseable tweet records (" + std::to_string(report.skipped) +
                               " malformed lines)");
    return report;
}

ParseReport parse_tweet_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_tweet_stream(in);
}

std::string serialize_tweet(const TweetRecord& r) {
    json j;
    j["tweet_id"] = r.tweet_id;
    j["author_id"] = r.author_id;
    j["created_at"] = format_timestamp(r.created_at);
    j["text"] = r.text;
    j["retweeted_author_id"] = r.retweeted_author_id ? json(*r.retweeted_author_id) : json(nullptr);
    j["urls"] = r.urls;
    return j.dump();
}

void write_tweet_stream(std::ostream& out, const std::vector<TweetRecord>& records) {
    for (const auto& r : records) out << serialize_tweet(r) << '\n';
}

std::optional<std::string> extract_domain(std::string_view url, const DomainSet& shorteners) {
    std::string_view rest = trim(url);
    if (const auto scheme_end = rest.find("://"); scheme_end != std::string_view::npos) {
        const auto scheme = rest.substr(0, scheme_end);
        if (scheme.empty() || !std::all_of(scheme.begin(), scheme.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
            }))
            throw ParseError("bad URL scheme: " + std::string(url));
        rest = rest.substr(scheme_end + 3);
    }
    rest = rest.substr(0, rest.find_first_of("/?#"));
    if (const auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
        const auto port = rest.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("bad port in URL: " + std::string(url));
        rest = rest.substr(0, colon);
    }
    std::string host = to_lower(rest);
    while (!host.empty() && host.back() == '.') host.pop_back();
    while (host.rfind("www.", 0) == 0) host.erase(0, 4);

    const bool chars_ok = std::all_of(host.begin(), host.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
    });
    if (host.empty() || !chars_ok || host.find('.') == std::string::npos || host.front() == '.' ||
        host.find("..") != std::string::npos)
        throw ParseError("no host in URL: " + std::string(url));

    if (host == "twitter.com" || (host.size() > 12 && host.ends_with(".twitter.com"))) return std::nullopt;
    if (shorteners.contains(host)) return std::nullopt;
    return host;
}

std::int64_t TokenDoc::trigram_total() const {
    std::int64_t total = 0;
    for (const auto& [_, c] : trigram_counts) total += c;
    return total;
}

TrigramCounts trigrams_of(const std::vector<std::string>& tokens) {
    TrigramCounts counts;
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
        std::string key;
        key.reserve(tokens[i].size() + tokens[i + 1].size() + tokens[i + 2].size() + 2);
        key.append(tokens[i]).append(" ").append(tokens[i + 1]).append(" ").append(tokens[i + 2]);
        ++counts[key];
    }
    return counts;
}

void accumulate(TrigramCounts& into, const TrigramCounts& from) {
    for (const auto& [g, c] : from) into[g] += c;
}

TokenDoc normalize_text(std::string_view text, const Stopwords& stopwords) {
    // Drop whitespace-delimited chunks that are links, and @handles wherever they occur.
    std::string cleaned;
    cleaned.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            cleaned.push_back(' ');
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
        const std::string_view chunk = text.substr(i, end - i);
        if (chunk.find("://") == std::string_view::npos && !starts_with_icase(chunk, "www.")) {
            for (std::size_t k = 0; k < chunk.size(); ++k) {
                if (chunk[k] == '@') {
                    ++k;
                    while (k < chunk.size() &&
                           (std::isalnum(static_cast<unsigned char>(chunk[k])) || chunk[k] == '_'))
                        ++k;
                    --k;
                    cleaned.push_back(' ');
                    continue;
                }
                cleaned.push_back(chunk[k]);
            }
        }
        i = end;
    }

    TokenDoc doc;
    std::string token;
    auto flush = [&] {
        if (!token.empty() && !stopwords.contains(token)) doc.tokens.push_back(token);
        token.clear();
    };
    for (char c : cleaned) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            token.push_back(lower(c));
        } else {
            flush();
        }
    }
    flush();
    doc.trigram_counts = trigrams_of(doc.tokens);
    return doc;
}

std::vector<std::string> read_word_list(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        words.push_back(to_lower(t));
    }
    return words;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_word_list(in);
}

Stopwords default_stopwords() {
    static const char* const kWords[] = {
#include "default_stopwords.inc"
    };
    return Stopwords(std::begin(kWords), std::end(kWords));
}

DomainSet default_shorteners() {
    return {"bit.ly", "t.co",   "tinyurl.com", "ow.ly",   "buff.ly", "goo.gl",     "dlvr.it",
            "ift.tt", "is.gd",  "trib.al",     "fb.me",   "lnkd.in", "wp.me",      "tiny.cc",
            "bit.do", "j.mp",   "cutt.ly",     "rebrand.ly", "shorturl.at", "po.st", "dld.bz"};
}

}  // namespace sentinel
