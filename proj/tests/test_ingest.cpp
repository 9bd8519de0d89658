#include "sentinel/error.hpp"
#include "sentinel/ingest.hpp"

#include <doctest.h>

#include <random>
#include <regex>
#include <sstream>

using namespace sentinel;

namespace {

std::string line(const std::string& id, const std::string& author, const std::string& text) {
    return R"({"tweet_id":")" + id + R"(","author_id":")" + author + R"(","created_at":"2020-09-01T10:00:00Z","text":")" +
           text + R"(","retweeted_author_id":null,"urls":[]})";
}

TweetRecord random_record(std::mt19937_64& rng, std::size_t i) {
    static const std::vector<std::string> words = {"mask", "vaccine", "a \"quoted\" word", "ünïcode", "tab\there",
                                                   "new\nline", "#tag", "@who", "back\\slash"};
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::int64_t> secs(1577836800, 1609459199);
    TweetRecord r;
    r.tweet_id = std::to_string(1000000 + i);
    r.author_id = "u" + std::to_string(pick(rng));
    r.created_at = Timestamp{std::chrono::seconds{secs(rng)}};
    for (int w = 0; w < 6; ++w) r.text += words[pick(rng)] + " ";
    if (coin(rng)) r.retweeted_author_id = "u" + std::to_string(pick(rng));
    for (int u = coin(rng) + coin(rng); u > 0; --u) r.urls.push_back("https://site" + std::to_string(pick(rng)) + ".com/p");
    return r;
}

}  // namespace

TEST_CASE("three well-formed lines parse") {
    std::istringstream in(line("1", "a", "x") + "\n" + line("2", "b", "y") + "\n" + line("3", "c", "z") + "\n");
    const auto report = parse_tweet_stream(in);
    CHECK(report.records.size() == 3);
    CHECK(report.skipped == 0);
    CHECK(report.records[1].author_id == "b");
    CHECK_FALSE(report.records[1].is_retweet());
}

TEST_CASE("truncated middle line is skipped") {
    const std::string middle = line("2", "b", "y");
    std::istringstream in(line("1", "a", "x") + "\n" + middle.substr(0, middle.size() / 2) + "\n" + line("3", "c", "z"));
    const auto report = parse_tweet_stream(in);
    CHECK(report.records.size() == 2);
    CHECK(report.skipped == 1);
}

TEST_CASE("duplicate ids and bad timestamps are skipped") {
    std::string bad_time = line("9", "a", "x");
    bad_time.replace(bad_time.find("2020-09-01"), 10, "2020-13-01");
    std::istringstream in(line("1", "a", "x") + "\n" + line("1", "b", "y") + "\n" + bad_time + "\n\n");
    const auto report = parse_tweet_stream(in);
    CHECK(report.records.size() == 1);
    CHECK(report.skipped == 2);
}

TEST_CASE("empty corpus is an error") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_tweet_stream(empty), EmptyCorpusError);
    std::istringstream garbage("not json\n{\"tweet_id\":1}\n");
    CHECK_THROWS_AS(parse_tweet_stream(garbage), EmptyCorpusError);
}

TEST_CASE("1000 generated records round-trip") {
    std::mt19937_64 rng(11);
    std::vector<TweetRecord> records;
    for (std::size_t i = 0; i < 1000; ++i) records.push_back(random_record(rng, i));
    std::ostringstream out;
    write_tweet_stream(out, records);
    std::istringstream in(out.str());
    const auto first = parse_tweet_stream(in);
    CHECK(first.skipped == 0);
    CHECK(first.records == records);

    std::ostringstream again;
    write_tweet_stream(again, first.records);
    CHECK(again.str() == out.str());
}

TEST_CASE("timestamps") {
    const auto t = parse_timestamp("2020-10-04T04:00:00Z");
    CHECK(format_timestamp(t) == "2020-10-04T04:00:00Z");
    CHECK(parse_timestamp("2020-10-04T04:00:00.250+00:00") == t);
    CHECK(format_day(day_of(t)) == "2020-10-04");
    CHECK(parse_day("2020-10-04") == day_of(t));
    CHECK_THROWS_AS(parse_timestamp("2020-10-04"), ParseError);
}

TEST_CASE("extract_domain") {
    const auto shorteners = default_shorteners();
    CHECK(extract_domain("https://www.foxnews.com/article", shorteners) == "foxnews.com");
    CHECK_FALSE(extract_domain("https://twitter.com/x/status/1", shorteners).has_value());
    CHECK_FALSE(extract_domain("https://mobile.twitter.com/x", shorteners).has_value());
    CHECK_FALSE(extract_domain("http://bit.ly/abc", shorteners).has_value());
    CHECK(extract_domain("HTTP://News.Example.ORG:8080/a?b=c#d", shorteners) == "news.example.org");
    CHECK(extract_domain("https://user@cdc.gov", shorteners) == "cdc.gov");
    CHECK(extract_domain("nytimes.com/x", shorteners) == "nytimes.com");
    CHECK_THROWS_AS(extract_domain("", shorteners), ParseError);
    CHECK_THROWS_AS(extract_domain("https:///path", shorteners), ParseError);
}

TEST_CASE("extract_domain is idempotent on its output") {
    const DomainSet none;
    for (const char* url : {"https://www.foxnews.com/article", "http://a.b.c.example.co.uk/x", "https://CNN.com",
                            "https://www.www.odd.net/"}) {
        const auto d = extract_domain(url, none);
        REQUIRE(d.has_value());
        CHECK(extract_domain(*d, none) == d);
    }
}

TEST_CASE("normalize_text examples") {
    const auto doc = normalize_text("The CDC quietly updated", Stopwords{"the"});
    CHECK(doc.tokens == std::vector<std::string>{"cdc", "quietly", "updated"});
    CHECK(doc.trigram_counts.size() == 1);
    CHECK(doc.trigram_counts.at("cdc quietly updated") == 1);

    const auto removed = normalize_text("@user http://a.b c", Stopwords{});
    CHECK(removed.tokens == std::vector<std::string>{"c"});
    CHECK(removed.trigram_counts.empty());
    CHECK(normalize_text("", Stopwords{}).tokens.empty());

    std::string fifty;
    for (int i = 0; i < 50; ++i) fifty += "w" + std::to_string(i % 7) + " ";
    const auto long_doc = normalize_text(fifty, Stopwords{});
    CHECK(long_doc.tokens.size() == 50);
    CHECK(long_doc.trigram_total() == 48);
}

TEST_CASE("normalize_text never leaves mentions, urls or stopwords") {
    const Stopwords stop{"the", "and", "is"};
    const std::regex mention("^@");
    const std::regex url("(https?:|www\\.|://)");
    std::mt19937_64 rng(5);
    const std::vector<std::string> pieces = {"@a",   "@b_c",      "http://x.y/z", "https://t.co/q", "www.site.com",
                                             "the",  "And",       "IS",           "mask",           "#Covid19",
                                             "😷",   "don't",     "x@y",          "--",             "RT"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        for (int w = 0; w < 12; ++w) text += pieces[pick(rng)] + (w % 3 ? " " : "  ");
        const auto doc = normalize_text(text, stop);
        for (const auto& tok : doc.tokens) {
            CHECK_FALSE(std::regex_search(tok, mention));
            CHECK_FALSE(std::regex_search(tok, url));
            CHECK_FALSE(stop.contains(tok));
            CHECK(tok.find(' ') == std::string::npos);
        }
        CHECK(doc.trigram_total() == std::max<std::int64_t>(0, static_cast<std::int64_t>(doc.tokens.size()) - 2));
    }
}

TEST_CASE("concatenated documents add per-tweet trigrams") {
    const Stopwords none;
    const auto a = normalize_text("one two three four", none);
    const auto b = normalize_text("five six seven", none);
    TrigramCounts combined;
    accumulate(combined, a.trigram_counts);
    accumulate(combined, b.trigram_counts);
    CHECK(combined.size() == 3);
    CHECK_FALSE(combined.contains("four five six"));
    auto tokens = a.tokens;
    tokens.insert(tokens.end(), b.tokens.begin(), b.tokens.end());
    CHECK(trigrams_of(tokens).size() == 5);
}

TEST_CASE("word lists") {
    std::istringstream in("# comment\n  The \n\nAND\n");
    CHECK(read_word_list(in) == std::vector<std::string>{"the", "and"});
    CHECK(default_stopwords().contains("the"));
    CHECK(default_shorteners().contains("bit.ly"));
}
