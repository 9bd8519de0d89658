#include "oracles.hpp"

#include "sentinel/error.hpp"
#include "sentinel/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <sstream>

using namespace sentinel;

namespace {

TweetRecord retweet(const std::string& id, const std::string& retweeter, const std::string& source) {
    TweetRecord r;
    r.tweet_id = id;
    r.author_id = retweeter;
    r.created_at = parse_timestamp("2020-09-01T00:00:00Z");
    r.text = "RT";
    r.retweeted_author_id = source;
    return r;
}

TweetRecord original(const std::string& id, const std::string& author) {
    TweetRecord r;
    r.tweet_id = id;
    r.author_id = author;
    r.created_at = parse_timestamp("2020-09-01T00:00:00Z");
    r.text = "hello";
    return r;
}

std::vector<TweetRecord> random_records(std::mt19937_64& rng, std::size_t nodes, std::size_t count) {
    std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
    std::vector<TweetRecord> records;
    for (std::size_t i = 0; i < count; ++i) {
        const auto a = pick(rng), b = pick(rng);
        records.push_back(retweet("t" + std::to_string(i), oracle::node_name(a), oracle::node_name(b)));
    }
    return records;
}

// Weak connectivity by breadth-first search over undirected arcs.
bool weakly_connected(const RetweetGraph& g) {
    if (g.node_count() == 0) return false;
    std::vector<std::vector<std::size_t>> adj(g.node_count());
    for (const auto& a : g.arcs()) {
        adj[a.source].push_back(a.retweeter);
        adj[a.retweeter].push_back(a.source);
    }
    std::vector<bool> seen(g.node_count(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                q.push(v);
            }
    }
    return reached == g.node_count();
}

}  // namespace

TEST_CASE("repeated retweets add weight") {
    const std::vector<TweetRecord> records = {retweet("1", "j", "i"), retweet("2", "j", "i"), original("3", "k")};
    const auto g = build_retweet_graph(records);
    CHECK(g.node_count() == 2);
    REQUIRE(g.arc_count() == 1);
    CHECK(g.id(g.arcs()[0].source) == "i");
    CHECK(g.id(g.arcs()[0].retweeter) == "j");
    CHECK(g.arcs()[0].weight == 2);
    CHECK(g.total_weight() == 2);
    CHECK(g.in_degree(*g.index_of("i")) == 2);
    CHECK(g.out_degree(*g.index_of("j")) == 2);
    CHECK_FALSE(g.index_of("k").has_value());
}

TEST_CASE("self-retweets are dropped") {
    const std::vector<TweetRecord> records = {retweet("1", "i", "i")};
    const auto g = build_retweet_graph(records);
    CHECK(g.arc_count() == 0);
    CHECK(g.total_weight() == 0);
    CHECK_THROWS_AS(largest_component(g), EmptyGraphError);
}

TEST_CASE("total weight equals retweet event count") {
    std::mt19937_64 rng(3);
    auto records = random_records(rng, 400, 87030);
    std::size_t non_self = 0;
    for (const auto& r : records) non_self += r.author_id != *r.retweeted_author_id;
    const auto g = build_retweet_graph(records);
    CHECK(g.total_weight() == static_cast<std::int64_t>(non_self));
    const auto lc = largest_component(g);
    CHECK(lc.total_weight() == static_cast<std::int64_t>(non_self));
}

TEST_CASE("largest component picks the bigger one") {
    std::vector<TweetRecord> records;
    for (int i = 1; i < 5; ++i) records.push_back(retweet("a" + std::to_string(i), "p" + std::to_string(i), "p0"));
    records.push_back(retweet("b1", "q1", "q0"));
    records.push_back(retweet("b2", "q2", "q1"));
    const auto g = build_retweet_graph(records);
    CHECK(weak_components(g).size() == 2);
    const auto lc = largest_component(g);
    CHECK(lc.node_count() == 5);
    CHECK(lc.ids() == std::vector<AccountId>{"p0", "p1", "p2", "p3", "p4"});

    const auto again = largest_component(lc);
    CHECK(again.ids() == lc.ids());
    CHECK(std::equal(again.arcs().begin(), again.arcs().end(), lc.arcs().begin(), lc.arcs().end()));
}

TEST_CASE("star plus dyad keeps the star") {
    std::vector<TweetRecord> records;
    for (int i = 1; i <= 4; ++i) records.push_back(retweet("s" + std::to_string(i), "leaf" + std::to_string(i), "center"));
    records.push_back(retweet("d", "y", "x"));
    const auto lc = largest_component(build_retweet_graph(records));
    CHECK(lc.node_count() == 5);
    CHECK(lc.index_of("center").has_value());
    CHECK_FALSE(lc.index_of("x").has_value());
    CHECK(lc.in_degree(*lc.index_of("center")) == 4);
}

TEST_CASE("degree sums equal total weight") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = build_retweet_graph(random_records(rng, 30, 120));
        std::int64_t in = 0, out = 0;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            in += g.in_degree(v);
            out += g.out_degree(v);
        }
        CHECK(in == g.total_weight());
        CHECK(out == g.total_weight());
        for (const auto& a : g.arcs()) {
            CHECK(a.source != a.retweeter);
            CHECK(a.weight >= 1);
        }
    }
}

TEST_CASE("largest component is weakly connected and maximal") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = build_retweet_graph(random_records(rng, 60, 45));
        const auto lc = largest_component(g);
        CHECK(weakly_connected(lc));
        for (const auto& comp : weak_components(g)) CHECK(comp.size() <= lc.node_count());
    }
}

TEST_CASE("graph is invariant to record order") {
    std::mt19937_64 rng(29);
    auto records = random_records(rng, 40, 300);
    const auto g = build_retweet_graph(records);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(records.begin(), records.end(), rng);
        const auto h = build_retweet_graph(records);
        CHECK(h.ids() == g.ids());
        CHECK(std::equal(h.arcs().begin(), h.arcs().end(), g.arcs().begin(), g.arcs().end()));
    }
}

TEST_CASE("edge list round-trip") {
    std::mt19937_64 rng(31);
    const auto g = build_retweet_graph(random_records(rng, 25, 100));
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const auto h = read_edge_list(in);
    CHECK(h.ids() == g.ids());
    CHECK(std::equal(h.arcs().begin(), h.arcs().end(), g.arcs().begin(), g.arcs().end()));
}

TEST_CASE("arc weights must be positive") {
    CHECK_THROWS_AS(RetweetGraph({"a", "b"}, {{"a", "b", 0}}), ParameterError);
}
