#include "sentinel/error.hpp"
#include "sentinel/lsa.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <algorithm>
#include <random>

using namespace sentinel;
using namespace std::chrono;

namespace {

const Day kStart = Day{year{2020} / 9 / 1};

TweetDoc doc(const std::string& id, const std::string& text) { return {id, normalize_text(text, Stopwords{})}; }

std::string random_text(std::mt19937_64& rng, std::size_t words, int vocabulary = 400) {
    std::uniform_int_distribution<int> w(0, vocabulary - 1);
    std::string out;
    for (std::size_t i = 0; i < words; ++i) out += "w" + std::to_string(w(rng)) + " ";
    return out;
}

std::vector<std::string> ids_with_prefix(const std::vector<std::string>& ids, char prefix) {
    std::vector<std::string> out;
    for (const auto& id : ids)
        if (id.front() == prefix) out.push_back(id);
    return out;
}

}  // namespace

TEST_CASE("document term matrix") {
    const std::vector<TweetDoc> tweets = {doc("1", "a b c d"), doc("2", "x"), doc("3", "b c d b c d")};
    const auto m = document_term_matrix(tweets);
    CHECK(m.rows == std::vector<std::string>{"1", "3"});
    CHECK(m.terms.size() == 4);
    CHECK(m.counts.rows() == 2);
    CHECK(Mxd(m.counts).sum() == doctest::Approx(2 + 4));
}

TEST_CASE("gap selection") {
    Vxd v(5);
    v << 0.5, -0.5, 0.01, 0.02, 0.015;
    auto sel = select_above_gap(v, 50, 2.0);
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<Eigen::Index>{0, 1});
    CHECK(select_above_gap(v, 50, 30.0).empty());

    // A drop to zero is the sharpest possible.
    v(4) = 0.0;
    CHECK(select_above_gap(v, 50, 2.0).size() == 4);
    CHECK(select_above_gap(v, 4, 2.0).size() == 2);

    Vxd flat(4);
    flat << 0.5, 0.5, 0.5, 0.5;
    CHECK(select_above_gap(flat, 50, 2.0).empty());
    CHECK(select_above_gap(flat, 1, 2.0) == std::vector<Eigen::Index>{0});

    Vxd one(3);
    one << 0, 0.7, 0;
    CHECK(select_above_gap(one, 50, 2.0) == std::vector<Eigen::Index>{1});

    Eigen::VectorXf f(3);
    f << 1.f, 0.1f, 0.09f;
    CHECK(select_above_gap(f, 50, 2.0f) == std::vector<Eigen::Index>{0});
}

TEST_CASE("repeated tweet dominates the first vector") {
    std::mt19937_64 rng(71);
    std::vector<TweetDoc> tweets;
    for (int i = 0; i < 10; ++i) tweets.push_back(doc("c" + std::to_string(i), "the leaked memo shows covid was planned"));
    for (int i = 0; i < 10; ++i) tweets.push_back(doc("d" + std::to_string(i), random_text(rng, 8)));
    const auto ex = lsa_topical_tweets(tweets);
    REQUIRE(!ex.per_vector.empty());
    std::vector<std::string> copies;
    for (int i = 0; i < 10; ++i) copies.push_back("c" + std::to_string(i));
    CHECK(ex.per_vector[0] == copies);
    for (const auto& id : copies) CHECK(std::binary_search(ex.topical.begin(), ex.topical.end(), id));
    CHECK(ex.singular_values[0] == doctest::Approx(std::sqrt(10.0 * 5.0)));
}

TEST_CASE("single tweet is selected") {
    const std::vector<TweetDoc> tweets = {doc("only", "masks do not work at all")};
    const auto ex = lsa_topical_tweets(tweets);
    CHECK(ex.topical == std::vector<std::string>{"only"});
}

TEST_CASE("empty documents give an empty extraction") {
    const std::vector<TweetDoc> tweets = {doc("1", "hi"), doc("2", "")};
    const auto ex = lsa_topical_tweets(tweets);
    CHECK(ex.topical.empty());
    CHECK(ex.singular_values.empty());
    LsaParams zero;
    zero.k = 0;
    CHECK_THROWS_AS(lsa_topical_tweets(tweets, zero), ParameterError);
}

TEST_CASE("two disjoint blocks are separated") {
    std::vector<TweetDoc> tweets;
    for (int i = 0; i < 6; ++i) tweets.push_back(doc("a" + std::to_string(i), "alpha beta gamma delta"));
    for (int i = 0; i < 3; ++i) tweets.push_back(doc("b" + std::to_string(i), "one two three four five"));
    const auto ex = lsa_topical_tweets(tweets);
    REQUIRE(ex.per_vector.size() == 2);
    CHECK(ex.singular_values[0] == doctest::Approx(std::sqrt(12.0)));
    CHECK(ex.singular_values[1] == doctest::Approx(3.0));
    CHECK(ex.per_vector[0] == std::vector<std::string>{"a0", "a1", "a2", "a3", "a4", "a5"});
    CHECK(ex.per_vector[1] == std::vector<std::string>{"b0", "b1", "b2"});
}

TEST_CASE("singular values reconstruct the Frobenius norm and vectors are orthonormal") {
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<TweetDoc> tweets;
        for (int i = 0; i < 25; ++i) tweets.push_back(doc(std::to_string(i), random_text(rng, 6)));
        for (int i = 0; i < 5; ++i) tweets.push_back(doc("r" + std::to_string(i), "same words repeated here again"));
        const auto m = document_term_matrix(tweets);
        const auto svd = document_svd(m.counts, 1000);
        const double frob = Mxd(m.counts).squaredNorm();
        CHECK(svd.singular_values.squaredNorm() == doctest::Approx(frob).epsilon(1e-8));
        const Mxd gram = svd.document_vectors.transpose() * svd.document_vectors;
        CHECK((gram - Mxd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-8);
        for (Eigen::Index i = 1; i < svd.singular_values.size(); ++i)
            CHECK(svd.singular_values(i) <= svd.singular_values(i - 1));

        Eigen::JacobiSVD<Mxd> ref(Mxd(m.counts));
        const Eigen::Index top = std::min<Eigen::Index>(5, svd.singular_values.size());
        CHECK((svd.singular_values.head(top) - ref.singularValues().head(top)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("selection ignores tweet order") {
    std::mt19937_64 rng(73);
    std::vector<TweetDoc> tweets;
    for (int i = 0; i < 8; ++i) tweets.push_back(doc("v" + std::to_string(i), "vaccine changes your dna forever"));
    for (int i = 0; i < 4; ++i) tweets.push_back(doc("m" + std::to_string(i), "masks block oxygen says doctor"));
    for (int i = 0; i < 12; ++i) tweets.push_back(doc("x" + std::to_string(i), random_text(rng, 7)));
    const auto base = lsa_topical_tweets(tweets);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(tweets.begin(), tweets.end(), rng);
        const auto again = lsa_topical_tweets(tweets);
        CHECK(again.topical == base.topical);
        CHECK(again.per_vector == base.per_vector);
    }
    CHECK(ids_with_prefix(base.per_vector[0], 'v').size() == 8);
}

TEST_CASE("trigram jaccard") {
    const auto a = doc("a", "a b c d").doc.trigram_counts;
    const auto b = doc("b", "b c d e").doc.trigram_counts;
    CHECK(trigram_jaccard(a, a) == 1.0);
    CHECK(trigram_jaccard(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(trigram_jaccard({}, {}) == 0.0);
}

namespace {

// Two single-community clusters over 10 days. Days 0-8 carry unrelated chatter
// with a little overlap; day 9 adds `shared` copies of one message to both.
struct DriverFixture {
    SimilaritySeries series;
    std::map<CommunityLabel, CommunityDayDoc> burst_day;
    std::map<ClusterLabel, std::vector<CommunityLabel>> clusters{{0, {0}}, {1, {1}}};
};

DriverFixture driver_fixture(int shared, const std::string& shared_text) {
    std::mt19937_64 rng(74);
    DriverFixture fx;
    DayDocIndex docs;
    for (int d = 0; d < 10; ++d) {
        const Day day = kStart + days{d};
        for (CommunityLabel c : {0, 1}) {
            auto& doc_ = docs[day][c];
            doc_.community = c;
            doc_.day = day;
            for (int i = 0; i < 4; ++i)
                doc_.add(doc(std::to_string(c) + "_" + std::to_string(d) + "_" + std::to_string(i),
                             "common opener " + random_text(rng, 5, 30)));
        }
    }
    const Day last = kStart + days{9};
    for (int i = 0; i < shared; ++i)
        for (CommunityLabel c : {0, 1})
            docs[last][c].add(doc("s" + std::to_string(c) + "_" + std::to_string(i), shared_text));
    fx.series = similarity_series(docs, fx.clusters, 0, 1, {kStart, last});
    fx.burst_day = docs[last];
    return fx;
}

TopicalExtraction extraction_of(const std::map<CommunityLabel, CommunityDayDoc>& day, CommunityLabel c) {
    const std::vector<CommunityLabel> members = {c};
    return lsa_topical_tweets(cluster_tweets(day, members));
}

}  // namespace

TEST_CASE("removing a shared viral message confirms the driver") {
    auto fx = driver_fixture(6, "breaking the leaked memo proves the virus was planned");
    flag_days(fx.series);
    const Day last = kStart + days{9};
    REQUIRE(fx.series.flagged.back());
    const auto a = extraction_of(fx.burst_day, 0);
    const auto b = extraction_of(fx.burst_day, 1);
    const auto r = confirm_drivers(fx.series, last, fx.burst_day, fx.clusters, a, b);
    CHECK(r.common_first.size() == 6);
    CHECK(r.common_second.size() == 6);
    REQUIRE(r.recomputed_similarity.has_value());
    CHECK(*r.recomputed_similarity < *r.original_similarity);
    CHECK(r.is_driver);
    CHECK((!r.recomputed_burst || *r.recomputed_burst < 2.0));
}

TEST_CASE("disjoint topical sets leave H unchanged") {
    auto fx = driver_fixture(0, "");
    flag_days(fx.series);
    const Day last = kStart + days{9};
    TopicalExtraction a, b;
    a.topical = {"0_9_0"};
    b.topical = {"1_9_3"};
    const auto r = confirm_drivers(fx.series, last, fx.burst_day, fx.clusters, a, b, 0.99);
    CHECK(r.common_first.empty());
    CHECK_FALSE(r.is_driver);
    CHECK(r.recomputed_burst == r.original_burst);
    CHECK(r.recomputed_similarity == r.original_similarity);
}

TEST_CASE("removing every shared trigram leaves zero or invalid similarity") {
    std::map<CommunityLabel, CommunityDayDoc> day;
    day[0].add(doc("a1", "shared words go here"));
    day[0].add(doc("a2", "only left side text"));
    day[1].add(doc("b1", "shared words go here"));
    day[1].add(doc("b2", "right side text only"));
    const std::map<ClusterLabel, std::vector<CommunityLabel>> clusters = {{0, {0}}, {1, {1}}};
    SimilaritySeries series;
    series.first = 0;
    series.second = 1;
    series.days = {kStart};
    series.similarity = {intercluster_similarity(day, clusters.at(0), clusters.at(1))};
    TopicalExtraction a, b;
    a.topical = {"a1"};
    b.topical = {"b1"};
    const auto r = confirm_drivers(series, kStart, day, clusters, a, b);
    CHECK(r.common_first == std::vector<std::string>{"a1"});
    CHECK(*r.original_similarity > 0);
    CHECK((!r.recomputed_similarity || *r.recomputed_similarity == 0.0));
    CHECK_FALSE(r.recomputed_burst.has_value());
    CHECK(r.is_driver);
}

TEST_CASE("removing shared drivers lowers similarity on constructed fixtures") {
    std::mt19937_64 rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        std::map<CommunityLabel, CommunityDayDoc> day;
        const std::string viral = "viral " + random_text(rng, 6);
        for (CommunityLabel c : {0, 1}) {
            for (int i = 0; i < 5; ++i) day[c].add(doc(std::to_string(c) + "o" + std::to_string(i), random_text(rng, 6)));
            for (int i = 0; i < 3; ++i) day[c].add(doc(std::to_string(c) + "v" + std::to_string(i), viral));
        }
        const std::map<ClusterLabel, std::vector<CommunityLabel>> clusters = {{0, {0}}, {1, {1}}};
        SimilaritySeries series;
        series.first = 0;
        series.second = 1;
        series.days = {kStart};
        series.similarity = {intercluster_similarity(day, clusters.at(0), clusters.at(1))};
        const auto a = extraction_of(day, 0);
        const auto b = extraction_of(day, 1);
        const auto r = confirm_drivers(series, kStart, day, clusters, a, b);
        REQUIRE_FALSE(r.common_first.empty());
        REQUIRE(r.recomputed_similarity.has_value());
        CHECK(*r.recomputed_similarity < *r.original_similarity);
    }
}

TEST_CASE("unknown day is rejected") {
    auto fx = driver_fixture(0, "");
    CHECK_THROWS_AS(confirm_drivers(fx.series, kStart + days{40}, fx.burst_day, fx.clusters, {}, {}), ParameterError);
}
