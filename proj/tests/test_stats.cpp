#include "oracles.hpp"

#include "sentinel/error.hpp"
#include "sentinel/stats.hpp"

#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <random>
#include <sstream>

using namespace sentinel;

namespace {

ContingencyTable table_of(const std::vector<std::vector<std::int64_t>>& rows) {
    ContingencyTable t;
    t.counts.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.row_labels.push_back("r" + std::to_string(i));
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    for (std::size_t j = 0; j < rows[0].size(); ++j) t.column_labels.push_back("c" + std::to_string(j));
    return t;
}

std::vector<std::vector<double>> as_double(const ContingencyTable& t) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(t.counts.rows()));
    for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
        for (Eigen::Index j = 0; j < t.counts.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(static_cast<double>(t.counts(i, j)));
    return out;
}

// Misinformation / other tweets for the Left, Right and Far Right clusters.
ContingencyTable cluster_table() {
    auto t = table_of({{52, 361 - 52}, {325, 382 - 325}, {360, 408 - 360}});
    t.row_labels = {"Left", "Right", "Far Right"};
    t.column_labels = {"misinformation", "other"};
    return t;
}

CodingMatrix random_coding(std::mt19937_64& rng, std::size_t coders, std::size_t items, int categories, double missing) {
    std::uniform_int_distribution<int> label(0, categories - 1);
    std::uniform_real_distribution<double> u(0, 1);
    CodingMatrix m;
    for (std::size_t c = 0; c < coders; ++c) m.coders.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < items; ++i) m.items.push_back("i" + std::to_string(i));
    // Correlated coders: a shared truth plus per-coder noise.
    std::vector<int> truth(items);
    for (auto& t : truth) t = label(rng);
    m.labels.assign(coders, std::vector<std::optional<int>>(items));
    for (std::size_t c = 0; c < coders; ++c)
        for (std::size_t i = 0; i < items; ++i) {
            if (u(rng) < missing) continue;
            m.labels[c][i] = u(rng) < 0.7 ? truth[i] : label(rng);
        }
    return m;
}

}  // namespace

TEST_CASE("cluster-level misinformation table") {
    const auto r = chi_square(cluster_table());
    CHECK(r.df == 2);
    CHECK(r.n == 361 + 382 + 408);
    CHECK(std::abs(r.statistic - 563.3) <= 1.5);
    CHECK(r.statistic == doctest::Approx(oracle::chi_square(as_double(cluster_table()))).epsilon(1e-12));
    CHECK(r.p_value < 1e-100);

    const auto pair = chi_square(select_rows(cluster_table(), {"Right", "Far Right"}));
    CHECK(pair.df == 1);
    CHECK(pair.n == 790);
    CHECK(std::abs(pair.statistic - 1.7) <= 0.3);
    CHECK(pair.p_value == doctest::Approx(boost::math::gamma_q(0.5, pair.statistic / 2)).epsilon(1e-10));
}

TEST_CASE("identical row distributions give zero") {
    const auto r = chi_square(table_of({{10, 20, 30}, {20, 40, 60}}));
    CHECK(std::abs(r.statistic) <= 1e-12);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("degenerate tables") {
    CHECK_THROWS_AS(chi_square(table_of({{1, 0}, {2, 0}})), DegenerateError);
    CHECK_THROWS_AS(chi_square(table_of({{1, 2}})), DegenerateError);
    auto bad = table_of({{1, 2}, {3, 4}});
    bad.counts(0, 0) = -1;
    CHECK_THROWS_AS(chi_square(bad), ParameterError);
    CHECK_THROWS_AS(select_rows(cluster_table(), {"Centre"}), ParameterError);
}

TEST_CASE("chi-square permutation and scaling properties") {
    std::mt19937_64 rng(81);
    std::uniform_int_distribution<std::int64_t> cell(1, 60);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<std::int64_t>> rows(3, std::vector<std::int64_t>(4));
        for (auto& r : rows)
            for (auto& c : r) c = cell(rng);
        const auto base = chi_square(table_of(rows));
        CHECK(base.statistic == doctest::Approx(oracle::chi_square(as_double(table_of(rows)))).epsilon(1e-12));

        auto permuted = rows;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        std::vector<std::size_t> cols = {0, 1, 2, 3};
        std::shuffle(cols.begin(), cols.end(), rng);
        for (auto& r : permuted) {
            const auto copy = r;
            for (std::size_t j = 0; j < cols.size(); ++j) r[j] = copy[cols[j]];
        }
        CHECK(chi_square(table_of(permuted)).statistic == doctest::Approx(base.statistic).epsilon(1e-12));

        for (std::int64_t m : {2, 3, 7}) {
            auto scaled = rows;
            for (auto& r : scaled)
                for (auto& c : r) c *= m;
            const auto s = chi_square(table_of(scaled));
            CHECK(s.statistic == doctest::Approx(static_cast<double>(m) * base.statistic).epsilon(1e-12));
            CHECK(s.p_value <= base.p_value);
        }
    }
}

TEST_CASE("survival function matches a reference implementation") {
    for (double df : {1.0, 2.0, 3.0, 5.0, 10.0, 37.0, 120.0})
        for (double x : {0.01, 0.5, 1.0, 1.7, 3.84, 10.0, 40.0, 150.0, 563.3}) {
            const double ref = boost::math::gamma_q(df / 2, x / 2);
            const double got = chi_square_survival(x, df);
            CHECK(std::abs(got - ref) <= 1e-8 * std::max(1.0, ref));
            if (ref > 1e-300) CHECK(got == doctest::Approx(ref).epsilon(1e-8));
        }
    CHECK(chi_square_survival(0.0, 3.0) == 1.0);
    CHECK(regularized_gamma_q(2.5, 0.0) == 1.0);
    CHECK_THROWS_AS(regularized_gamma_q(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(chi_square_survival(1.0, 0.0), ParameterError);
}

TEST_CASE("contingency CSV round-trip") {
    std::ostringstream out;
    write_contingency(out, cluster_table());
    std::istringstream in(out.str());
    const auto back = read_contingency(in);
    CHECK(back.row_labels == cluster_table().row_labels);
    CHECK(back.column_labels == cluster_table().column_labels);
    CHECK(back.counts == cluster_table().counts);
}

TEST_CASE("alpha examples") {
    CodingMatrix perfect;
    perfect.labels.assign(4, {0, 1, 1, 2, 0, 1});
    CHECK(krippendorff_alpha(perfect) == 1.0);

    CodingMatrix opposed;
    opposed.labels = {{0, 1}, {1, 0}};
    CHECK(krippendorff_alpha(opposed) < 0.0);

    CodingMatrix single_category;
    single_category.labels.assign(3, {1, 1, 1});
    CHECK(krippendorff_alpha(single_category) == 1.0);

    CodingMatrix lonely;
    lonely.labels = {{0, std::nullopt}, {std::nullopt, 1}};
    CHECK_THROWS_AS(krippendorff_alpha(lonely), UndefinedError);

    CodingMatrix one_coder;
    one_coder.labels = {{0, 1}};
    CHECK_THROWS_AS(krippendorff_alpha(one_coder), ParameterError);
}

TEST_CASE("alpha matches pairable-value enumeration") {
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_coding(rng, 4, 200, 2, 0.0);
        CHECK(std::abs(krippendorff_alpha(m) - oracle::krippendorff_alpha(m.labels)) <= 1e-9);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_coding(rng, 5, 60, 4, 0.3);
        CHECK(std::abs(krippendorff_alpha(m) - oracle::krippendorff_alpha(m.labels)) <= 1e-9);
    }
}

TEST_CASE("alpha is invariant to category relabeling") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_coding(rng, 3, 80, 3, 0.2);
        const double base = krippendorff_alpha(m);
        for (auto& row : m.labels)
            for (auto& v : row)
                if (v) *v = 100 - 7 * *v;
        CHECK(krippendorff_alpha(m) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("coding matrix CSV with blanks") {
    std::istringstream in("coder,t1,t2,t3\nann,1,,0\nbob,1,0,\n");
    const auto m = read_coding_matrix(in);
    CHECK(m.coders == std::vector<std::string>{"ann", "bob"});
    CHECK(m.items.size() == 3);
    CHECK(m.labels[0][1] == std::nullopt);
    CHECK(m.labels[1][1] == 0);
    CHECK(krippendorff_alpha(m) == 1.0);
}
