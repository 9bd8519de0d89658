#include "sentinel/stats.hpp"

#include "sentinel/csv.hpp"
#include "sentinel/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

namespace sentinel {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEpsilon = 1e-15;

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0) || x < 0 || std::isnan(x)) throw ParameterError("regularized gamma needs a > 0 and x >= 0");
    if (x == 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_square_survival(double x, double df) {
    if (!(df > 0)) throw ParameterError("chi-square needs positive degrees of freedom");
    if (x <= 0) return 1.0;
    return regularized_gamma_q(df / 2.0, x / 2.0);
}

void ContingencyTable::validate() const {
    if (counts.rows() != static_cast<Eigen::Index>(row_labels.size()) ||
        counts.cols() != static_cast<Eigen::Index>(column_labels.size()))
        throw ParameterError("contingency table labels do not match its shape");
    if ((counts.array() < 0).any()) throw ParameterError("contingency table has a negative count");
}

ChiSquareResult chi_square(const ContingencyTable& table) {
    table.validate();
    if (table.counts.rows() < 2 || table.counts.cols() < 2) throw DegenerateError("chi-square needs at least a 2x2 table");
    const Mxd observed = table.counts.cast<double>();
    const Vxd rows = observed.rowwise().sum();
    const Eigen::RowVectorXd cols = observed.colwise().sum();
    if ((rows.array() == 0).any() || (cols.array() == 0).any())
        throw DegenerateError("contingency table has a zero marginal");

    const double n = rows.sum();
    const Mxd expected = rows * cols / n;
    ChiSquareResult r;
    r.n = table.total();
    r.statistic = ((observed - expected).array().square() / expected.array()).sum();
    r.df = static_cast<int>((table.counts.rows() - 1) * (table.counts.cols() - 1));
    r.p_value = chi_square_survival(r.statistic, r.df);
    return r;
}

ContingencyTable select_rows(const ContingencyTable& table, const std::vector<std::string>& labels) {
    ContingencyTable out;
    out.column_labels = table.column_labels;
    out.counts.resize(static_cast<Eigen::Index>(labels.size()), table.counts.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::find(table.row_labels.begin(), table.row_labels.end(), labels[i]);
        if (it == table.row_labels.end()) throw ParameterError("no table row labelled " + labels[i]);
        out.row_labels.push_back(labels[i]);
        out.counts.row(static_cast<Eigen::Index>(i)) = table.counts.row(it - table.row_labels.begin());
    }
    return out;
}

ContingencyTable read_contingency(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.size() < 2 || rows[0].size() < 2) throw ParseError("contingency CSV needs a header and data rows");
    ContingencyTable t;
    t.column_labels.assign(rows[0].begin() + 1, rows[0].end());
    t.counts.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(t.column_labels.size()));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ParseError("contingency row " + std::to_string(i) + " has wrong width");
        t.row_labels.push_back(rows[i][0]);
        for (std::size_t j = 1; j < rows[i].size(); ++j)
            t.counts(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = csv::to_int(rows[i][j]);
    }
    t.validate();
    return t;
}

ContingencyTable load_contingency(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_contingency(in);
}

void write_contingency(std::ostream& out, const ContingencyTable& table) {
    std::vector<std::string> header{"label"};
    header.insert(header.end(), table.column_labels.begin(), table.column_labels.end());
    out << csv::join(header) << '\n';
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        std::vector<std::string> row{table.row_labels[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) row.push_back(std::to_string(table.counts(i, j)));
        out << csv::join(row) << '\n';
    }
}

double krippendorff_alpha(const CodingMatrix& matrix) {
    if (matrix.coder_count() < 2) throw ParameterError("Krippendorff alpha needs at least two coders");
    const auto items = matrix.item_count();
    for (const auto& row : matrix.labels)
        if (row.size() != items) throw ParameterError("coding matrix rows differ in length");

    std::map<int, Eigen::Index> category;
    for (const auto& row : matrix.labels)
        for (const auto& v : row)
            if (v) category.try_emplace(*v, 0);
    Eigen::Index next = 0;
    for (auto& [_, idx] : category) idx = next++;

    Mxd coincidence = Mxd::Zero(next, next);
    std::vector<Eigen::Index> values;
    for (std::size_t u = 0; u < items; ++u) {
        values.clear();
        for (const auto& row : matrix.labels)
            if (row[u]) values.push_back(category.at(*row[u]));
        if (values.size() < 2) continue;
        const double weight = 1.0 / static_cast<double>(values.size() - 1);
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = 0; j < values.size(); ++j)
                if (i != j) coincidence(values[i], values[j]) += weight;
    }

    const Vxd marginals = coincidence.rowwise().sum();
    const double n = marginals.sum();
    if (n < 2) throw UndefinedError("Krippendorff alpha needs at least two pairable values");
    const double observed = coincidence.sum() - coincidence.trace();
    const double expected = (n * n - marginals.squaredNorm()) / (n - 1);
    if (expected == 0) return 1.0;
    return 1.0 - observed / expected;
}

CodingMatrix read_coding_matrix(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.size() < 2 || rows[0].size() < 2) throw ParseError("coding CSV needs a header and coder rows");
    CodingMatrix m;
    m.items.assign(rows[0].begin() + 1, rows[0].end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ParseError("coding row " + std::to_string(i) + " has wrong width");
        m.coders.push_back(rows[i][0]);
        auto& labels = m.labels.emplace_back();
        for (std::size_t j = 1; j < rows[i].size(); ++j)
            labels.push_back(rows[i][j].empty() ? std::nullopt
                                                : std::optional<int>(static_cast<int>(csv::to_int(rows[i][j]))));
    }
    return m;
}

CodingMatrix load_coding_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_coding_matrix(in);
}

}  // namespace sentinel
