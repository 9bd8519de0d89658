#pragma once

#include "sentinel/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sentinel {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// P(X > x) for X ~ chi-square with `df` degrees of freedom.
double chi_square_survival(double x, double df);

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    MatrixX<std::int64_t> counts;

    /// Checks shape, label counts and nonnegativity.
    void validate() const;
    std::int64_t total() const { return counts.sum(); }
};

struct ChiSquareResult {
    double statistic = 0;
    int df = 0;
    double p_value = 1;
    std::int64_t n = 0;
};

/// Pearson test of homogeneity. Throws DegenerateError when a row or column
/// total is zero or the table is smaller than 2x2.
ChiSquareResult chi_square(const ContingencyTable& table);

/// Keeps the listed rows (by label), in the given order.
ContingencyTable select_rows(const ContingencyTable& table, const std::vector<std::string>& labels);

/// CSV with header "label,<column labels>" and one row per table row.
ContingencyTable read_contingency(std::istream& in);
ContingencyTable load_contingency(const std::filesystem::path& path);
void write_contingency(std::ostream& out, const ContingencyTable& table);

/// Coders x items nominal labels; nullopt marks a missing label.
struct CodingMatrix {
    std::vector<std::string> coders;
    std::vector<std::string> items;
    std::vector<std::vector<std::optional<int>>> labels;

    std::size_t coder_count() const { return labels.size(); }
    std::size_t item_count() const { return labels.empty() ? 0 : labels.front().size(); }
};

/// Nominal Krippendorff alpha from the coincidence matrix. Items labeled by
/// fewer than two coders are ignored. Throws UndefinedError when fewer than
/// two pairable values remain. A single category used throughout gives 1.
double krippendorff_alpha(const CodingMatrix& matrix);

/// CSV: header "coder,<item ids>", one row per coder, blank cell = missing.
CodingMatrix read_coding_matrix(std::istream& in);
CodingMatrix load_coding_matrix(const std::filesystem::path& path);

}  // namespace sentinel
