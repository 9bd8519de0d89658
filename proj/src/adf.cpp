#include "sentinel/adf.hpp"

#include <array>

namespace sentinel {

namespace {

struct CriticalRow {
    double nobs;  // 0 marks the asymptotic row
    std::array<double, 3> value;  // 1%, 5%, 10%
};

// Dickey-Fuller tau_mu (constant, no trend) finite-sample critical values.
constexpr std::array<CriticalRow, 6> kTable{{
    {25, {-3.75, -3.00, -2.63}},
    {50, {-3.58, -2.93, -2.60}},
    {100, {-3.51, -2.89, -2.58}},
    {250, {-3.46, -2.88, -2.57}},
    {500, {-3.44, -2.87, -2.57}},
    {0, {-3.43, -2.86, -2.57}},
}};

}  // namespace

Significance parse_significance(std::string_view text) {
    if (text == "1%" || text == "0.01") return Significance::OnePercent;
    if (text == "5%" || text == "0.05") return Significance::FivePercent;
    if (text == "10%" || text == "0.1" || text == "0.10") return Significance::TenPercent;
    throw ParseError("significance must be 1%, 5% or 10%: " + std::string(text));
}

std::string to_string(Significance level) {
    switch (level) {
        case Significance::OnePercent: return "1%";
        case Significance::FivePercent: return "5%";
        case Significance::TenPercent: return "10%";
    }
    return "?";
}

double df_critical_value(std::size_t nobs, Significance level) {
    const auto col = static_cast<std::size_t>(level);
    const double n = static_cast<double>(nobs);
    if (n <= kTable[0].nobs) return kTable[0].value[col];
    for (std::size_t i = 0; i + 2 < kTable.size(); ++i) {
        const auto& lo = kTable[i];
        const auto& hi = kTable[i + 1];
        if (n <= hi.nobs) {
            const double f = (n - lo.nobs) / (hi.nobs - lo.nobs);
            return lo.value[col] + f * (hi.value[col] - lo.value[col]);
        }
    }
    return kTable.back().value[col];
}

}  // namespace sentinel
