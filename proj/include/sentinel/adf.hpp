#pragma once

#include "sentinel/error.hpp"
#include "sentinel/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

namespace sentinel {

enum class Significance { OnePercent, FivePercent, TenPercent };

Significance parse_significance(std::string_view text);  // "1%", "5%", "10%"
std::string to_string(Significance level);

/// Dickey-Fuller critical value for the constant-only regression, linearly
/// interpolated in the number of regression observations (clamped to the
/// table's range; the asymptotic row is used beyond 500).
double df_critical_value(std::size_t nobs, Significance level);

template <typename Scalar>
struct AdfResult {
    Scalar statistic{};     // t-ratio on y_{t-1}
    Scalar coefficient{};   // estimated coefficient on y_{t-1}
    Scalar standard_error{};
    Scalar critical_value{};
    std::size_t nobs = 0;
    Significance level = Significance::FivePercent;
    /// statistic < critical value: the unit-root null is rejected (series looks stationary).
    bool rejects_unit_root = false;
};

/// Dickey-Fuller test with a constant and no lagged differences:
///   dy_t = a + g y_{t-1} + e_t,  statistic = g_hat / se(g_hat).
/// Needs at least 10 finite values. Throws UndefinedError when the
/// regression is degenerate (e.g. a constant series).
template <typename Scalar>
AdfResult<Scalar> adf_test(std::span<const Scalar> series, Significance level = Significance::FivePercent) {
    if (series.size() < 10) throw ParameterError("ADF test needs at least 10 observations");
    for (auto v : series)
        if (!std::isfinite(v)) throw ParameterError("ADF test needs finite values");

    const auto nobs = static_cast<Eigen::Index>(series.size() - 1);
    MatrixX<Scalar> design(nobs, 2);
    VectorX<Scalar> response(nobs);
    for (Eigen::Index t = 0; t < nobs; ++t) {
        design(t, 0) = Scalar(1);
        design(t, 1) = series[static_cast<std::size_t>(t)];
        response(t) = series[static_cast<std::size_t>(t) + 1] - series[static_cast<std::size_t>(t)];
    }
    Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(design);
    qr.setThreshold(Scalar(1e-10));
    if (qr.rank() < 2) throw UndefinedError("ADF regression is degenerate (constant series)");

    const VectorX<Scalar> beta = qr.solve(response);
    const Scalar rss = (response - design * beta).squaredNorm();
    const Scalar sigma2 = rss / static_cast<Scalar>(nobs - 2);
    const MatrixX<Scalar> xtx_inv = (design.transpose() * design).inverse();

    AdfResult<Scalar> r;
    r.nobs = static_cast<std::size_t>(nobs);
    r.level = level;
    r.coefficient = beta(1);
    r.standard_error = std::sqrt(sigma2 * xtx_inv(1, 1));
    // An exact fit leaves no residual variance; report a zero statistic.
    r.statistic = r.standard_error > Scalar(0) ? r.coefficient / r.standard_error : Scalar(0);
    r.critical_value = static_cast<Scalar>(df_critical_value(r.nobs, level));
    r.rejects_unit_root = r.statistic < r.critical_value;
    return r;
}

}  // namespace sentinel
