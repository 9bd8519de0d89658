#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_map>

namespace sentinel {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mxd = MatrixX<double>;
using Vxd = VectorX<double>;

using Timestamp = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

inline Day day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

using AccountId = std::string;
using CommunityLabel = int;
using ClusterLabel = int;

// Word trigram, joined with single spaces ("a b c"). Tokens never contain spaces.
using Trigram = std::string;
using TrigramCounts = std::unordered_map<Trigram, std::int64_t>;

}  // namespace sentinel
