#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpimage/ensemble.hpp"

namespace gpimage {

/// A set partition of {0, …, n−1}; blocks in order of their smallest element.
struct Partition {
    std::vector<std::vector<int>> blocks;
};

/// All partitions of an n-set, 1 ≤ n ≤ 8, in lexicographic order of restricted growth strings.
[[nodiscard]] std::vector<Partition> enumerate_partitions(int n);

[[nodiscard]] std::uint64_t bell_number(int n);

/// Σ_P (−1)^{|P|−1} (|P|−1)! Π_{S∈P} moment(S), with S passed as a bitmask over {0, …, n−1}.
[[nodiscard]] double partition_formula(int n, const std::function<double(unsigned)>& moment);

/// Number of contiguous path groups used for jackknife standard errors.
inline constexpr int kJackknifeGroups = 50;

struct CumulantEstimate {
    int order = 0;
    std::vector<std::size_t> indices;
    std::vector<double> points;
    double value = 0.0;
    double standard_error = 0.0;

    /// value / standard_error; 0 when both vanish.
    [[nodiscard]] double standardized() const;
};

/// Plug-in estimate of the joint cumulant of (u(x_{i1}), …, u(x_{in})), 1 ≤ n ≤ 6, N ≥ 100.
///
/// Order 1 is the empirical mean and order 2 the empirical covariance entry, bit for bit.
/// Orders ≥ 3 apply the partition formula to moments of the data shifted by the sample
/// mean (plug-in cumulants of order ≥ 2 are shift invariant). The standard error is a
/// grouped jackknife over kJackknifeGroups contiguous blocks of paths.
[[nodiscard]] CumulantEstimate empirical_cumulant(const SampleEnsemble& e, std::span<const std::size_t> indices);

} // namespace gpimage
