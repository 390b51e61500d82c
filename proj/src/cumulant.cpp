#include "gpimage/cumulant.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "gpimage/errors.hpp"

namespace gpimage {

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 1 || n > 8) throw ParameterError("enumerate_partitions needs 1 <= n <= 8, got " + std::to_string(n));
    std::vector<Partition> out;
    // restricted growth string rgs[i] <= 1 + max(rgs[0..i-1]), rgs[0] = 0
    std::vector<int> rgs(n, 0);
    std::vector<int> prefix_max(n, 0);
    while (true) {
        int blocks = 0;
        for (int v : rgs) blocks = std::max(blocks, v + 1);
        Partition p;
        p.blocks.resize(blocks);
        for (int i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(i);
        out.push_back(std::move(p));

        int i = n - 1;
        while (i >= 1 && rgs[i] > prefix_max[i - 1]) --i;
        if (i < 1) break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
    return out;
}

std::uint64_t bell_number(int n) {
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

namespace {

struct WeightedPartition {
    double weight;  // (−1)^{|P|−1} (|P|−1)!
    std::vector<unsigned> masks;
};

const std::vector<WeightedPartition>& weighted_partitions(int n) {
    static const auto table = [] {
        std::array<std::vector<WeightedPartition>, 9> t;
        for (int m = 1; m <= 8; ++m) {
            for (const Partition& p : enumerate_partitions(m)) {
                const int k = static_cast<int>(p.blocks.size());
                double w = 1.0;
                for (int i = 2; i < k; ++i) w *= i;
                if ((k - 1) % 2 == 1) w = -w;
                WeightedPartition wp{w, {}};
                for (const auto& block : p.blocks) {
                    unsigned mask = 0;
                    for (int e : block) mask |= 1u << e;
                    wp.masks.push_back(mask);
                }
                t[m].push_back(std::move(wp));
            }
        }
        return t;
    }();
    return table[n];
}

constexpr int kMaxCumulantOrder = 6;
constexpr std::size_t kMinPaths = 100;

} // namespace

double partition_formula(int n, const std::function<double(unsigned)>& moment) {
    if (n < 1 || n > 8) throw ParameterError("partition formula needs 1 <= n <= 8");
    double acc = 0.0;
    for (const auto& wp : weighted_partitions(n)) {
        double prod = wp.weight;
        for (unsigned mask : wp.masks) prod *= moment(mask);
        acc += prod;
    }
    return acc;
}

double CumulantEstimate::standardized() const {
    if (standard_error > 0.0) return value / standard_error;
    return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

CumulantEstimate empirical_cumulant(const SampleEnsemble& e, std::span<const std::size_t> indices) {
    const int n = static_cast<int>(indices.size());
    if (n < 1 || n > kMaxCumulantOrder)
        throw ParameterError("empirical_cumulant supports orders 1..6, got " + std::to_string(n));
    if (e.count() < kMinPaths) throw ParameterError("empirical_cumulant needs at least 100 paths");
    for (std::size_t idx : indices)
        if (idx >= e.grid().size()) throw ParameterError("cumulant index " + std::to_string(idx) + " is off the grid");

    const Eigen::VectorXd mean = empirical_mean(e);
    const PathMatrix& x = e.paths();
    const auto paths = static_cast<std::size_t>(x.rows());
    const unsigned full = (1u << n) - 1u;

    // per-group sums of Π_{k∈S} (u_k − ū_k) for every subset S
    std::vector<std::vector<double>> group_sums(kJackknifeGroups, std::vector<double>(full + 1, 0.0));
    std::vector<double> group_count(kJackknifeGroups, 0.0);
    std::vector<double> shifted(n);
    std::vector<double> prod(full + 1);
    for (int g = 0; g < kJackknifeGroups; ++g) {
        const std::size_t begin = paths * g / kJackknifeGroups;
        const std::size_t end = paths * (g + 1) / kJackknifeGroups;
        auto& sums = group_sums[g];
        for (std::size_t p = begin; p < end; ++p) {
            for (int k = 0; k < n; ++k) {
                const auto col = static_cast<Eigen::Index>(indices[k]);
                shifted[k] = x(static_cast<Eigen::Index>(p), col) - mean[col];
            }
            prod[0] = 1.0;
            for (unsigned mask = 1; mask <= full; ++mask) {
                const int low = std::countr_zero(mask);
                prod[mask] = prod[mask & (mask - 1)] * shifted[low];
                sums[mask] += prod[mask];
            }
        }
        group_count[g] = static_cast<double>(end - begin);
    }

    auto estimate = [&](const std::vector<double>& sums, double count) {
        if (n == 1) return sums[1] / count + mean[static_cast<Eigen::Index>(indices[0])];
        if (n == 2) return (sums[3] / count - (sums[1] / count) * (sums[2] / count)) * count / (count - 1.0);
        return partition_formula(n, [&](unsigned mask) { return sums[mask] / count; });
    };

    std::vector<double> total(full + 1, 0.0);
    for (const auto& sums : group_sums)
        for (unsigned mask = 1; mask <= full; ++mask) total[mask] += sums[mask];

    CumulantEstimate out;
    out.order = n;
    out.indices.assign(indices.begin(), indices.end());
    for (std::size_t idx : indices) out.points.push_back(e.grid()[idx]);
    if (n == 1) out.value = mean[static_cast<Eigen::Index>(indices[0])];
    else if (n == 2) out.value = covariance_entry(e, mean, indices[0], indices[1]);
    else out.value = estimate(total, static_cast<double>(paths));

    std::vector<double> folds(kJackknifeGroups);
    std::vector<double> kept(full + 1);
    for (int g = 0; g < kJackknifeGroups; ++g) {
        for (unsigned mask = 1; mask <= full; ++mask) kept[mask] = total[mask] - group_sums[g][mask];
        folds[g] = estimate(kept, static_cast<double>(paths) - group_count[g]);
    }
    double fold_mean = 0.0;
    for (double f : folds) fold_mean += f;
    fold_mean /= kJackknifeGroups;
    double ss = 0.0;
    for (double f : folds) ss += (f - fold_mean) * (f - fold_mean);
    out.standard_error = std::sqrt(ss * (kJackknifeGroups - 1.0) / kJackknifeGroups);
    return out;
}

} // namespace gpimage
