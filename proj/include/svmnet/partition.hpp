#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "svmnet/dataset.hpp"

namespace svmnet::data {

struct DegenerateSplit : DataError {
    explicit DegenerateSplit(const std::string& msg) : DataError("degenerate split: " + msg) {}
};

struct BadFoldCount : ConfigError {
    explicit BadFoldCount(const std::string& msg) : ConfigError("bad fold count: " + msg) {}
};

struct PartitionPlan {
    double validate_fraction = 0.2;
    long seed = 0;
};

struct Partition {
    Dataset train;
    Dataset validation;
};

// Deterministic per (seed, n): rows are shuffled with mt19937 and the first
// round(fraction*n) shuffled positions form the validation set. Row order
// and parent row_ids are preserved within each side.
inline Partition partition(const Dataset& ds, const PartitionPlan& plan) {
    size_t n = ds.n();
    if (n < 2) throw DegenerateSplit("need at least 2 rows");
    if (!(plan.validate_fraction > 0.0 && plan.validate_fraction < 1.0))
        throw DegenerateSplit("fraction must be in (0,1)");
    size_t n_val = static_cast<size_t>(std::llround(plan.validate_fraction * static_cast<double>(n)));
    if (n_val == 0 || n_val >= n) throw DegenerateSplit("empty side");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937 rng(static_cast<std::mt19937::result_type>(plan.seed));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<bool> in_val(n, false);
    for (size_t i = 0; i < n_val; ++i) in_val[order[i]] = true;

    Partition p{{ds.schema, {}, {}}, {ds.schema, {}, {}}};
    for (size_t r = 0; r < n; ++r) {
        Dataset& side = in_val[r] ? p.validation : p.train;
        side.rows.push_back(ds.rows[r]);
        side.row_ids.push_back(ds.row_ids[r]);
    }
    return p;
}

// k disjoint index sets covering 0..n-1, sizes differing by at most 1,
// deterministic per seed. Each fold is sorted ascending.
inline std::vector<std::vector<size_t>> kfold_indices(size_t n, size_t k, long seed) {
    if (k < 2 || k > n) throw BadFoldCount(std::to_string(k) + " folds for n=" + std::to_string(n));
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<size_t>> folds(k);
    size_t base = n / k, extra = n % k, pos = 0;
    for (size_t f = 0; f < k; ++f) {
        size_t sz = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + pos, order.begin() + pos + sz);
        std::sort(folds[f].begin(), folds[f].end());
        pos += sz;
    }
    return folds;
}

}  // namespace svmnet::data
