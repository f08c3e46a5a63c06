#pragma once

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "svmnet/partition.hpp"
#include "svmnet/svm.hpp"

namespace svmnet {

// Runs tasks [0, count) across up to `threads` workers; each task writes only
// its own slot, so results are identical for any worker count.
template <typename Fn>
void parallel_for(size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (!failed.load()) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned nw = static_cast<unsigned>(std::min<size_t>(threads, count));
    pool.reserve(nw);
    for (unsigned t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace svm {

struct GridPoint {
    KernelKind kind;
    double gamma;  // NaN for linear/polynomial
    double c;
    std::vector<double> fold_errors;
    double mean_error;
};

struct KernelSelection {
    KernelSpec kernel;
    double c;
    double cv_error;
};

struct GridSearchResult {
    std::vector<GridPoint> table;
    std::map<KernelKind, KernelSelection> best;
};

// Mean misclassification over k folds for every (kernel, C, gamma); argmin
// per kernel kind with ties broken by smaller C, then smaller gamma.
inline GridSearchResult grid_search(const std::vector<std::vector<double>>& x,
                                    const std::vector<int>& y,  // +-1
                                    const std::vector<KernelKind>& kinds,
                                    std::vector<double> c_grid, std::vector<double> gamma_grid,
                                    size_t folds, long seed, const SvmTrainConfig& base_cfg,
                                    unsigned threads = 1, int poly_degree = 2,
                                    double poly_offset = 1.0) {
    if (folds < 2) throw data::BadFoldCount("grid search needs >= 2 folds");
    if (c_grid.empty()) throw ConfigError("empty C grid");
    std::sort(c_grid.begin(), c_grid.end());
    std::sort(gamma_grid.begin(), gamma_grid.end());

    auto fold_sets = data::kfold_indices(x.size(), folds, seed);
    std::vector<std::vector<bool>> in_fold(folds, std::vector<bool>(x.size(), false));
    for (size_t f = 0; f < folds; ++f)
        for (size_t idx : fold_sets[f]) in_fold[f][idx] = true;

    GridSearchResult res;
    for (KernelKind kind : kinds) {
        std::vector<double> gammas =
            kind == KernelKind::Rbf ? gamma_grid : std::vector<double>{std::nan("")};
        if (kind == KernelKind::Rbf && gammas.empty()) throw ConfigError("empty gamma grid");
        for (double g : gammas)
            for (double c : c_grid)
                res.table.push_back({kind, g, c, std::vector<double>(folds, 0.0), 0.0});
    }

    auto make_spec = [&](KernelKind kind, double gamma) {
        if (kind == KernelKind::Rbf) return KernelSpec::rbf(gamma);
        if (kind == KernelKind::Polynomial) return KernelSpec::polynomial(poly_degree, poly_offset);
        return KernelSpec::linear();
    };

    // one task per (grid point, fold)
    size_t tasks = res.table.size() * folds;
    parallel_for(tasks, threads, [&](size_t task) {
        size_t pi = task / folds, f = task % folds;
        GridPoint& pt = res.table[pi];
        KernelSpec spec = make_spec(pt.kind, pt.gamma);
        std::vector<std::vector<double>> xt;
        std::vector<int> yt;
        for (size_t r = 0; r < x.size(); ++r) {
            if (!in_fold[f][r]) {
                xt.push_back(x[r]);
                yt.push_back(y[r]);
            }
        }
        SvmTrainConfig cfg = base_cfg;
        SvmModel model = train(xt, yt, spec, cfg);
        long wrong = 0;
        for (size_t idx : fold_sets[f])
            if (predict_label(model, x[idx]) != y[idx]) ++wrong;
        pt.fold_errors[f] = static_cast<double>(wrong) / fold_sets[f].size();
    });

    for (auto& pt : res.table) {
        double s = 0.0;
        for (double e : pt.fold_errors) s += e;
        pt.mean_error = s / pt.fold_errors.size();
    }

    for (KernelKind kind : kinds) {
        const GridPoint* best = nullptr;
        for (const auto& pt : res.table) {
            if (pt.kind != kind) continue;
            if (!best || pt.mean_error < best->mean_error ||
                (pt.mean_error == best->mean_error &&
                 (pt.c < best->c || (pt.c == best->c && pt.gamma < best->gamma))))
                best = &pt;
        }
        res.best[kind] = {make_spec(kind, best->gamma), best->c, best->mean_error};
    }
    return res;
}

inline std::string write_cv_table_csv(const GridSearchResult& res) {
    std::string out = "kernel,gamma,c,mean_error";
    size_t folds = res.table.empty() ? 0 : res.table[0].fold_errors.size();
    for (size_t f = 0; f < folds; ++f) out += ",fold" + std::to_string(f);
    out += '\n';
    for (const auto& pt : res.table) {
        out += kernel_name(pt.kind);
        out += ',' + (std::isnan(pt.gamma) ? std::string("NA") : csv::format_double(pt.gamma));
        out += ',' + csv::format_double(pt.c);
        out += ',' + csv::format_double(pt.mean_error);
        for (double e : pt.fold_errors) out += ',' + csv::format_double(e);
        out += '\n';
    }
    return out;
}

}  // namespace svm
}  // namespace svmnet
