#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "svmnet/csv.hpp"
#include "svmnet/errors.hpp"

namespace svmnet::eval {

struct SingleClass : DataError {
    SingleClass() : DataError("need at least one example of each class") {}
};

struct NoPositives : DataError {
    NoPositives() : DataError("no positive labels: sensitivity undefined") {}
};

struct NoNegatives : DataError {
    NoNegatives() : DataError("no negative labels: specificity undefined") {}
};

struct MismatchedRows : DataError {
    MismatchedRows() : DataError("score and label lengths differ") {}
};

struct ScoredSet {
    std::vector<double> scores;
    std::vector<int> labels;  // {0,1}

    void validate() const {
        if (scores.size() != labels.size()) throw MismatchedRows();
        if (scores.empty()) throw DataError("empty scored set");
    }
};

struct Confusion {
    double sensitivity = 0.0;  // percent
    double specificity = 0.0;  // percent
};

// Positive prediction iff score strictly greater than the threshold.
inline Confusion confusion(const ScoredSet& s, double threshold) {
    s.validate();
    long tp = 0, fn = 0, tn = 0, fp = 0;
    for (size_t i = 0; i < s.scores.size(); ++i) {
        bool pred = s.scores[i] > threshold;
        if (s.labels[i] == 1)
            pred ? ++tp : ++fn;
        else
            pred ? ++fp : ++tn;
    }
    if (tp + fn == 0) throw NoPositives();
    if (tn + fp == 0) throw NoNegatives();
    return {100.0 * tp / (tp + fn), 100.0 * tn / (tn + fp)};
}

// Staircase from (0,0) to (1,1), one point per distinct score (descending),
// ties grouped.
inline std::vector<std::pair<double, double>> roc_curve(const ScoredSet& s) {
    s.validate();
    long pos = std::accumulate(s.labels.begin(), s.labels.end(), 0L);
    long neg = static_cast<long>(s.labels.size()) - pos;
    if (pos == 0 || neg == 0) throw SingleClass();

    std::vector<size_t> order(s.scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return s.scores[a] > s.scores[b]; });

    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    long tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        double v = s.scores[order[i]];
        while (i < order.size() && s.scores[order[i]] == v) {
            s.labels[order[i]] == 1 ? ++tp : ++fp;
            ++i;
        }
        pts.emplace_back(static_cast<double>(fp) / neg, static_cast<double>(tp) / pos);
    }
    return pts;
}

// Trapezoidal area under roc_curve; equals the rank statistic
// (concordant + half ties) / (P*N).
inline double auc(const ScoredSet& s) {
    auto pts = roc_curve(s);
    double area = 0.0;
    for (size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].first - pts[i - 1].first) * 0.5 * (pts[i].second + pts[i - 1].second);
    return area;
}

// One row of the model-comparison table.
struct EvalSummary {
    std::string model;       // LOGISTIC | SVM
    bool graph_metrics = false;
    std::string kernel = "NA";  // NA | LINEAR | POLY | RBF
    std::string best_c = "NA";
    double sensitivity = 0.0;
    double specificity = 0.0;
    double roc_index = 0.0;  // 100 * AUC
};

struct ScoredModel {
    EvalSummary meta;          // sensitivity/specificity/roc filled by compare
    ScoredSet validation;      // scores on the shared validation rows
    double threshold = 0.0;    // 0.5 for probabilities, 0 for decision values
};

struct ComparisonRow {
    EvalSummary summary;
    std::vector<std::pair<double, double>> roc;
};

inline std::vector<ComparisonRow> compare(const std::vector<ScoredModel>& models) {
    std::vector<ComparisonRow> rows;
    size_t nrows = 0;
    for (const auto& m : models) {
        m.validation.validate();
        if (nrows == 0) nrows = m.validation.scores.size();
        if (m.validation.scores.size() != nrows) throw MismatchedRows();
        ComparisonRow row;
        row.summary = m.meta;
        auto c = confusion(m.validation, m.threshold);
        row.summary.sensitivity = c.sensitivity;
        row.summary.specificity = c.specificity;
        row.summary.roc_index = 100.0 * auc(m.validation);
        row.roc = roc_curve(m.validation);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string summary_csv_header() {
    return "model,graph_metrics,kernel,best_c,sensitivity,specificity,roc_index";
}

inline std::string write_summary_csv(const std::vector<EvalSummary>& rows) {
    std::string out = summary_csv_header() + "\n";
    for (const auto& r : rows) {
        out += r.model + ',' + (r.graph_metrics ? "YES" : "NO") + ',' + r.kernel + ',' + r.best_c;
        out += ',' + csv::format_double(r.sensitivity);
        out += ',' + csv::format_double(r.specificity);
        out += ',' + csv::format_double(r.roc_index);
        out += '\n';
    }
    return out;
}

inline std::string write_roc_csv(const std::vector<std::pair<double, double>>& pts) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : pts)
        out += csv::format_double(fpr) + ',' + csv::format_double(tpr) + '\n';
    return out;
}

// report subcommand: concatenate summary CSVs under a single header.
inline std::string merge_summaries(const std::vector<std::string>& csv_texts) {
    std::string out = summary_csv_header() + "\n";
    for (const auto& text : csv_texts) {
        auto lines = csv::split_lines(text);
        if (lines.empty() || lines[0] != summary_csv_header())
            throw DataError("bad summary csv header");
        for (size_t i = 1; i < lines.size(); ++i) out += lines[i] + '\n';
    }
    return out;
}

}  // namespace svmnet::eval
