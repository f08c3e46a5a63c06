#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "svmnet/dataset.hpp"

namespace svmnet::data {

struct ConstantColumn : DataError {
    explicit ConstantColumn(const std::string& name)
        : DataError("constant interval column: " + name) {}
};

struct EncodedColumn {
    std::string name;
    std::string source;  // schema variable
    std::string tag;     // "indicator:<category>" or "standardized"
    double mean = 0.0;   // standardization parameters (interval columns)
    double sd = 1.0;
};

// Dense numeric predictor matrix with {0,1} labels. Nominal variables are
// reference-coded (k-1 indicators, reference = last category ascending);
// interval variables standardized with sample (n-1) sd.
struct DesignMatrix {
    std::vector<EncodedColumn> columns;
    std::vector<double> values;  // row-major, n x p
    std::vector<int> labels;

    size_t nrows() const { return labels.size(); }
    size_t ncols() const { return columns.size(); }
    double at(size_t r, size_t c) const { return values[r * columns.size() + c]; }

    std::vector<double> row(size_t r) const {
        return std::vector<double>(values.begin() + r * ncols(), values.begin() + (r + 1) * ncols());
    }

    int column_index(const std::string& name) const {
        for (size_t i = 0; i < columns.size(); ++i)
            if (columns[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

// Column layout for one predictor variable; nominal indicator categories in
// ascending order with the last ascending category as reference.
inline std::vector<EncodedColumn> plan_columns(const Variable& v) {
    std::vector<EncodedColumn> cols;
    if (v.level == Level::Nominal) {
        std::vector<std::string> cats = v.categories;
        std::sort(cats.begin(), cats.end());
        for (size_t i = 0; i + 1 < cats.size(); ++i)
            cols.push_back({v.name + "_" + cats[i], v.name, "indicator:" + cats[i], 0.0, 1.0});
    } else {
        cols.push_back({v.name, v.name, "standardized", 0.0, 1.0});
    }
    return cols;
}

}  // namespace detail

// Encode with standardization parameters computed from ds itself.
// Pass the resulting columns to encode_with() to reuse training-side
// parameters on a validation set.
inline DesignMatrix encode(const Dataset& ds) {
    DesignMatrix dm;
    size_t n = ds.n();
    for (size_t vi = 0; vi < ds.schema.size(); ++vi) {
        const Variable& v = ds.schema.at(vi);
        if (v.role != Role::Predictor) continue;
        auto cols = detail::plan_columns(v);
        if (v.level == Level::Interval) {
            double sum = 0.0;
            for (size_t r = 0; r < n; ++r) sum += ds.cell(r, vi).number;
            double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (size_t r = 0; r < n; ++r) {
                double d = ds.cell(r, vi).number - mean;
                ss += d * d;
            }
            double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
            if (sd == 0.0) throw ConstantColumn(v.name);
            cols[0].mean = mean;
            cols[0].sd = sd;
        }
        for (auto& c : cols) dm.columns.push_back(std::move(c));
    }

    dm.labels = ds.labels();
    dm.values.resize(n * dm.columns.size());
    size_t out_c = 0;
    for (size_t vi = 0; vi < ds.schema.size(); ++vi) {
        const Variable& v = ds.schema.at(vi);
        if (v.role != Role::Predictor) continue;
        if (v.level == Level::Nominal) {
            std::vector<std::string> cats = v.categories;
            std::sort(cats.begin(), cats.end());
            for (size_t k = 0; k + 1 < cats.size(); ++k, ++out_c) {
                for (size_t r = 0; r < n; ++r) {
                    const std::string& val = v.categories[ds.cell(r, vi).category];
                    dm.values[r * dm.columns.size() + out_c] = (val == cats[k]) ? 1.0 : 0.0;
                }
            }
        } else {
            const auto& col = dm.columns[out_c];
            for (size_t r = 0; r < n; ++r)
                dm.values[r * dm.columns.size() + out_c] = (ds.cell(r, vi).number - col.mean) / col.sd;
            ++out_c;
        }
    }
    return dm;
}

// Encode using previously computed column plan and standardization
// parameters (training-side parameters applied to validation rows).
inline DesignMatrix encode_with(const Dataset& ds, const std::vector<EncodedColumn>& columns) {
    DesignMatrix dm;
    dm.columns = columns;
    dm.labels = ds.labels();
    size_t n = ds.n();
    dm.values.resize(n * columns.size());
    for (size_t c = 0; c < columns.size(); ++c) {
        const auto& col = columns[c];
        int vi = ds.schema.index_of(col.source);
        if (vi < 0) throw UnknownColumn(col.source);
        const Variable& v = ds.schema.at(vi);
        if (col.tag.rfind("indicator:", 0) == 0) {
            std::string cat = col.tag.substr(10);
            for (size_t r = 0; r < n; ++r) {
                const std::string& val = v.categories[ds.cell(r, vi).category];
                dm.values[r * columns.size() + c] = (val == cat) ? 1.0 : 0.0;
            }
        } else {
            for (size_t r = 0; r < n; ++r)
                dm.values[r * columns.size() + c] = (ds.cell(r, vi).number - col.mean) / col.sd;
        }
    }
    return dm;
}

}  // namespace svmnet::data
