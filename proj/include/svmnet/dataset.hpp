#pragma once

#include <string>
#include <vector>

#include "svmnet/csv.hpp"
#include "svmnet/schema.hpp"

namespace svmnet::data {

struct UnknownColumn : DataError {
    explicit UnknownColumn(const std::string& name) : DataError("unknown column: " + name) {}
};

struct UnknownCategory : DataError {
    UnknownCategory(size_t row, const std::string& column, const std::string& value)
        : DataError("row " + std::to_string(row) + ", column " + column + ": unknown category '" +
                    value + "'"),
          row(row), column(column) {}
    size_t row;
    std::string column;
};

struct NonNumericInterval : DataError {
    NonNumericInterval(size_t row, const std::string& column, const std::string& value)
        : DataError("row " + std::to_string(row) + ", column " + column + ": not numeric '" + value +
                    "'"),
          row(row), column(column) {}
    size_t row;
    std::string column;
};

struct EmptyAfterClean : DataError {
    EmptyAfterClean() : DataError("no rows remain after cleaning") {}
};

struct Cell {
    enum class Kind { Missing, Number, Category } kind = Kind::Missing;
    double number = 0.0;
    int category = -1;

    static Cell missing() { return {}; }
    static Cell num(double x) { return {Kind::Number, x, -1}; }
    static Cell cat(int c) { return {Kind::Category, 0.0, c}; }
    bool is_missing() const { return kind == Kind::Missing; }
};

// Tabular survey data. Cells are stored typed (category index / double);
// missing markers survive parsing and are removed by clean(). After clean(),
// row_ids run 0..n-1 and double as graph node ids.
struct Dataset {
    FeatureSchema schema;
    std::vector<std::vector<Cell>> rows;  // rows x schema.size()
    std::vector<int> row_ids;

    size_t n() const { return rows.size(); }

    const Cell& cell(size_t row, size_t var) const { return rows[row][var]; }

    std::vector<double> interval_column(const std::string& name) const {
        int idx = schema.index_of(name);
        if (idx < 0) throw UnknownColumn(name);
        if (schema.at(idx).level != Level::Interval)
            throw DataError(name + ": not an interval variable");
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            if (r[idx].is_missing()) throw DataError(name + ": missing value");
            out.push_back(r[idx].number);
        }
        return out;
    }

    // 0/1 target labels (1 = later category in ascending order).
    std::vector<int> labels() const {
        size_t t = schema.target_index();
        const auto& var = schema.at(t);
        int pos = var.categories[0] < var.categories[1] ? 1 : 0;
        std::vector<int> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            if (r[t].is_missing()) throw DataError("target has missing value");
            out.push_back(r[t].category == pos ? 1 : 0);
        }
        return out;
    }
};

// CSV: UTF-8, comma-delimited, header row, empty field = missing marker.
// Header must be a permutation of the schema variable names.
inline Dataset parse_dataset(const std::string& csv_text, const FeatureSchema& schema) {
    auto lines = csv::split_lines(csv_text);
    if (lines.empty()) throw DataError("empty csv: no header");
    auto header = csv::split_line(lines[0]);
    std::vector<int> var_of_col(header.size());
    std::vector<bool> seen(schema.size(), false);
    for (size_t c = 0; c < header.size(); ++c) {
        std::string name = Config::trim(header[c]);
        int idx = schema.index_of(name);
        if (idx < 0) throw UnknownColumn(name);
        if (seen[idx]) throw DataError("duplicate column: " + name);
        seen[idx] = true;
        var_of_col[c] = idx;
    }
    for (size_t i = 0; i < schema.size(); ++i)
        if (!seen[i]) throw UnknownColumn(schema.at(i).name + " (absent from header)");

    Dataset ds{schema, {}, {}};
    for (size_t li = 1; li < lines.size(); ++li) {
        auto fields = csv::split_line(lines[li]);
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(li - 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        std::vector<Cell> row(schema.size());
        for (size_t c = 0; c < fields.size(); ++c) {
            const Variable& var = schema.at(var_of_col[c]);
            const std::string& val = fields[c];
            if (val.empty()) {
                row[var_of_col[c]] = Cell::missing();
            } else if (var.level == Level::Nominal) {
                auto it = std::find(var.categories.begin(), var.categories.end(), val);
                if (it == var.categories.end()) throw UnknownCategory(li - 1, var.name, val);
                row[var_of_col[c]] = Cell::cat(static_cast<int>(it - var.categories.begin()));
            } else {
                double x;
                if (!csv::parse_double(val, x)) throw NonNumericInterval(li - 1, var.name, val);
                row[var_of_col[c]] = Cell::num(x);
            }
        }
        ds.rows.push_back(std::move(row));
        ds.row_ids.push_back(static_cast<int>(li - 1));
    }
    return ds;
}

// Complete-case filtering: drop rows with any missing value, renumber ids.
inline Dataset clean(const Dataset& ds) {
    Dataset out{ds.schema, {}, {}};
    for (const auto& row : ds.rows) {
        bool complete = true;
        for (const auto& c : row) complete = complete && !c.is_missing();
        if (complete) {
            out.rows.push_back(row);
            out.row_ids.push_back(static_cast<int>(out.rows.size()) - 1);
        }
    }
    if (out.rows.empty()) throw EmptyAfterClean();
    return out;
}

inline std::string write_dataset_csv(const Dataset& ds) {
    std::string out;
    for (size_t i = 0; i < ds.schema.size(); ++i) {
        if (i) out += ',';
        out += ds.schema.at(i).name;
    }
    out += '\n';
    for (const auto& row : ds.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const auto& cell = row[i];
            switch (cell.kind) {
                case Cell::Kind::Missing: break;
                case Cell::Kind::Number: out += csv::format_double(cell.number); break;
                case Cell::Kind::Category: out += ds.schema.at(i).categories[cell.category]; break;
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace svmnet::data
