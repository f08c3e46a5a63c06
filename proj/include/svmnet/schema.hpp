#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "svmnet/config.hpp"
#include "svmnet/errors.hpp"

namespace svmnet::data {

enum class Level { Nominal, Interval };
enum class Role { Predictor, Target, WeightSource };

struct Variable {
    std::string name;
    Level level = Level::Interval;
    Role role = Role::Predictor;
    std::vector<std::string> categories;  // nominal only, declared order
};

struct SchemaError : DataError {
    explicit SchemaError(const std::string& msg) : DataError("schema: " + msg) {}
};

// Typed description of a survey table: one binary nominal target, any number
// of nominal/interval predictors, optionally a weight-source variable used
// for network edge weighting.
class FeatureSchema {
public:
    explicit FeatureSchema(std::vector<Variable> vars) : variables_(std::move(vars)) {
        std::set<std::string> names;
        int targets = 0;
        for (const auto& v : variables_) {
            if (!names.insert(v.name).second) throw SchemaError("duplicate variable name: " + v.name);
            if (v.level == Level::Nominal) {
                if (v.categories.empty()) throw SchemaError(v.name + ": nominal needs categories");
                std::set<std::string> cats(v.categories.begin(), v.categories.end());
                if (cats.size() != v.categories.size())
                    throw SchemaError(v.name + ": duplicate categories");
                for (const auto& c : v.categories)
                    if (c.empty()) throw SchemaError(v.name + ": empty category");
            }
            if (v.role == Role::Target) {
                ++targets;
                if (v.level != Level::Nominal || v.categories.size() != 2)
                    throw SchemaError(v.name + ": target must be nominal with 2 categories");
            }
            if (v.role == Role::WeightSource && v.level != Level::Interval)
                throw SchemaError(v.name + ": weight source must be interval");
        }
        if (targets != 1) throw SchemaError("schema needs exactly one target variable");
    }

    const std::vector<Variable>& variables() const { return variables_; }
    size_t size() const { return variables_.size(); }
    const Variable& at(size_t i) const { return variables_[i]; }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    size_t target_index() const {
        for (size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].role == Role::Target) return i;
        throw SchemaError("no target");  // unreachable after construction
    }

    // The target category coding 1: the later of the two categories in
    // ascending order (e.g. NO/YES -> YES).
    std::string positive_category() const {
        const auto& t = variables_[target_index()];
        return std::max(t.categories[0], t.categories[1]);
    }

    // Key-value section format: name = level:role[:cat1,cat2,...]
    // with level in {nominal, interval}, role in {predictor, target, weight_source}.
    static FeatureSchema from_config(const Config& cfg, const std::string& section = "schema") {
        std::vector<Variable> vars;
        for (const auto& e : cfg.section_entries(section)) {
            Variable v;
            v.name = e.key;
            auto parts = split_colon(e.value);
            if (parts.size() < 2) throw ConfigError("schema " + e.key + ": expected level:role[:categories]");
            if (parts[0] == "nominal") v.level = Level::Nominal;
            else if (parts[0] == "interval") v.level = Level::Interval;
            else throw ConfigError("schema " + e.key + ": unknown level " + parts[0]);
            if (parts[1] == "predictor") v.role = Role::Predictor;
            else if (parts[1] == "target") v.role = Role::Target;
            else if (parts[1] == "weight_source") v.role = Role::WeightSource;
            else throw ConfigError("schema " + e.key + ": unknown role " + parts[1]);
            if (v.level == Level::Nominal) {
                if (parts.size() != 3) throw ConfigError("schema " + e.key + ": nominal needs categories");
                for (const auto& c : Config::split_list(parts[2])) v.categories.push_back(c);
            } else if (parts.size() != 2) {
                throw ConfigError("schema " + e.key + ": interval takes no categories");
            }
            vars.push_back(std::move(v));
        }
        try {
            return FeatureSchema(std::move(vars));
        } catch (const SchemaError& e) {
            throw ConfigError(e.what());
        }
    }

private:
    static std::vector<std::string> split_colon(const std::string& s) {
        std::vector<std::string> out;
        size_t start = 0;
        // categories may not contain ':'; two or three fields total
        while (out.size() < 2) {
            size_t pos = s.find(':', start);
            if (pos == std::string::npos) break;
            out.push_back(Config::trim(s.substr(start, pos - start)));
            start = pos + 1;
        }
        out.push_back(Config::trim(s.substr(start)));
        return out;
    }

    std::vector<Variable> variables_;
};

}  // namespace svmnet::data
