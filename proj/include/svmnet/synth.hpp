#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "svmnet/dataset.hpp"
#include "svmnet/graph_metrics.hpp"
#include "svmnet/smallworld.hpp"

namespace svmnet::data {

// Synthetic survey surrogate: predictors drawn from declared distributions,
// labels from the logistic model of the declared coefficients, optionally
// with a network effect applied to a z-scored node metric computed on a
// small-world graph over the rows.
struct SynthVariable {
    enum class Dist { Normal, Uniform, UniformInt, Bernoulli } dist = Dist::Normal;
    std::string name;
    double a = 0.0, b = 1.0;  // normal(mu,sd) | uniform(lo,hi) | uniform_int(lo,hi) | bernoulli(p)
    double coef = 0.0;        // bernoulli: applies to the YES indicator
    Role role = Role::Predictor;
};

struct NetworkEffect {
    std::string metric = "closeness";  // NodeMetrics column name
    double coef = 0.0;
    net::SmallWorldConfig graph;
    std::string weight_source;  // synth variable used for edge weights
    double weight_epsilon = 0.1;
};

struct SynthSpec {
    long n = 0;
    double intercept = 0.0;
    std::string target_name = "outcome";
    std::vector<SynthVariable> variables;
    std::optional<NetworkEffect> network;
};

struct SynthResult {
    Dataset data;
    std::vector<double> true_eta;  // generating linear predictor per row
};

namespace detail {

inline std::vector<double> zscore(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    if (sd == 0.0) throw net::ConstantValues();
    std::vector<double> z(v.size());
    for (size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - mean) / sd;
    return z;
}

}  // namespace detail

inline double sigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// Schema of the dataset synthesize() will produce: declared variables in
// order, then the binary NO/YES target.
inline std::vector<Variable> synth_schema_vars(const SynthSpec& spec) {
    std::vector<Variable> out;
    for (const auto& sv : spec.variables) {
        Variable var;
        var.name = sv.name;
        var.role = sv.role;
        if (sv.dist == SynthVariable::Dist::Bernoulli) {
            var.level = Level::Nominal;
            var.categories = {"NO", "YES"};
        } else {
            var.level = Level::Interval;
        }
        out.push_back(std::move(var));
    }
    Variable target;
    target.name = spec.target_name;
    target.level = Level::Nominal;
    target.role = Role::Target;
    target.categories = {"NO", "YES"};
    out.push_back(std::move(target));
    return out;
}

// Draw order is fixed: one column at a time in declared order, then the
// Bernoulli label draws in row order, all from a single mt19937_64 stream.
inline SynthResult synthesize(const SynthSpec& spec, long seed) {
    if (spec.n <= 0) throw ConfigError("synth: n must be positive");
    size_t n = static_cast<size_t>(spec.n);
    std::mt19937_64 rng(static_cast<std::mt19937_64::result_type>(seed));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> numeric(spec.variables.size(), std::vector<double>(n));
    for (size_t vi = 0; vi < spec.variables.size(); ++vi) {
        const auto& sv = spec.variables[vi];
        if (sv.dist == SynthVariable::Dist::Bernoulli) {
            if (sv.role != Role::Predictor)
                throw ConfigError("synth " + sv.name + ": bernoulli must be a predictor");
            for (size_t r = 0; r < n; ++r) numeric[vi][r] = unit(rng) < sv.a ? 1.0 : 0.0;
        } else {
            switch (sv.dist) {
                case SynthVariable::Dist::Normal: {
                    std::normal_distribution<double> d(sv.a, sv.b);
                    for (size_t r = 0; r < n; ++r) numeric[vi][r] = d(rng);
                    break;
                }
                case SynthVariable::Dist::Uniform: {
                    std::uniform_real_distribution<double> d(sv.a, sv.b);
                    for (size_t r = 0; r < n; ++r) numeric[vi][r] = d(rng);
                    break;
                }
                case SynthVariable::Dist::UniformInt: {
                    std::uniform_int_distribution<long> d(static_cast<long>(sv.a),
                                                          static_cast<long>(sv.b));
                    for (size_t r = 0; r < n; ++r) numeric[vi][r] = static_cast<double>(d(rng));
                    break;
                }
                default: break;
            }
        }
    }

    std::vector<double> eta(n, spec.intercept);
    for (size_t vi = 0; vi < spec.variables.size(); ++vi) {
        double c = spec.variables[vi].coef;
        if (c == 0.0) continue;
        for (size_t r = 0; r < n; ++r) eta[r] += c * numeric[vi][r];
    }

    if (spec.network) {
        const auto& ne = *spec.network;
        if (ne.graph.n != spec.n) throw ConfigError("synth: network n must equal synth n");
        int src = -1;
        for (size_t vi = 0; vi < spec.variables.size(); ++vi)
            if (spec.variables[vi].name == ne.weight_source) src = static_cast<int>(vi);
        if (src < 0) throw ConfigError("synth: weight source variable not found: " + ne.weight_source);
        net::Graph g = net::generate(ne.graph);
        g = net::weight_edges(g, numeric[src], ne.weight_epsilon);
        auto metric = metrics::compute_all(g).column(ne.metric);
        auto z = detail::zscore(metric);
        for (size_t r = 0; r < n; ++r) eta[r] += ne.coef * z[r];
    }

    SynthResult res{Dataset{FeatureSchema(synth_schema_vars(spec)), {}, {}}, eta};
    res.data.rows.reserve(n);
    for (size_t r = 0; r < n; ++r) {
        std::vector<Cell> row(spec.variables.size() + 1);
        for (size_t vi = 0; vi < spec.variables.size(); ++vi) {
            if (spec.variables[vi].dist == SynthVariable::Dist::Bernoulli)
                row[vi] = Cell::cat(numeric[vi][r] > 0.5 ? 1 : 0);
            else
                row[vi] = Cell::num(numeric[vi][r]);
        }
        row.back() = Cell::cat(unit(rng) < sigmoid(eta[r]) ? 1 : 0);
        res.data.rows.push_back(std::move(row));
        res.data.row_ids.push_back(static_cast<int>(r));
    }
    return res;
}

inline std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline void parse_dist(const std::string& tok, SynthVariable& sv) {
    size_t open = tok.find('(');
    if (open == std::string::npos || tok.back() != ')')
        throw ConfigError("synth " + sv.name + ": bad distribution " + tok);
    std::string kind = tok.substr(0, open);
    auto args = Config::split_list(tok.substr(open + 1, tok.size() - open - 2));
    auto need = [&](size_t k) {
        if (args.size() != k) throw ConfigError("synth " + sv.name + ": " + kind + " needs " +
                                                std::to_string(k) + " arguments");
    };
    auto num = [&](size_t i) {
        double x;
        if (!csv::parse_double(args[i], x))
            throw ConfigError("synth " + sv.name + ": bad argument " + args[i]);
        return x;
    };
    if (kind == "normal") {
        need(2);
        sv.dist = SynthVariable::Dist::Normal;
        sv.a = num(0);
        sv.b = num(1);
    } else if (kind == "uniform") {
        need(2);
        sv.dist = SynthVariable::Dist::Uniform;
        sv.a = num(0);
        sv.b = num(1);
    } else if (kind == "uniform_int") {
        need(2);
        sv.dist = SynthVariable::Dist::UniformInt;
        sv.a = num(0);
        sv.b = num(1);
    } else if (kind == "bernoulli") {
        need(1);
        sv.dist = SynthVariable::Dist::Bernoulli;
        sv.a = num(0);
    } else {
        throw ConfigError("synth " + sv.name + ": unknown distribution " + kind);
    }
}

// [synth] section grammar:
//   n = 1284
//   intercept = -1.7
//   target = diabetes
//   var.<name> = <dist>(<args>) [coef=<x>] [role=weight_source]
//   network_metric = closeness        (optional, with network_coef)
//   network_coef = 0.4
// dist is normal(mu,sd), uniform(lo,hi), uniform_int(lo,hi) or bernoulli(p).
// The network section of the same config supplies the graph parameters.
inline SynthSpec parse_synth_spec(const Config& cfg, const net::SmallWorldConfig& graph_cfg,
                                  double weight_epsilon) {
    SynthSpec spec;
    spec.n = cfg.get_int("synth", "n");
    spec.intercept = cfg.get_double("synth", "intercept");
    spec.target_name = cfg.get_or("synth", "target", "outcome");
    std::string weight_source;
    for (const auto& e : cfg.section_entries("synth")) {
        if (e.key.rfind("var.", 0) != 0) continue;
        SynthVariable sv;
        sv.name = e.key.substr(4);
        bool have_dist = false;
        for (const auto& tok : split_tokens(e.value)) {
            if (tok.rfind("coef=", 0) == 0) {
                if (!csv::parse_double(tok.substr(5), sv.coef))
                    throw ConfigError("synth " + sv.name + ": bad coef");
            } else if (tok == "role=weight_source") {
                sv.role = Role::WeightSource;
                weight_source = sv.name;
            } else if (tok.rfind("role=", 0) == 0) {
                throw ConfigError("synth " + sv.name + ": unknown role " + tok.substr(5));
            } else {
                parse_dist(tok, sv);
                have_dist = true;
            }
        }
        if (!have_dist) throw ConfigError("synth " + sv.name + ": missing distribution");
        spec.variables.push_back(std::move(sv));
    }
    if (spec.variables.empty()) throw ConfigError("synth: no var.* entries");
    if (auto metric = cfg.find("synth", "network_metric")) {
        NetworkEffect ne;
        ne.metric = *metric;
        ne.coef = cfg.get_double("synth", "network_coef");
        ne.graph = graph_cfg;
        ne.graph.n = static_cast<int>(spec.n);
        if (weight_source.empty())
            throw ConfigError("synth: network effect needs a role=weight_source variable");
        ne.weight_source = weight_source;
        ne.weight_epsilon = weight_epsilon;
        spec.network = ne;
    }
    return spec;
}

}  // namespace svmnet::data
