#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "svmnet/config.hpp"
#include "svmnet/encode.hpp"
#include "svmnet/evaluation.hpp"
#include "svmnet/graph_metrics.hpp"
#include "svmnet/logistic.hpp"
#include "svmnet/partition.hpp"
#include "svmnet/smallworld.hpp"
#include "svmnet/svm_select.hpp"
#include "svmnet/synth.hpp"

namespace svmnet::pipeline {

struct RunConfig {
    // data
    bool synth_source = false;
    std::string csv_path;
    data::SynthSpec synth;
    long synth_seed = 0;
    // network
    net::SmallWorldConfig network;  // n is resolved from the cleaned data
    std::string weight_source;      // empty = unweighted graph
    double weight_epsilon = 0.1;
    // models
    std::vector<svm::KernelKind> kernels;
    std::vector<double> c_grid;
    std::vector<double> gamma_grid;
    int poly_degree = 2;
    double poly_offset = 1.0;
    size_t svm_folds = 5;
    long svm_cv_seed = 34567;
    svm::SvmTrainConfig svm_cfg;  // c is overwritten per grid point
    double stepwise_alpha = 0.05;
    size_t logit_folds = 10;
    long logit_cv_seed = 34567;
    // evaluation
    data::PartitionPlan plan{0.2, 12345};
    // output
    std::string out_dir = "out";
    unsigned threads = 0;  // 0 = hardware concurrency

    Config schema_config;  // [schema] section for csv sources

    unsigned effective_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

inline svm::KernelKind parse_kernel_kind(const std::string& s) {
    if (s == "linear") return svm::KernelKind::Linear;
    if (s == "poly" || s == "polynomial") return svm::KernelKind::Polynomial;
    if (s == "rbf") return svm::KernelKind::Rbf;
    throw ConfigError("unknown kernel: " + s);
}

// Seed override replaces every stage seed with values derived from one
// master seed: synth N, network N+1, partition N+2, svm cv N+3, logit cv N+4.
inline RunConfig parse_run_config(const Config& cfg, long seed_override = -1,
                                  bool has_override = false) {
    RunConfig rc;
    std::string source = cfg.get_or("data", "source", cfg.has_section("synth") ? "synth" : "csv");
    if (source == "synth") rc.synth_source = true;
    else if (source == "csv") rc.csv_path = cfg.get("data", "path");
    else throw ConfigError("[data] source must be csv or synth");

    rc.network.k_lattice = static_cast<int>(cfg.get_int_or("network", "k_l", 4));
    rc.network.p_rewire = cfg.get_double_or("network", "p_w", 0.5);
    rc.network.seed = cfg.get_int_or("network", "seed", 1);
    rc.weight_source = cfg.get_or("network", "weight_source", "");
    rc.weight_epsilon = cfg.get_double_or("network", "weight_epsilon", 0.1);

    if (rc.synth_source) {
        rc.synth = data::parse_synth_spec(cfg, rc.network, rc.weight_epsilon);
        rc.synth_seed = cfg.get_int_or("synth", "seed", 0);
    } else {
        rc.schema_config = cfg;
    }

    for (const auto& k : Config::split_list(cfg.get_or("models", "kernels", "linear,poly,rbf")))
        rc.kernels.push_back(parse_kernel_kind(k));
    for (const auto& v : Config::split_list(cfg.get_or("models", "c_grid", "0.2,0.5,1,1.5,2"))) {
        double x;
        if (!csv::parse_double(v, x)) throw ConfigError("bad c_grid value: " + v);
        rc.c_grid.push_back(x);
    }
    for (const auto& v : Config::split_list(cfg.get_or("models", "gamma_grid", "0.01,0.1,0.5,1,2"))) {
        double x;
        if (!csv::parse_double(v, x)) throw ConfigError("bad gamma_grid value: " + v);
        rc.gamma_grid.push_back(x);
    }
    rc.poly_degree = static_cast<int>(cfg.get_int_or("models", "poly_degree", 2));
    rc.poly_offset = cfg.get_double_or("models", "poly_offset", 1);
    rc.svm_folds = static_cast<size_t>(cfg.get_int_or("models", "svm_folds", 5));
    rc.svm_cv_seed = cfg.get_int_or("models", "svm_cv_seed", 34567);
    rc.svm_cfg.tol = cfg.get_double_or("models", "svm_tol", 1e-3);
    rc.svm_cfg.max_iter = cfg.get_int_or("models", "svm_max_iter", 10'000'000);
    rc.stepwise_alpha = cfg.get_double_or("models", "stepwise_alpha", 0.05);
    rc.logit_folds = static_cast<size_t>(cfg.get_int_or("models", "logit_folds", 10));
    rc.logit_cv_seed = cfg.get_int_or("models", "logit_cv_seed", 34567);

    rc.plan.validate_fraction = cfg.get_double_or("evaluation", "validate_fraction", 0.2);
    rc.plan.seed = cfg.get_int_or("evaluation", "partition_seed", 12345);

    rc.out_dir = cfg.get_or("output", "dir", "out");
    rc.threads = static_cast<unsigned>(cfg.get_int_or("output", "threads", 0));

    if (has_override) {
        rc.synth_seed = seed_override;
        rc.network.seed = seed_override + 1;
        if (rc.synth.network) rc.synth.network->graph.seed = seed_override + 1;
        rc.plan.seed = seed_override + 2;
        rc.svm_cv_seed = seed_override + 3;
        rc.logit_cv_seed = seed_override + 4;
    }
    return rc;
}

// Every resolved value, for provenance alongside the outputs.
inline Config resolved_config(const RunConfig& rc) {
    Config out;
    out.set("data", "source", rc.synth_source ? "synth" : "csv");
    if (!rc.synth_source) out.set("data", "path", rc.csv_path);
    if (rc.synth_source) out.set("synth", "seed", std::to_string(rc.synth_seed));
    out.set("network", "k_l", std::to_string(rc.network.k_lattice));
    out.set("network", "p_w", csv::format_double(rc.network.p_rewire));
    out.set("network", "seed", std::to_string(rc.network.seed));
    if (!rc.weight_source.empty()) out.set("network", "weight_source", rc.weight_source);
    out.set("network", "weight_epsilon", csv::format_double(rc.weight_epsilon));
    std::string kernels;
    for (const auto& k : rc.kernels) kernels += (kernels.empty() ? "" : ",") + svm::kernel_name(k);
    out.set("models", "kernels", kernels);
    std::string cg, gg;
    for (double c : rc.c_grid) cg += (cg.empty() ? "" : ",") + csv::format_double(c);
    for (double g : rc.gamma_grid) gg += (gg.empty() ? "" : ",") + csv::format_double(g);
    out.set("models", "c_grid", cg);
    out.set("models", "gamma_grid", gg);
    out.set("models", "poly_degree", std::to_string(rc.poly_degree));
    out.set("models", "poly_offset", csv::format_double(rc.poly_offset));
    out.set("models", "svm_folds", std::to_string(rc.svm_folds));
    out.set("models", "svm_cv_seed", std::to_string(rc.svm_cv_seed));
    out.set("models", "svm_tol", csv::format_double(rc.svm_cfg.tol));
    out.set("models", "svm_max_iter", std::to_string(rc.svm_cfg.max_iter));
    out.set("models", "stepwise_alpha", csv::format_double(rc.stepwise_alpha));
    out.set("models", "logit_folds", std::to_string(rc.logit_folds));
    out.set("models", "logit_cv_seed", std::to_string(rc.logit_cv_seed));
    out.set("evaluation", "validate_fraction", csv::format_double(rc.plan.validate_fraction));
    out.set("evaluation", "partition_seed", std::to_string(rc.plan.seed));
    out.set("output", "dir", rc.out_dir);
    out.set("output", "threads", std::to_string(rc.threads));
    return out;
}

namespace detail {

template <typename F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + name + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + name + ": " + e.what());
    }
}

}  // namespace detail

struct DataStage {
    data::Dataset dataset;        // cleaned
    std::vector<double> true_eta;  // synth only
};

inline DataStage stage_data(const RunConfig& rc) {
    return detail::stage("data", [&]() -> DataStage {
        if (rc.synth_source) {
            auto res = data::synthesize(rc.synth, rc.synth_seed);
            return {data::clean(res.data), res.true_eta};
        }
        auto schema = data::FeatureSchema::from_config(rc.schema_config);
        auto ds = data::parse_dataset(csv::read_file(rc.csv_path), schema);
        return {data::clean(ds), {}};
    });
}

// Small-world graph over all cleaned rows, weighted by the configured
// respondent attribute when one is named.
inline net::Graph stage_network(const RunConfig& rc, const data::Dataset& ds) {
    return detail::stage("network", [&]() {
        net::SmallWorldConfig cfg = rc.network;
        cfg.n = static_cast<int>(ds.n());
        net::Graph g = net::generate(cfg);
        if (!rc.weight_source.empty()) {
            if (ds.schema.index_of(rc.weight_source) < 0)
                throw ConfigError("weight source variable not in schema: " + rc.weight_source);
            g = net::weight_edges(g, ds.interval_column(rc.weight_source), rc.weight_epsilon);
        }
        return g;
    });
}

inline metrics::NodeMetrics stage_metrics(const net::Graph& g) {
    return detail::stage("metrics", [&]() { return metrics::compute_all(g); });
}

// Adds the six node metrics as interval predictors, joined on row_id.
inline data::Dataset augment_with_metrics(const data::Dataset& ds,
                                          const metrics::NodeMetrics& nm) {
    std::vector<data::Variable> vars = ds.schema.variables();
    for (const auto& name : metrics::NodeMetrics::column_names()) {
        data::Variable v;
        v.name = name;
        v.level = data::Level::Interval;
        v.role = data::Role::Predictor;
        vars.push_back(std::move(v));
    }
    data::Dataset out{data::FeatureSchema(std::move(vars)), {}, {}};
    std::vector<std::vector<double>> cols;
    for (const auto& name : metrics::NodeMetrics::column_names()) cols.push_back(nm.column(name));
    for (size_t r = 0; r < ds.n(); ++r) {
        std::vector<data::Cell> row = ds.rows[r];
        int node = ds.row_ids[r];
        for (const auto& col : cols) row.push_back(data::Cell::num(col[node]));
        out.rows.push_back(std::move(row));
        out.row_ids.push_back(ds.row_ids[r]);
    }
    return out;
}

inline std::vector<int> to_pm1(const std::vector<int>& labels01) {
    std::vector<int> y(labels01.size());
    for (size_t i = 0; i < labels01.size(); ++i) y[i] = labels01[i] == 1 ? 1 : -1;
    return y;
}

inline std::vector<std::vector<double>> matrix_rows(const data::DesignMatrix& dm) {
    std::vector<std::vector<double>> rows;
    rows.reserve(dm.nrows());
    for (size_t r = 0; r < dm.nrows(); ++r) rows.push_back(dm.row(r));
    return rows;
}

struct ArmResult {
    bool graph_metrics = false;
    data::DesignMatrix train_design;  // full columns
    logit::StepwiseResult logit;
    logit::CrossValidation logit_cv;
    svm::GridSearchResult grid;
    std::map<svm::KernelKind, svm::SvmModel> svm_models;
};

// Train every model family on the training split of one arm (with or
// without graph-metric predictors).
inline ArmResult train_arm(const RunConfig& rc, const data::Dataset& train, bool graph_metrics) {
    ArmResult arm;
    arm.graph_metrics = graph_metrics;
    arm.train_design = detail::stage("encode", [&]() { return data::encode(train); });

    detail::stage("train-svm", [&]() {
        auto xrows = matrix_rows(arm.train_design);
        auto y = to_pm1(arm.train_design.labels);
        arm.grid = svm::grid_search(xrows, y, rc.kernels, rc.c_grid, rc.gamma_grid, rc.svm_folds,
                                    rc.svm_cv_seed, rc.svm_cfg, rc.effective_threads(),
                                    rc.poly_degree, rc.poly_offset);
        for (const auto& [kind, sel] : arm.grid.best) {
            svm::SvmTrainConfig cfg = rc.svm_cfg;
            cfg.c = sel.c;
            svm::SvmModel model = svm::train(xrows, y, sel.kernel, cfg);
            model.columns = arm.train_design.columns;
            arm.svm_models.emplace(kind, std::move(model));
        }
        return 0;
    });

    detail::stage("train-logit", [&]() {
        arm.logit = logit::stepwise(arm.train_design, rc.stepwise_alpha);
        arm.logit_cv = logit::cross_validate(arm.logit.design, rc.logit_folds, rc.logit_cv_seed);
        return 0;
    });
    return arm;
}

inline std::string kernel_label(svm::KernelKind k) {
    switch (k) {
        case svm::KernelKind::Linear: return "LINEAR";
        case svm::KernelKind::Polynomial: return "POLY";
        case svm::KernelKind::Rbf: return "RBF";
    }
    return "?";
}

// Scores one arm's models on the shared validation rows, in Table-3 row
// order within the arm (LOGISTIC first, then SVM kernels).
inline std::vector<eval::ScoredModel> score_arm(const ArmResult& arm,
                                                const data::Dataset& validation) {
    std::vector<eval::ScoredModel> out;
    {
        auto val_dm = data::encode_with(validation, arm.logit.model.columns);
        eval::ScoredModel sm;
        sm.meta.model = "LOGISTIC";
        sm.meta.graph_metrics = arm.graph_metrics;
        sm.threshold = 0.5;
        sm.validation.labels = val_dm.labels;
        for (size_t r = 0; r < val_dm.nrows(); ++r)
            sm.validation.scores.push_back(logit::predict_prob(arm.logit.model, val_dm.row(r)));
        out.push_back(std::move(sm));
    }
    auto val_full = data::encode_with(validation, arm.train_design.columns);
    for (const auto& [kind, model] : arm.svm_models) {
        eval::ScoredModel sm;
        sm.meta.model = "SVM";
        sm.meta.graph_metrics = arm.graph_metrics;
        sm.meta.kernel = kernel_label(kind);
        sm.meta.best_c = csv::format_double(model.c);
        sm.threshold = 0.0;
        sm.validation.labels = val_full.labels;
        for (size_t r = 0; r < val_full.nrows(); ++r)
            sm.validation.scores.push_back(svm::decision(model, val_full.row(r)));
        out.push_back(std::move(sm));
    }
    return out;
}

struct RunResult {
    std::vector<eval::EvalSummary> summary;
    std::string out_dir;
};

inline std::string arm_tag(bool graph_metrics) { return graph_metrics ? "metrics" : "nometrics"; }

// Full experiment: clean -> network over all rows -> weight -> metrics ->
// partition -> per-arm design matrices -> SVM grid search + stepwise
// logistic -> validation scoring -> Table-3-format summary and artifacts.
inline RunResult run_all(const RunConfig& rc) {
    namespace fs = std::filesystem;
    fs::create_directories(rc.out_dir);
    auto path = [&](const std::string& name) { return (fs::path(rc.out_dir) / name).string(); };

    csv::write_file(path("config_resolved.ini"), resolved_config(rc).to_string());

    DataStage ds = stage_data(rc);
    csv::write_file(path("dataset.csv"), data::write_dataset_csv(ds.dataset));
    if (!ds.true_eta.empty()) {
        std::string truth = "row_id,eta\n";
        for (size_t r = 0; r < ds.true_eta.size(); ++r)
            truth += std::to_string(r) + ',' + csv::format_double(ds.true_eta[r]) + '\n';
        csv::write_file(path("synth_truth.csv"), truth);
    }

    net::Graph g = stage_network(rc, ds.dataset);
    csv::write_file(path("edges.csv"), net::export_edges(g));

    metrics::NodeMetrics nm = stage_metrics(g);
    csv::write_file(path("metrics.csv"), metrics::write_metrics_csv(nm));

    auto split = detail::stage("partition", [&]() { return data::partition(ds.dataset, rc.plan); });

    std::vector<eval::ScoredModel> scored;  // Table 3 interleaves arms per model family
    std::vector<std::vector<eval::ScoredModel>> arm_scores;
    for (bool graph_metrics : {false, true}) {
        data::Dataset base = graph_metrics ? augment_with_metrics(ds.dataset, nm) : ds.dataset;
        auto arm_split = data::partition(base, rc.plan);
        ArmResult arm = train_arm(rc, arm_split.train, graph_metrics);

        std::string tag = arm_tag(graph_metrics);
        csv::write_file(path("cv_svm_" + tag + ".csv"), svm::write_cv_table_csv(arm.grid));
        for (const auto& [kind, model] : arm.svm_models)
            csv::write_file(path("svm_" + svm::kernel_name(kind) + "_" + tag + ".model"),
                            svm::write_svm_model(model));
        csv::write_file(path("logit_" + tag + ".model"), logit::write_logit_model(arm.logit.model));
        csv::write_file(path("odds_ratios_" + tag + ".csv"),
                        logit::write_odds_ratio_csv(logit::odds_ratio_table(arm.logit.model)));
        csv::write_file(path("logit_cv_" + tag + ".csv"),
                        "cv_auc,cv_error\n" + csv::format_double(arm.logit_cv.cv_auc) + ',' +
                            csv::format_double(arm.logit_cv.cv_error) + '\n');

        arm_scores.push_back(detail::stage("evaluate", [&]() { return score_arm(arm, arm_split.validation); }));
    }

    // Table 3 order: LOGISTIC NO/YES, then per kernel NO/YES.
    size_t per_arm = arm_scores[0].size();
    for (size_t m = 0; m < per_arm; ++m)
        for (size_t a = 0; a < arm_scores.size(); ++a) scored.push_back(arm_scores[a][m]);

    auto rows = detail::stage("evaluate", [&]() { return eval::compare(scored); });
    RunResult res;
    res.out_dir = rc.out_dir;
    for (const auto& row : rows) {
        res.summary.push_back(row.summary);
        std::string tag = row.summary.model == "LOGISTIC"
                              ? "logistic_" + arm_tag(row.summary.graph_metrics)
                              : "svm_" + row.summary.kernel + "_" + arm_tag(row.summary.graph_metrics);
        for (auto& ch : tag) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        csv::write_file(path("roc_" + tag + ".csv"), eval::write_roc_csv(row.roc));
    }
    csv::write_file(path("summary.csv"), eval::write_summary_csv(res.summary));
    return res;
}

}  // namespace svmnet::pipeline
