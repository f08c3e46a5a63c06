// svmnet command line: runs the full classification experiment or any single
// stage against the documented file formats.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "svmnet/pipeline.hpp"

namespace fs = std::filesystem;
using namespace svmnet;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    long seed_override = -1;
    bool has_seed_override = false;
    unsigned threads = 0;
};

pipeline::RunConfig load_run_config(const CommonArgs& args) {
    Config cfg = Config::load(args.config_path);
    auto rc = pipeline::parse_run_config(cfg, args.seed_override, args.has_seed_override);
    if (!args.out_dir.empty()) rc.out_dir = args.out_dir;
    if (args.threads > 0) rc.threads = args.threads;
    return rc;
}

data::FeatureSchema config_schema(const pipeline::RunConfig& rc) {
    if (rc.synth_source) return data::FeatureSchema(data::synth_schema_vars(rc.synth));
    return data::FeatureSchema::from_config(rc.schema_config);
}

data::Dataset load_clean_dataset(const pipeline::RunConfig& rc, const std::string& data_path) {
    auto schema = config_schema(rc);
    return data::clean(data::parse_dataset(csv::read_file(data_path), schema));
}

void write_eval_outputs(const std::string& out_dir, const eval::ScoredModel& sm,
                        const std::string& tag) {
    fs::create_directories(out_dir);
    auto rows = eval::compare({sm});
    csv::write_file((fs::path(out_dir) / ("summary_" + tag + ".csv")).string(),
                    eval::write_summary_csv({rows[0].summary}));
    csv::write_file((fs::path(out_dir) / ("roc_" + tag + ".csv")).string(),
                    eval::write_roc_csv(rows[0].roc));
}

bool uses_graph_metrics(const std::vector<data::EncodedColumn>& cols) {
    for (const auto& c : cols)
        for (const auto& name : metrics::NodeMetrics::column_names())
            if (c.source == name) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"social-network-augmented disease classification pipeline"};
    app.require_subcommand(1);

    CommonArgs common;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        auto* opt = sub->add_option("--config", common.config_path, "INI config file");
        if (needs_config) opt->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--seed-override", common.seed_override,
                        "master seed replacing all configured stage seeds")
            ->each([&](const std::string&) { common.has_seed_override = true; });
        sub->add_option("--threads", common.threads, "worker cap for grid search");
    };

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    add_common(run_cmd);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "draw a synthetic dataset");
    add_common(synth_cmd);
    std::string synth_data_out = "dataset.csv", synth_truth_out;
    synth_cmd->add_option("--out-data", synth_data_out, "dataset csv path");
    synth_cmd->add_option("--out-truth", synth_truth_out, "generating scores csv path");

    // network
    auto* network_cmd = app.add_subcommand("network", "generate the weighted small-world graph");
    add_common(network_cmd);
    std::string net_data_in, net_edges_out = "edges.csv";
    network_cmd->add_option("--data", net_data_in, "cleaned dataset csv")->required();
    network_cmd->add_option("--out-edges", net_edges_out, "edge list csv path");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "node centrality metrics for an edge list");
    std::string met_edges_in, met_out = "metrics.csv";
    metrics_cmd->add_option("--edges", met_edges_in, "edge list csv")->required();
    metrics_cmd->add_option("--out-metrics", met_out, "metrics csv path");

    // train-svm
    auto* tsvm_cmd = app.add_subcommand("train-svm", "grid search + final SVM models");
    add_common(tsvm_cmd);
    std::string tsvm_data, tsvm_metrics;
    tsvm_cmd->add_option("--data", tsvm_data, "cleaned dataset csv")->required();
    tsvm_cmd->add_option("--metrics", tsvm_metrics, "metrics csv (adds graph predictors)");

    // train-logit
    auto* tlog_cmd = app.add_subcommand("train-logit", "stepwise logistic model");
    add_common(tlog_cmd);
    std::string tlog_data, tlog_metrics;
    tlog_cmd->add_option("--data", tlog_data, "cleaned dataset csv")->required();
    tlog_cmd->add_option("--metrics", tlog_metrics, "metrics csv (adds graph predictors)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score a model file on the validation split");
    add_common(eval_cmd);
    std::string eval_data, eval_metrics, eval_model;
    eval_cmd->add_option("--data", eval_data, "cleaned dataset csv")->required();
    eval_cmd->add_option("--metrics", eval_metrics, "metrics csv");
    eval_cmd->add_option("--model", eval_model, "model file (svm or logit)")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "merge summary csv files");
    std::vector<std::string> report_inputs;
    std::string report_out = "report.csv";
    report_cmd->add_option("--inputs", report_inputs, "summary csv files")->required();
    report_cmd->add_option("--out-report", report_out, "merged csv path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto rc = load_run_config(common);
            auto res = pipeline::run_all(rc);
            std::cout << eval::write_summary_csv(res.summary);
            std::cout << "artifacts in " << res.out_dir << "\n";
        } else if (*synth_cmd) {
            auto rc = load_run_config(common);
            if (!rc.synth_source) throw ConfigError("synth subcommand needs a [synth] section");
            auto res = data::synthesize(rc.synth, rc.synth_seed);
            csv::write_file(synth_data_out, data::write_dataset_csv(res.data));
            if (!synth_truth_out.empty()) {
                std::string truth = "row_id,eta\n";
                for (size_t r = 0; r < res.true_eta.size(); ++r)
                    truth += std::to_string(r) + ',' + csv::format_double(res.true_eta[r]) + '\n';
                csv::write_file(synth_truth_out, truth);
            }
            std::cout << "wrote " << res.data.n() << " rows to " << synth_data_out << "\n";
        } else if (*network_cmd) {
            auto rc = load_run_config(common);
            auto ds = load_clean_dataset(rc, net_data_in);
            auto g = pipeline::stage_network(rc, ds);
            csv::write_file(net_edges_out, net::export_edges(g));
            std::cout << "wrote " << g.edge_count() << " edges to " << net_edges_out << "\n";
        } else if (*metrics_cmd) {
            auto g = net::import_edges(csv::read_file(met_edges_in));
            auto nm = pipeline::stage_metrics(g);
            csv::write_file(met_out, metrics::write_metrics_csv(nm));
            std::cout << "wrote metrics for " << g.node_count() << " nodes to " << met_out << "\n";
        } else if (*tsvm_cmd || *tlog_cmd) {
            bool is_svm = static_cast<bool>(*tsvm_cmd);
            auto rc = load_run_config(common);
            auto ds = load_clean_dataset(rc, is_svm ? tsvm_data : tlog_data);
            const std::string& metrics_path = is_svm ? tsvm_metrics : tlog_metrics;
            bool graph_metrics = !metrics_path.empty();
            if (graph_metrics) {
                auto nm = metrics::read_metrics_csv(csv::read_file(metrics_path));
                ds = pipeline::augment_with_metrics(ds, nm);
            }
            auto split = data::partition(ds, rc.plan);
            auto arm = pipeline::train_arm(rc, split.train, graph_metrics);
            std::string tag = pipeline::arm_tag(graph_metrics);
            fs::create_directories(rc.out_dir);
            auto out = [&](const std::string& f) { return (fs::path(rc.out_dir) / f).string(); };
            if (is_svm) {
                csv::write_file(out("cv_svm_" + tag + ".csv"), svm::write_cv_table_csv(arm.grid));
                for (const auto& [kind, model] : arm.svm_models)
                    csv::write_file(out("svm_" + svm::kernel_name(kind) + "_" + tag + ".model"),
                                    svm::write_svm_model(model));
                std::cout << "wrote svm models to " << rc.out_dir << "\n";
            } else {
                csv::write_file(out("logit_" + tag + ".model"),
                                logit::write_logit_model(arm.logit.model));
                csv::write_file(out("odds_ratios_" + tag + ".csv"),
                                logit::write_odds_ratio_csv(logit::odds_ratio_table(arm.logit.model)));
                csv::write_file(out("logit_cv_" + tag + ".csv"),
                                "cv_auc,cv_error\n" + csv::format_double(arm.logit_cv.cv_auc) + ',' +
                                    csv::format_double(arm.logit_cv.cv_error) + '\n');
                std::cout << "wrote logistic model to " << rc.out_dir << "\n";
            }
        } else if (*eval_cmd) {
            auto rc = load_run_config(common);
            auto ds = load_clean_dataset(rc, eval_data);
            if (!eval_metrics.empty()) {
                auto nm = metrics::read_metrics_csv(csv::read_file(eval_metrics));
                ds = pipeline::augment_with_metrics(ds, nm);
            }
            auto split = data::partition(ds, rc.plan);
            std::string text = csv::read_file(eval_model);
            eval::ScoredModel sm;
            std::string tag;
            if (text.rfind("svmnet_svm_model", 0) == 0) {
                auto model = svm::read_svm_model(text);
                auto val = data::encode_with(split.validation, model.columns);
                sm.meta.model = "SVM";
                sm.meta.graph_metrics = uses_graph_metrics(model.columns);
                sm.meta.kernel = pipeline::kernel_label(model.kernel.kind);
                sm.meta.best_c = csv::format_double(model.c);
                sm.threshold = 0.0;
                sm.validation.labels = val.labels;
                for (size_t r = 0; r < val.nrows(); ++r)
                    sm.validation.scores.push_back(svm::decision(model, val.row(r)));
                tag = "svm_" + svm::kernel_name(model.kernel.kind) + "_" +
                      pipeline::arm_tag(sm.meta.graph_metrics);
            } else if (text.rfind("svmnet_logit_model", 0) == 0) {
                auto model = logit::read_logit_model(text);
                auto val = data::encode_with(split.validation, model.columns);
                sm.meta.model = "LOGISTIC";
                sm.meta.graph_metrics = uses_graph_metrics(model.columns);
                sm.threshold = 0.5;
                sm.validation.labels = val.labels;
                for (size_t r = 0; r < val.nrows(); ++r)
                    sm.validation.scores.push_back(logit::predict_prob(model, val.row(r)));
                tag = "logistic_" + pipeline::arm_tag(sm.meta.graph_metrics);
            } else {
                throw DataError("unrecognized model file: " + eval_model);
            }
            write_eval_outputs(rc.out_dir, sm, tag);
            std::cout << "wrote evaluation to " << rc.out_dir << "\n";
        } else if (*report_cmd) {
            std::vector<std::string> texts;
            for (const auto& p : report_inputs) texts.push_back(csv::read_file(p));
            csv::write_file(report_out, eval::merge_summaries(texts));
            std::cout << "wrote " << report_out << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
