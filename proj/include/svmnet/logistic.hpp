#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "svmnet/encode.hpp"
#include "svmnet/evaluation.hpp"
#include "svmnet/partition.hpp"

namespace svmnet::logit {

struct SingleClass : DataError {
    SingleClass() : DataError("logistic fit needs both classes") {}
};

struct Singular : NumericError {
    Singular() : NumericError("information matrix is singular (collinear columns?)") {}
};

struct UnknownTerm : DataError {
    explicit UnknownTerm(const std::string& t) : DataError("unknown term: " + t) {}
};

struct NotConverged : NumericError {
    NotConverged() : NumericError("model did not converge") {}
};

struct DimensionMismatch : DataError {
    DimensionMismatch(size_t a, size_t b)
        : DataError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

// Standard normal CDF via erfc; absolute error well below 1e-7.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct LogisticModel {
    std::vector<std::string> terms;         // "Intercept" first
    std::vector<std::string> term_sources;  // schema variable per term, "" for intercept
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;  // inverse observed information
    double log_likelihood = 0.0;
    bool converged = false;
    bool separation = false;  // ||beta||_inf blew past the divergence heuristic
    std::vector<data::EncodedColumn> columns;  // predictor encoding (no intercept)

    double se(size_t term_idx) const { return std::sqrt(covariance(term_idx, term_idx)); }

    int term_index(const std::string& name) const {
        for (size_t i = 0; i < terms.size(); ++i)
            if (terms[i] == name) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline double log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta) {
    // sum_i [ y_i eta_i - log(1 + exp(eta_i)) ], stable for large |eta|
    Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        double e = eta[i];
        double log1pexp = e > 30.0 ? e : std::log1p(std::exp(e));
        ll += y[i] * e - log1pexp;
    }
    return ll;
}

}  // namespace detail

// Newton maximization of the Bernoulli log-likelihood with step-halving.
// X carries predictor columns only; the intercept column is added here.
inline LogisticModel fit(const Eigen::MatrixXd& Xpred, const std::vector<int>& labels,
                         const std::vector<std::string>& names,
                         const std::vector<std::string>& sources) {
    const Eigen::Index n = Xpred.rows(), k = Xpred.cols() + 1;
    if (static_cast<Eigen::Index>(labels.size()) != n) throw DimensionMismatch(labels.size(), n);
    if (n <= k) throw DataError("need more rows than coefficients");
    bool pos = false, neg = false;
    for (int y : labels) (y == 1 ? pos : neg) = true;
    if (!pos || !neg) throw SingleClass();

    Eigen::MatrixXd X(n, k);
    X.col(0).setOnes();
    X.rightCols(k - 1) = Xpred;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[i];

    const double grad_tol = 1e-8, step_tol = 1e-10, separation_norm = 30.0;
    const int max_newton = 100, max_halvings = 20;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    double ll = detail::log_likelihood(X, y, beta);
    bool converged = false, separated = false;
    Eigen::MatrixXd H(k, k);

    for (int iter = 0; iter < max_newton; ++iter) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd p(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
            w[i] = p[i] * (1.0 - p[i]);
        }
        Eigen::VectorXd grad = X.transpose() * (y - p);
        H = X.transpose() * w.asDiagonal() * X;

        if (grad.lpNorm<Eigen::Infinity>() < grad_tol) {
            converged = true;
            break;
        }

        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-14)
            throw Singular();
        Eigen::VectorXd step = ldlt.solve(grad);
        if (!step.allFinite() || (H * step - grad).lpNorm<Eigen::Infinity>() >
                                     1e-6 * std::max(1.0, grad.lpNorm<Eigen::Infinity>()))
            throw Singular();

        // step-halving keeps the likelihood non-decreasing
        double scale = 1.0;
        Eigen::VectorXd candidate;
        double new_ll = 0.0;
        for (int h = 0; h <= max_halvings; ++h) {
            candidate = beta + scale * step;
            new_ll = detail::log_likelihood(X, y, candidate);
            if (new_ll >= ll) break;
            scale *= 0.5;
        }
        double delta = (candidate - beta).lpNorm<Eigen::Infinity>();
        beta = candidate;
        ll = new_ll;

        if (beta.lpNorm<Eigen::Infinity>() > separation_norm) {
            separated = true;
            break;
        }
        if (delta < step_tol) {
            Eigen::VectorXd p2 = (X * beta).unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
            converged = (X.transpose() * (y - p2)).lpNorm<Eigen::Infinity>() < grad_tol;
            break;
        }
    }

    // final information matrix at beta
    {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double pi = 1.0 / (1.0 + std::exp(-eta[i]));
            w[i] = pi * (1.0 - pi);
        }
        H = X.transpose() * w.asDiagonal() * X;
    }

    LogisticModel m;
    m.terms.push_back("Intercept");
    m.term_sources.push_back("");
    for (size_t i = 0; i < names.size(); ++i) {
        m.terms.push_back(names[i]);
        m.term_sources.push_back(i < sources.size() ? sources[i] : names[i]);
    }
    m.beta = beta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success) throw Singular();
    m.covariance = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    m.log_likelihood = ll;
    m.converged = converged && !separated;
    m.separation = separated;
    return m;
}

inline LogisticModel fit(const data::DesignMatrix& dm) {
    Eigen::MatrixXd X(dm.nrows(), dm.ncols());
    for (size_t r = 0; r < dm.nrows(); ++r)
        for (size_t c = 0; c < dm.ncols(); ++c) X(r, c) = dm.at(r, c);
    std::vector<std::string> names, sources;
    for (const auto& col : dm.columns) {
        names.push_back(col.name);
        sources.push_back(col.source);
    }
    LogisticModel m = fit(X, dm.labels, names, sources);
    m.columns = dm.columns;
    return m;
}

struct WaldTest {
    double z;
    double p_value;
};

inline WaldTest wald(const LogisticModel& m, const std::string& term) {
    int idx = m.term_index(term);
    if (idx < 0) throw UnknownTerm(term);
    double z = m.beta[idx] / m.se(idx);
    double p = 2.0 * (1.0 - normal_cdf(std::abs(z)));
    return {z, p};
}

struct OddsRatioRow {
    std::string term;
    double estimate;
    double ci_low;
    double ci_high;
};

// exp(beta) with 95% Wald bounds, one row per non-intercept term.
inline std::vector<OddsRatioRow> odds_ratio_table(const LogisticModel& m) {
    if (!m.converged) throw NotConverged();
    std::vector<OddsRatioRow> rows;
    for (size_t t = 1; t < m.terms.size(); ++t) {
        double b = m.beta[t], se = m.se(t);
        rows.push_back({m.terms[t], std::exp(b), std::exp(b - 1.96 * se), std::exp(b + 1.96 * se)});
    }
    return rows;
}

inline std::string write_odds_ratio_csv(const std::vector<OddsRatioRow>& rows) {
    std::string out = "effect,estimate,ci_low,ci_high\n";
    for (const auto& r : rows)
        out += r.term + ',' + csv::format_double(r.estimate) + ',' + csv::format_double(r.ci_low) +
               ',' + csv::format_double(r.ci_high) + '\n';
    return out;
}

inline double predict_prob(const LogisticModel& m, const std::vector<double>& x) {
    if (x.size() + 1 != static_cast<size_t>(m.beta.size()))
        throw DimensionMismatch(x.size() + 1, m.beta.size());
    double eta = m.beta[0];
    for (size_t i = 0; i < x.size(); ++i) eta += m.beta[i + 1] * x[i];
    return 1.0 / (1.0 + std::exp(-eta));
}

struct StepwiseResult {
    LogisticModel model;
    data::DesignMatrix design;  // kept columns, same row order as input
    std::vector<std::pair<std::string, double>> removed;  // (source variable, group p)
};

// Backward elimination on Wald p-values: refit, drop the term group with the
// largest p above alpha (nominal groups leave as a whole, judged by their
// largest member p), stop when everything remaining is significant. The
// intercept always stays.
inline StepwiseResult stepwise(const data::DesignMatrix& dm, double alpha = 0.05) {
    data::DesignMatrix cur = dm;
    StepwiseResult res;
    while (true) {
        LogisticModel m = fit(cur);
        if (cur.ncols() == 0) {
            res.model = std::move(m);
            res.design = std::move(cur);
            return res;
        }
        // group p = max member p, grouped by source variable
        std::vector<std::string> group_order;
        std::map<std::string, double> group_p;
        for (size_t t = 1; t < m.terms.size(); ++t) {
            double p = wald(m, m.terms[t]).p_value;
            const std::string& src = m.term_sources[t];
            if (!group_p.count(src)) group_order.push_back(src);
            group_p[src] = std::max(group_p.count(src) ? group_p[src] : 0.0, p);
        }
        std::string worst;
        double worst_p = -1.0;
        for (const auto& src : group_order) {
            if (group_p[src] > worst_p) {
                worst_p = group_p[src];
                worst = src;
            }
        }
        if (worst_p <= alpha) {
            res.model = std::move(m);
            res.design = std::move(cur);
            return res;
        }
        res.removed.emplace_back(worst, worst_p);

        data::DesignMatrix next;
        next.labels = cur.labels;
        std::vector<size_t> keep;
        for (size_t c = 0; c < cur.ncols(); ++c) {
            if (cur.columns[c].source != worst) {
                keep.push_back(c);
                next.columns.push_back(cur.columns[c]);
            }
        }
        next.values.resize(cur.nrows() * keep.size());
        for (size_t r = 0; r < cur.nrows(); ++r)
            for (size_t c = 0; c < keep.size(); ++c)
                next.values[r * keep.size() + c] = cur.at(r, keep[c]);
        cur = std::move(next);
    }
}

struct CrossValidation {
    double cv_auc = 0.0;    // pooled held-out scores
    double cv_error = 0.0;  // misclassification at 0.5
};

// Pooled k-fold validation: fit on k-1 folds, score the held-out fold, and
// compute one AUC over all held-out scores (well-defined down to
// leave-one-out, where per-fold AUC would be degenerate).
inline CrossValidation cross_validate(const data::DesignMatrix& dm, size_t folds, long seed) {
    auto fold_sets = data::kfold_indices(dm.nrows(), folds, seed);
    std::vector<double> scores(dm.nrows());
    for (const auto& fold : fold_sets) {
        std::vector<bool> held(dm.nrows(), false);
        for (size_t idx : fold) held[idx] = true;
        data::DesignMatrix train;
        train.columns = dm.columns;
        for (size_t r = 0; r < dm.nrows(); ++r) {
            if (held[r]) continue;
            train.labels.push_back(dm.labels[r]);
            for (size_t c = 0; c < dm.ncols(); ++c) train.values.push_back(dm.at(r, c));
        }
        LogisticModel m = fit(train);
        for (size_t idx : fold) scores[idx] = predict_prob(m, dm.row(idx));
    }
    eval::ScoredSet ss{scores, dm.labels};
    CrossValidation cv;
    cv.cv_auc = eval::auc(ss);
    long wrong = 0;
    for (size_t i = 0; i < scores.size(); ++i)
        if ((scores[i] > 0.5 ? 1 : 0) != dm.labels[i]) ++wrong;
    cv.cv_error = static_cast<double>(wrong) / scores.size();
    return cv;
}

// -------- model files --------

inline std::string write_logit_model(const LogisticModel& m) {
    std::string out = "svmnet_logit_model 1\n";
    out += "converged " + std::string(m.converged ? "1" : "0") + '\n';
    out += "separation " + std::string(m.separation ? "1" : "0") + '\n';
    out += "log_likelihood " + csv::format_double(m.log_likelihood) + '\n';
    out += "terms " + std::to_string(m.terms.size()) + '\n';
    for (size_t t = 0; t < m.terms.size(); ++t)
        out += "term " + m.terms[t] + " " + (t == 0 ? "-" : m.term_sources[t]) + " " +
               csv::format_double(m.beta[t]) + " " + csv::format_double(m.se(t)) + '\n';
    out += "columns " + std::to_string(m.columns.size()) + '\n';
    for (const auto& col : m.columns)
        out += "column " + col.name + " " + col.source + " " + col.tag + " " +
               csv::format_double(col.mean) + " " + csv::format_double(col.sd) + '\n';
    out += "covariance " + std::to_string(m.covariance.rows()) + '\n';
    for (Eigen::Index r = 0; r < m.covariance.rows(); ++r) {
        out += "cov";
        for (Eigen::Index c = 0; c < m.covariance.cols(); ++c)
            out += " " + csv::format_double(m.covariance(r, c));
        out += '\n';
    }
    return out;
}

inline LogisticModel read_logit_model(const std::string& text) {
    auto lines = csv::split_lines(text);
    if (lines.empty() || lines[0] != "svmnet_logit_model 1")
        throw DataError("bad logit model header");
    LogisticModel m;
    size_t li = 1;
    auto expect = [&](const std::string& key) {
        if (li >= lines.size()) throw DataError("logit model: missing " + key);
        auto t = data::split_tokens(lines[li]);
        if (t.empty() || t[0] != key) throw DataError("logit model: expected " + key);
        ++li;
        return t;
    };
    m.converged = expect("converged")[1] == "1";
    m.separation = expect("separation")[1] == "1";
    csv::parse_double(expect("log_likelihood")[1], m.log_likelihood);
    size_t nterms = std::stoul(expect("terms")[1]);
    m.beta.resize(nterms);
    for (size_t t = 0; t < nterms; ++t) {
        auto tt = expect("term");
        if (tt.size() != 5) throw DataError("logit model: bad term line");
        m.terms.push_back(tt[1]);
        m.term_sources.push_back(tt[2] == "-" ? "" : tt[2]);
        csv::parse_double(tt[3], m.beta[t]);
    }
    size_t ncols = std::stoul(expect("columns")[1]);
    for (size_t i = 0; i < ncols; ++i) {
        auto ct = expect("column");
        if (ct.size() != 6) throw DataError("logit model: bad column line");
        data::EncodedColumn col;
        col.name = ct[1];
        col.source = ct[2];
        col.tag = ct[3];
        csv::parse_double(ct[4], col.mean);
        csv::parse_double(ct[5], col.sd);
        m.columns.push_back(col);
    }
    size_t dim = std::stoul(expect("covariance")[1]);
    m.covariance.resize(dim, dim);
    for (size_t r = 0; r < dim; ++r) {
        auto ct = expect("cov");
        if (ct.size() != dim + 1) throw DataError("logit model: bad covariance line");
        for (size_t c = 0; c < dim; ++c) csv::parse_double(ct[c + 1], m.covariance(r, c));
    }
    return m;
}

}  // namespace svmnet::logit
