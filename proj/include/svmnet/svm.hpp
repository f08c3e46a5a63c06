#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

#include "svmnet/csv.hpp"
#include "svmnet/encode.hpp"
#include "svmnet/errors.hpp"

namespace svmnet::svm {

struct DimensionMismatch : DataError {
    DimensionMismatch(size_t a, size_t b)
        : DataError("vector dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct SingleClass : DataError {
    SingleClass() : DataError("training set needs both classes") {}
};

enum class KernelKind { Linear, Polynomial, Rbf };

inline std::string kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Polynomial: return "polynomial";
        case KernelKind::Rbf: return "rbf";
    }
    return "?";
}

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    int degree = 2;      // polynomial
    double offset = 1.0; // polynomial
    double gamma = 1.0;  // rbf, > 0

    static KernelSpec linear() { return {}; }
    static KernelSpec polynomial(int degree = 2, double offset = 1.0) {
        return {KernelKind::Polynomial, degree, offset, 1.0};
    }
    static KernelSpec rbf(double gamma) {
        if (!(gamma > 0.0)) throw ConfigError("rbf gamma must be positive");
        return {KernelKind::Rbf, 2, 1.0, gamma};
    }
};

inline double kernel_eval(const KernelSpec& k, const std::vector<double>& u,
                          const std::vector<double>& v) {
    if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
    switch (k.kind) {
        case KernelKind::Linear: {
            double dot = 0.0;
            for (size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
            return dot;
        }
        case KernelKind::Polynomial: {
            double dot = 0.0;
            for (size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
            return std::pow(dot + k.offset, k.degree);
        }
        case KernelKind::Rbf: {
            double dist2 = 0.0;
            for (size_t i = 0; i < u.size(); ++i) {
                double d = u[i] - v[i];
                dist2 += d * d;
            }
            return std::exp(-k.gamma * dist2);
        }
    }
    return 0.0;
}

struct SvmTrainConfig {
    double c = 1.0;
    double tol = 1e-3;            // max KKT violation at stop
    long max_iter = 10'000'000;   // working-set selections
    size_t cache_bytes = 64u << 20;
};

struct SvmModel {
    KernelSpec kernel;
    double c = 1.0;
    double bias = 0.0;
    bool converged = true;  // false when the iteration budget ran out
    size_t dim = 0;
    std::vector<std::vector<double>> support_x;
    std::vector<int> support_y;     // +-1
    std::vector<double> alpha;      // 0 < alpha <= C
    std::vector<data::EncodedColumn> columns;  // feature provenance for model files
};

// f(x) = sum_i alpha_i y_i K(x_i, x) + bias; predicted label = sign, ties +1.
inline double decision(const SvmModel& m, const std::vector<double>& x) {
    if (x.size() != m.dim) throw DimensionMismatch(x.size(), m.dim);
    double f = m.bias;
    for (size_t i = 0; i < m.alpha.size(); ++i)
        f += m.alpha[i] * m.support_y[i] * kernel_eval(m.kernel, m.support_x[i], x);
    return f;
}

inline int predict_label(const SvmModel& m, const std::vector<double>& x) {
    return decision(m, x) >= 0.0 ? 1 : -1;
}

namespace detail {

// Kernel column cache: the full Gram matrix when it fits the byte budget,
// otherwise an LRU set of columns with exact recomputation on miss. Results
// never depend on the budget.
class KernelCache {
public:
    KernelCache(const std::vector<std::vector<double>>& x, const KernelSpec& k, size_t budget)
        : x_(x), kernel_(k), n_(x.size()) {
        size_t full_bytes = n_ * n_ * sizeof(double);
        if (full_bytes <= budget) {
            full_.resize(n_ * n_);
            for (size_t i = 0; i < n_; ++i)
                for (size_t j = i; j < n_; ++j) {
                    double v = kernel_eval(kernel_, x_[i], x_[j]);
                    full_[i * n_ + j] = v;
                    full_[j * n_ + i] = v;
                }
        } else {
            max_cols_ = std::max<size_t>(2, budget / (n_ * sizeof(double)));
        }
    }

    const double* column(size_t j) {
        if (!full_.empty()) return full_.data() + j * n_;
        auto it = index_.find(j);
        if (it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first.data();
        }
        if (index_.size() >= max_cols_) {
            index_.erase(lru_.back());
            lru_.pop_back();
        }
        std::vector<double> col(n_);
        for (size_t i = 0; i < n_; ++i) col[i] = kernel_eval(kernel_, x_[i], x_[j]);
        lru_.push_front(j);
        auto [pos, inserted] = index_.emplace(j, std::make_pair(std::move(col), lru_.begin()));
        return pos->second.first.data();
    }

    double diag(size_t i) {
        if (!full_.empty()) return full_[i * n_ + i];
        return kernel_eval(kernel_, x_[i], x_[i]);
    }

private:
    const std::vector<std::vector<double>>& x_;
    KernelSpec kernel_;
    size_t n_;
    std::vector<double> full_;
    size_t max_cols_ = 0;
    std::list<size_t> lru_;
    std::unordered_map<size_t, std::pair<std::vector<double>, std::list<size_t>::iterator>> index_;
};

}  // namespace detail

// Soft-margin dual via SMO: minimize 1/2 a'Qa - e'a with 0 <= a <= C and
// y'a = 0, Q_ij = y_i y_j K_ij. Working set is the maximal-KKT-violating
// pair; stop when the violation drops below tol.
inline SvmModel train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      const KernelSpec& kernel, const SvmTrainConfig& cfg) {
    size_t n = x.size();
    if (n == 0 || y.size() != n) throw DataError("bad training input sizes");
    bool has_pos = false, has_neg = false;
    for (int yi : y) {
        if (yi == 1) has_pos = true;
        else if (yi == -1) has_neg = true;
        else throw DataError("labels must be +1/-1");
    }
    if (!has_pos || !has_neg) throw SingleClass();
    for (const auto& row : x)
        if (row.size() != x[0].size()) throw DimensionMismatch(row.size(), x[0].size());
    if (!(cfg.c > 0.0)) throw ConfigError("penalty C must be positive");

    const double C = cfg.c;
    const double tau = 1e-12;
    detail::KernelCache cache(x, kernel, cfg.cache_bytes);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // G_i = sum_j Q_ij a_j - 1

    bool converged = false;
    double final_m = 0.0, final_M = 0.0;
    long it = 0;
    for (; it < cfg.max_iter; ++it) {
        // i maximizes -y_t G_t over I_up, j minimizes it over I_low
        int i = -1, j = -1;
        double m = -std::numeric_limits<double>::infinity();
        double M = std::numeric_limits<double>::infinity();
        for (size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool up = (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
            bool low = (y[t] == -1 && alpha[t] < C) || (y[t] == 1 && alpha[t] > 0.0);
            if (up && v > m) {
                m = v;
                i = static_cast<int>(t);
            }
            if (low && v < M) {
                M = v;
                j = static_cast<int>(t);
            }
        }
        final_m = m;
        final_M = M;
        if (i < 0 || j < 0 || m - M < cfg.tol) {
            converged = true;
            break;
        }

        const double* Ki = cache.column(i);
        const double* Kj = cache.column(j);
        double Kii = cache.diag(i), Kjj = cache.diag(j), Kij = Ki[j];
        double old_ai = alpha[i], old_aj = alpha[j];

        if (y[i] != y[j]) {
            double quad = Kii + Kjj - 2.0 * Kij;
            if (quad <= 0.0) quad = tau;
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = C - diff;
            } else if (diff <= 0.0 && alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = Kii + Kjj - 2.0 * Kij;
            if (quad <= 0.0) quad = tau;
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C && alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = sum - C;
            } else if (sum <= C && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C && alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = sum - C;
            } else if (sum <= C && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        double dai = y[i] * (alpha[i] - old_ai);  // change in a_i y_i
        double daj = y[j] * (alpha[j] - old_aj);
        for (size_t t = 0; t < n; ++t) grad[t] += y[t] * (Ki[t] * dai + Kj[t] * daj);
    }

    // bias: mean of -y_t G_t over free vectors, else KKT interval midpoint
    double b;
    {
        double sum = 0.0;
        long free_count = 0;
        for (size_t t = 0; t < n; ++t) {
            if (alpha[t] > 0.0 && alpha[t] < C) {
                sum += -y[t] * grad[t];
                ++free_count;
            }
        }
        b = free_count > 0 ? sum / free_count : 0.5 * (final_m + final_M);
    }

    SvmModel model;
    model.kernel = kernel;
    model.c = C;
    model.bias = b;
    model.converged = converged;
    model.dim = x[0].size();
    for (size_t t = 0; t < n; ++t) {
        double a = std::min(std::max(alpha[t], 0.0), C);
        if (a > 0.0) {
            model.support_x.push_back(x[t]);
            model.support_y.push_back(y[t]);
            model.alpha.push_back(a);
        }
    }
    return model;
}

// Dual objective of a (possibly intermediate) solution; used for oracle checks.
inline double dual_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                             const KernelSpec& kernel, const std::vector<double>& alpha) {
    size_t n = x.size();
    double quad = 0.0, lin = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        lin += alpha[i];
        for (size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel_eval(kernel, x[i], x[j]);
        }
    }
    return 0.5 * quad - lin;
}

inline std::vector<double> model_alphas(const SvmModel& m, size_t n,
                                        const std::vector<std::vector<double>>& x) {
    // reconstruct the full-length alpha vector by matching support rows
    std::vector<double> full(n, 0.0);
    std::vector<bool> used(m.alpha.size(), false);
    for (size_t t = 0; t < n; ++t) {
        for (size_t s = 0; s < m.alpha.size(); ++s) {
            if (!used[s] && m.support_x[s] == x[t]) {
                full[t] = m.alpha[s];
                used[s] = true;
                break;
            }
        }
    }
    return full;
}

// -------- model files --------
// Human-readable structured text; doubles use round-trip formatting.

inline std::string write_svm_model(const SvmModel& m) {
    std::string out = "svmnet_svm_model 1\n";
    out += "kernel " + kernel_name(m.kernel.kind);
    if (m.kernel.kind == KernelKind::Polynomial)
        out += " degree " + std::to_string(m.kernel.degree) + " offset " +
               csv::format_double(m.kernel.offset);
    if (m.kernel.kind == KernelKind::Rbf) out += " gamma " + csv::format_double(m.kernel.gamma);
    out += '\n';
    out += "c " + csv::format_double(m.c) + '\n';
    out += "bias " + csv::format_double(m.bias) + '\n';
    out += "converged " + std::string(m.converged ? "1" : "0") + '\n';
    out += "columns " + std::to_string(m.columns.size()) + '\n';
    for (const auto& col : m.columns)
        out += "column " + col.name + " " + col.source + " " + col.tag + " " +
               csv::format_double(col.mean) + " " + csv::format_double(col.sd) + '\n';
    out += "dim " + std::to_string(m.dim) + '\n';
    out += "support_vectors " + std::to_string(m.alpha.size()) + '\n';
    for (size_t s = 0; s < m.alpha.size(); ++s) {
        out += "sv " + csv::format_double(m.alpha[s]) + " " + std::to_string(m.support_y[s]);
        for (double v : m.support_x[s]) out += " " + csv::format_double(v);
        out += '\n';
    }
    return out;
}

inline SvmModel read_svm_model(const std::string& text) {
    auto lines = csv::split_lines(text);
    if (lines.empty() || lines[0] != "svmnet_svm_model 1") throw DataError("bad svm model header");
    SvmModel m;
    size_t li = 1;
    auto tokens = [&](const std::string& line) { return data::split_tokens(line); };
    auto expect = [&](const std::string& key) {
        if (li >= lines.size()) throw DataError("svm model: missing " + key);
        auto t = tokens(lines[li]);
        if (t.empty() || t[0] != key) throw DataError("svm model: expected " + key);
        ++li;
        return t;
    };
    auto t = expect("kernel");
    if (t.size() < 2) throw DataError("svm model: bad kernel line");
    if (t[1] == "linear") m.kernel = KernelSpec::linear();
    else if (t[1] == "polynomial") {
        if (t.size() != 6 || t[2] != "degree" || t[4] != "offset")
            throw DataError("svm model: bad polynomial kernel line");
        double off;
        csv::parse_double(t[5], off);
        m.kernel = KernelSpec::polynomial(std::stoi(t[3]), off);
    } else if (t[1] == "rbf") {
        if (t.size() != 4 || t[2] != "gamma") throw DataError("svm model: bad rbf kernel line");
        double g;
        csv::parse_double(t[3], g);
        m.kernel = KernelSpec::rbf(g);
    } else {
        throw DataError("svm model: unknown kernel " + t[1]);
    }
    csv::parse_double(expect("c")[1], m.c);
    csv::parse_double(expect("bias")[1], m.bias);
    m.converged = expect("converged")[1] == "1";
    size_t ncols = std::stoul(expect("columns")[1]);
    for (size_t i = 0; i < ncols; ++i) {
        auto ct = expect("column");
        if (ct.size() != 6) throw DataError("svm model: bad column line");
        data::EncodedColumn col;
        col.name = ct[1];
        col.source = ct[2];
        col.tag = ct[3];
        csv::parse_double(ct[4], col.mean);
        csv::parse_double(ct[5], col.sd);
        m.columns.push_back(col);
    }
    m.dim = std::stoul(expect("dim")[1]);
    size_t nsv = std::stoul(expect("support_vectors")[1]);
    for (size_t s = 0; s < nsv; ++s) {
        auto st = expect("sv");
        if (st.size() != 3 + m.dim) throw DataError("svm model: bad sv line");
        double a;
        csv::parse_double(st[1], a);
        m.alpha.push_back(a);
        m.support_y.push_back(std::stoi(st[2]));
        std::vector<double> xrow(m.dim);
        for (size_t d = 0; d < m.dim; ++d) csv::parse_double(st[3 + d], xrow[d]);
        m.support_x.push_back(std::move(xrow));
    }
    return m;
}

}  // namespace svmnet::svm
