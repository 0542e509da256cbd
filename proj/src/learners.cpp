#include "mswig/learners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mswig/rng.hpp"

namespace mswig {

namespace {

constexpr double kProbClip = 1e-6;

double clip_prob(double p) { return std::min(1.0 - kProbClip, std::max(kProbClip, p)); }

// type-1 (inf-definition) quantile of sorted weighted values
double weighted_quantile(const std::vector<std::pair<double, double>>& sorted_vw, double u) {
    double total = 0.0;
    for (const auto& [v, w] : sorted_vw) total += w;
    double cum = 0.0;
    for (const auto& [v, w] : sorted_vw) {
        cum += w;
        if (cum >= u * total - 1e-12) return v;
    }
    return sorted_vw.back().first;
}

}  // namespace

Task parse_task(const std::string& s) {
    if (s == "mean") return Task::Mean;
    if (s == "probability") return Task::Probability;
    if (s == "quantile") return Task::Quantile;
    throw std::invalid_argument("unknown task: " + s);
}

Family parse_family(const std::string& s) {
    if (s == "linear") return Family::Linear;
    if (s == "logistic") return Family::Logistic;
    if (s == "trees" || s == "hist_gradient_trees") return Family::HistGradientTrees;
    if (s == "knn") return Family::KNN;
    if (s == "stratified" || s == "stratified_empirical") return Family::StratifiedEmpirical;
    throw std::invalid_argument("unknown learner family: " + s);
}

const char* to_string(Task t) {
    switch (t) {
        case Task::Mean: return "mean";
        case Task::Probability: return "probability";
        case Task::Quantile: return "quantile";
    }
    return "?";
}

const char* to_string(Family f) {
    switch (f) {
        case Family::Linear: return "linear";
        case Family::Logistic: return "logistic";
        case Family::HistGradientTrees: return "hist_gradient_trees";
        case Family::KNN: return "knn";
        case Family::StratifiedEmpirical: return "stratified_empirical";
    }
    return "?";
}

double Predictor::predict_quantile(const double*, double) const {
    throw std::logic_error("predictor does not support quantile levels");
}

namespace {

struct ConstantPredictor : Predictor {
    double value;
    explicit ConstantPredictor(double v) : value(v) {}
    double predict(const double*) const override { return value; }
    double predict_quantile(const double*, double) const override { return value; }
};

// ---- linear / logistic -----------------------------------------------------

struct LinearPredictor : Predictor {
    Eigen::VectorXd beta;  // intercept first
    bool logistic = false;
    double predict(const double* x) const override {
        double z = beta[0];
        for (int j = 1; j < beta.size(); ++j) z += beta[j] * x[j - 1];
        if (logistic) return clip_prob(1.0 / (1.0 + std::exp(-z)));
        return z;
    }
};

Eigen::MatrixXd design_matrix(const Matrix& x, const std::vector<int>& rows) {
    Eigen::MatrixXd d(rows.size(), x.p + 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        d(i, 0) = 1.0;
        for (int j = 0; j < x.p; ++j) d(i, j + 1) = x.at(rows[i], j);
    }
    return d;
}

PredictorPtr fit_linear(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                        const std::vector<double>* w, const std::vector<int>& rows) {
    Eigen::MatrixXd d = design_matrix(x, rows);
    Eigen::VectorXd t(rows.size());
    Eigen::VectorXd sw = Eigen::VectorXd::Ones(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        t[i] = y[rows[i]];
        if (w) sw[i] = (*w)[rows[i]];
    }
    Eigen::MatrixXd dw = sw.asDiagonal() * d;
    Eigen::MatrixXd gram = d.transpose() * dw;
    Eigen::VectorXd rhs = d.transpose() * (sw.asDiagonal() * t);

    auto solver = std::make_shared<LinearPredictor>();
    double ridge = spec.ridge;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (ridge == 0.0 && lu.rank() < gram.rows()) {
        ridge = 1e-8;
        solver->diag.ridge_fallback = true;
    }
    if (ridge > 0.0) gram.diagonal().array() += ridge;
    solver->beta = gram.ldlt().solve(rhs);
    return solver;
}

PredictorPtr fit_logistic(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                          const std::vector<double>* w, const std::vector<int>& rows) {
    bool all0 = true, all1 = true;
    for (int r : rows) {
        if (y[r] != 0.0) all0 = false;
        if (y[r] != 1.0) all1 = false;
    }
    if (all0 || all1) {
        auto c = std::make_shared<ConstantPredictor>(all0 ? 0.0 : 1.0);
        c->diag.degenerate_constant = true;
        return c;
    }

    Eigen::MatrixXd d = design_matrix(x, rows);
    Eigen::VectorXd t(rows.size());
    Eigen::VectorXd sw = Eigen::VectorXd::Ones(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        t[i] = y[rows[i]];
        if (w) sw[i] = (*w)[rows[i]];
    }
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.cols());
    auto out = std::make_shared<LinearPredictor>();
    out->logistic = true;
    for (int it = 0; it < spec.max_iter; ++it) {
        Eigen::VectorXd eta = d * beta;
        Eigen::VectorXd mu = eta.unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
        Eigen::VectorXd wt = mu.array() * (1.0 - mu.array()) * sw.array();
        Eigen::MatrixXd h = d.transpose() * wt.asDiagonal() * d;
        h.diagonal().array() += 1e-10;  // separation guard
        Eigen::VectorXd g = d.transpose() * (sw.array() * (t - mu).array()).matrix();
        Eigen::VectorXd step = h.ldlt().solve(g);
        beta += step;
        out->diag.iterations = it + 1;
        if (step.norm() < 1e-10) break;
    }
    out->beta = beta;
    return out;
}

// ---- stratified empirical ---------------------------------------------------

struct CellStats {
    std::vector<std::pair<double, double>> sorted_vw;  // (value, weight)
    double mean = 0.0;
};

struct StratifiedPredictor : Predictor {
    Task task;
    double quantile_u;
    std::map<std::vector<double>, CellStats> cells;
    CellStats global;

    const CellStats& lookup(const double* x) const {
        std::vector<double> key(x, x + dim);
        auto it = cells.find(key);
        return it == cells.end() ? global : it->second;  // unseen cell: global stats
    }
    int dim = 0;

    double predict(const double* x) const override {
        const auto& c = lookup(x);
        if (task == Task::Quantile) return weighted_quantile(c.sorted_vw, quantile_u);
        return c.mean;
    }
    double predict_quantile(const double* x, double u) const override {
        return weighted_quantile(lookup(x).sorted_vw, u);
    }
};

PredictorPtr fit_stratified(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                            const std::vector<double>* w, const std::vector<int>& rows) {
    auto out = std::make_shared<StratifiedPredictor>();
    out->task = spec.task;
    out->quantile_u = spec.quantile_u;
    out->dim = x.p;
    for (int r : rows) {
        std::vector<double> key(x.row(r), x.row(r) + x.p);
        double wt = w ? (*w)[r] : 1.0;
        out->cells[key].sorted_vw.emplace_back(y[r], wt);
        out->global.sorted_vw.emplace_back(y[r], wt);
    }
    auto finish = [](CellStats& c) {
        std::sort(c.sorted_vw.begin(), c.sorted_vw.end());
        double sw = 0.0, sv = 0.0;
        for (const auto& [v, wt] : c.sorted_vw) {
            sw += wt;
            sv += v * wt;
        }
        c.mean = sv / sw;
    };
    for (auto& [k, c] : out->cells) finish(c);
    finish(out->global);
    return out;
}

// ---- knn ---------------------------------------------------------------------

struct KnnPredictor : Predictor {
    Task task;
    double quantile_u;
    int k;
    Matrix train_x;
    std::vector<double> train_y, train_w;

    std::vector<int> neighbours(const double* x) const {
        int n = train_x.n;
        std::vector<std::pair<double, int>> dist(n);
        for (int i = 0; i < n; ++i) {
            double d2 = 0.0;
            for (int j = 0; j < train_x.p; ++j) {
                double diff = train_x.at(i, j) - x[j];
                d2 += diff * diff;
            }
            dist[i] = {d2, i};
        }
        int kk = std::min(k, n);
        std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
        std::vector<int> idx(kk);
        for (int i = 0; i < kk; ++i) idx[i] = dist[i].second;
        return idx;
    }

    double predict(const double* x) const override {
        if (task == Task::Quantile) return predict_quantile(x, quantile_u);
        auto nb = neighbours(x);
        double sw = 0.0, sv = 0.0;
        for (int i : nb) {
            sw += train_w[i];
            sv += train_y[i] * train_w[i];
        }
        return sv / sw;
    }
    double predict_quantile(const double* x, double u) const override {
        auto nb = neighbours(x);
        std::vector<std::pair<double, double>> vw;
        for (int i : nb) vw.emplace_back(train_y[i], train_w[i]);
        std::sort(vw.begin(), vw.end());
        return weighted_quantile(vw, u);
    }
};

PredictorPtr fit_knn(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                     const std::vector<double>* w, const std::vector<int>& rows) {
    auto out = std::make_shared<KnnPredictor>();
    out->task = spec.task;
    out->quantile_u = spec.quantile_u;
    out->k = spec.k;
    out->train_x = Matrix(static_cast<int>(rows.size()), x.p);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < x.p; ++j) out->train_x.at(static_cast<int>(i), j) = x.at(rows[i], j);
        out->train_y.push_back(y[rows[i]]);
        out->train_w.push_back(w ? (*w)[rows[i]] : 1.0);
    }
    return out;
}

// ---- histogram gradient boosting ----------------------------------------------

struct TreeNode {
    int feature = -1;   // -1: leaf
    int bin = 0;        // go left when binned value <= bin
    double value = 0.0; // leaf value
    int left = -1, right = -1;
};

struct BoostedTrees : Predictor {
    Task task;
    double base = 0.0;
    double learning_rate = 0.1;
    std::vector<std::vector<double>> thresholds;  // per feature, ascending
    std::vector<std::vector<TreeNode>> trees;
    // Task::Quantile with per-level grids: models[g] for grid level g
    std::vector<double> grid_levels;
    std::vector<double> grid_base;
    std::vector<std::vector<std::vector<TreeNode>>> grid_trees;

    int bin_of(int feature, double v) const {
        const auto& th = thresholds[feature];
        return static_cast<int>(std::upper_bound(th.begin(), th.end(), v) - th.begin());
    }

    double raw(const std::vector<std::vector<TreeNode>>& ts, double b, const double* x) const {
        double f = b;
        for (const auto& tree : ts) {
            int node = 0;
            while (tree[node].feature >= 0) {
                int bn = bin_of(tree[node].feature, x[tree[node].feature]);
                node = bn <= tree[node].bin ? tree[node].left : tree[node].right;
            }
            f += learning_rate * tree[node].value;
        }
        return f;
    }

    double predict(const double* x) const override {
        if (task == Task::Quantile) return predict_quantile(x, grid_levels.empty() ? 0.5 : -1.0);
        double f = raw(trees, base, x);
        if (task == Task::Probability) return clip_prob(1.0 / (1.0 + std::exp(-f)));
        return f;
    }

    double predict_quantile(const double* x, double u) const override {
        if (grid_levels.empty()) throw std::logic_error("not a quantile model");
        std::vector<double> vals(grid_levels.size());
        for (size_t g = 0; g < grid_levels.size(); ++g) vals[g] = raw(grid_trees[g], grid_base[g], x);
        std::sort(vals.begin(), vals.end());  // rearrangement keeps levels monotone
        if (u < 0.0) u = 0.5;
        size_t g = 0;
        while (g + 1 < grid_levels.size() && grid_levels[g] < u) ++g;
        return vals[g];
    }
};

struct BoostData {
    std::vector<std::vector<int>> binned;  // per feature, per row
    int n = 0;
};

std::vector<TreeNode> grow_tree(const BoostData& bd, const LearnerSpec& spec,
                                const std::vector<int>& rows, const std::vector<double>& grad,
                                const std::vector<double>& hess,
                                const std::vector<double>& resid, double quantile_u) {
    std::vector<TreeNode> tree(1);
    struct Work {
        int node, depth;
        std::vector<int> rows;
    };
    std::vector<Work> stack{{0, 0, rows}};
    int p = static_cast<int>(bd.binned.size());

    while (!stack.empty()) {
        Work wk = std::move(stack.back());
        stack.pop_back();
        double gsum = 0.0, hsum = 0.0;
        for (int r : wk.rows) {
            gsum += grad[r];
            hsum += hess[r];
        }
        auto make_leaf = [&](std::vector<int>& rws) {
            if (quantile_u > 0.0) {
                std::vector<std::pair<double, double>> vw;
                for (int r : rws) vw.emplace_back(resid[r], 1.0);
                std::sort(vw.begin(), vw.end());
                tree[wk.node].value = weighted_quantile(vw, quantile_u);
            } else {
                double g = 0.0, h = 0.0;
                for (int r : rws) {
                    g += grad[r];
                    h += hess[r];
                }
                tree[wk.node].value = h > 0.0 ? g / h : 0.0;
            }
        };
        if (wk.depth >= spec.depth || static_cast<int>(wk.rows.size()) < 2 * spec.min_leaf) {
            make_leaf(wk.rows);
            continue;
        }

        int best_feature = -1, best_bin = -1;
        double best_gain = 1e-12;
        double parent = hsum > 0.0 ? gsum * gsum / hsum : 0.0;
        for (int f = 0; f < p; ++f) {
            int nb = 1;
            for (int r : wk.rows) nb = std::max(nb, bd.binned[f][r] + 1);
            std::vector<double> bg(nb, 0.0), bh(nb, 0.0);
            std::vector<int> bc(nb, 0);
            for (int r : wk.rows) {
                int b = bd.binned[f][r];
                bg[b] += grad[r];
                bh[b] += hess[r];
                bc[b] += 1;
            }
            double lg = 0.0, lh = 0.0;
            int lc = 0;
            for (int b = 0; b + 1 < nb; ++b) {
                lg += bg[b];
                lh += bh[b];
                lc += bc[b];
                int rc = static_cast<int>(wk.rows.size()) - lc;
                if (lc < spec.min_leaf || rc < spec.min_leaf) continue;
                double rg = gsum - lg, rh = hsum - lh;
                if (lh <= 0.0 || rh <= 0.0) continue;
                double gain = lg * lg / lh + rg * rg / rh - parent;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    best_bin = b;
                }
            }
        }
        if (best_feature < 0) {
            make_leaf(wk.rows);
            continue;
        }
        std::vector<int> lrows, rrows;
        for (int r : wk.rows) {
            if (bd.binned[best_feature][r] <= best_bin)
                lrows.push_back(r);
            else
                rrows.push_back(r);
        }
        tree[wk.node].feature = best_feature;
        tree[wk.node].bin = best_bin;
        tree[wk.node].left = static_cast<int>(tree.size());
        tree.emplace_back();
        tree[wk.node].right = static_cast<int>(tree.size());
        tree.emplace_back();
        stack.push_back({tree[wk.node].left, wk.depth + 1, std::move(lrows)});
        stack.push_back({tree[wk.node].right, wk.depth + 1, std::move(rrows)});
    }
    return tree;
}

void boost_one(const BoostData& bd, const LearnerSpec& spec, const std::vector<int>& rows,
               const std::vector<double>& y, Task task, double u, double& base,
               std::vector<std::vector<TreeNode>>& trees, BoostedTrees& owner) {
    int n = bd.n;
    std::vector<double> f(n, 0.0), grad(n, 0.0), hess(n, 1.0), resid(n, 0.0);

    if (task == Task::Mean) {
        double s = 0.0;
        for (int r : rows) s += y[r];
        base = s / rows.size();
    } else if (task == Task::Probability) {
        double s = 0.0;
        for (int r : rows) s += y[r];
        double pbar = clip_prob(s / rows.size());
        base = std::log(pbar / (1.0 - pbar));
    } else {
        std::vector<std::pair<double, double>> vw;
        for (int r : rows) vw.emplace_back(y[r], 1.0);
        std::sort(vw.begin(), vw.end());
        base = weighted_quantile(vw, u);
    }
    for (int r : rows) f[r] = base;

    for (int t = 0; t < spec.trees; ++t) {
        for (int r : rows) {
            if (task == Task::Mean) {
                grad[r] = y[r] - f[r];
                hess[r] = 1.0;
            } else if (task == Task::Probability) {
                double mu = 1.0 / (1.0 + std::exp(-f[r]));
                grad[r] = y[r] - mu;
                hess[r] = std::max(1e-6, mu * (1.0 - mu));
            } else {
                grad[r] = y[r] <= f[r] ? u - 1.0 : u;
                hess[r] = 1.0;
                resid[r] = y[r] - f[r];
            }
        }
        auto tree = grow_tree(bd, spec, rows, grad, hess, resid, task == Task::Quantile ? u : -1.0);
        for (int r : rows) {
            int node = 0;
            while (tree[node].feature >= 0) {
                int bn = bd.binned[tree[node].feature][r];
                node = bn <= tree[node].bin ? tree[node].left : tree[node].right;
            }
            f[r] += spec.learning_rate * tree[node].value;
        }
        trees.push_back(std::move(tree));
        (void)owner;
    }
}

PredictorPtr fit_trees(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                       const std::vector<double>* w, const std::vector<int>& rows) {
    if (w) throw std::invalid_argument("hist_gradient_trees does not support sample weights");
    auto out = std::make_shared<BoostedTrees>();
    out->task = spec.task;
    out->learning_rate = spec.learning_rate;

    // quantile-based bin thresholds per feature
    out->thresholds.resize(x.p);
    for (int j = 0; j < x.p; ++j) {
        std::vector<double> vals;
        vals.reserve(rows.size());
        for (int r : rows) vals.push_back(x.at(r, j));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        auto& th = out->thresholds[j];
        if (static_cast<int>(vals.size()) <= spec.bins) {
            for (size_t i = 0; i + 1 < vals.size(); ++i) th.push_back((vals[i] + vals[i + 1]) / 2);
        } else {
            for (int b = 1; b < spec.bins; ++b) {
                size_t idx = vals.size() * b / spec.bins;
                th.push_back(vals[idx]);
            }
            th.erase(std::unique(th.begin(), th.end()), th.end());
        }
    }
    BoostData bd;
    bd.n = x.n;
    bd.binned.resize(x.p);
    for (int j = 0; j < x.p; ++j) {
        bd.binned[j].resize(x.n);
        for (int i = 0; i < x.n; ++i) bd.binned[j][i] = out->bin_of(j, x.at(i, j));
    }

    if (spec.task == Task::Quantile) {
        int g = std::max(1, spec.quantile_grid);
        for (int i = 1; i <= g; ++i) out->grid_levels.push_back(static_cast<double>(i) / (g + 1));
        // ensure the training level itself is on the grid
        if (std::find(out->grid_levels.begin(), out->grid_levels.end(), spec.quantile_u) ==
            out->grid_levels.end()) {
            out->grid_levels.push_back(spec.quantile_u);
            std::sort(out->grid_levels.begin(), out->grid_levels.end());
        }
        out->grid_base.resize(out->grid_levels.size());
        out->grid_trees.resize(out->grid_levels.size());
        for (size_t gi = 0; gi < out->grid_levels.size(); ++gi)
            boost_one(bd, spec, rows, y, Task::Quantile, out->grid_levels[gi], out->grid_base[gi],
                      out->grid_trees[gi], *out);
    } else {
        boost_one(bd, spec, rows, y, spec.task, 0.0, out->base, out->trees, *out);
    }
    return out;
}

void check_pair(const LearnerSpec& spec) {
    bool ok = false;
    switch (spec.family) {
        case Family::Linear: ok = spec.task == Task::Mean; break;
        case Family::Logistic: ok = spec.task == Task::Probability; break;
        default: ok = true;
    }
    if (!ok)
        throw std::invalid_argument(std::string("unsupported (family, task) pair: ") +
                                    to_string(spec.family) + ", " + to_string(spec.task));
    if (spec.task == Task::Quantile && (spec.quantile_u <= 0.0 || spec.quantile_u > 1.0))
        throw std::invalid_argument("quantile level must lie in (0, 1]");
}

}  // namespace

PredictorPtr fit(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                 const std::vector<double>* weights, uint64_t seed) {
    (void)seed;  // all families are deterministic
    check_pair(spec);
    if (static_cast<int>(y.size()) != x.n)
        throw std::invalid_argument("target length does not match feature rows");
    if (x.n == 0) throw std::invalid_argument("cannot fit on an empty sample");
    for (double v : y)
        if (std::isnan(v)) throw std::invalid_argument("target contains NaN");
    if (spec.task == Task::Probability) {
        for (double v : y)
            if (v != 0.0 && v != 1.0)
                throw std::invalid_argument("probability target must be binary 0/1");
    }

    std::vector<int> rows(x.n);
    std::iota(rows.begin(), rows.end(), 0);

    bool constant = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (constant) {
        auto c = std::make_shared<ConstantPredictor>(y[0]);
        c->diag.degenerate_constant = true;
        return c;
    }

    switch (spec.family) {
        case Family::Linear: return fit_linear(spec, x, y, weights, rows);
        case Family::Logistic: return fit_logistic(spec, x, y, weights, rows);
        case Family::StratifiedEmpirical: return fit_stratified(spec, x, y, weights, rows);
        case Family::KNN: return fit_knn(spec, x, y, weights, rows);
        case Family::HistGradientTrees: return fit_trees(spec, x, y, weights, rows);
    }
    throw std::logic_error("unreachable");
}

std::vector<int> fold_assignment(int n, int k_folds, uint64_t seed) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<int> fold(n, 0);
    for (int i = 0; i < n; ++i) fold[perm[i]] = i % k_folds;
    return fold;
}

CrossFitResult cross_fit(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                         const std::vector<uint8_t>* train_mask, int k_folds, uint64_t seed,
                         const std::vector<double>* weights) {
    if (k_folds < 2) throw std::invalid_argument("cross_fit needs at least 2 folds");
    if (train_mask && static_cast<int>(train_mask->size()) != x.n)
        throw std::invalid_argument("train mask length does not match rows");

    CrossFitResult out;
    out.fold = fold_assignment(x.n, k_folds, seed);

    out.predictions.assign(x.n, 0.0);
    for (int k = 0; k < k_folds; ++k) {
        std::vector<int> train_rows;
        for (int i = 0; i < x.n; ++i) {
            if (out.fold[i] == k) continue;
            if (train_mask && !(*train_mask)[i]) continue;
            train_rows.push_back(i);
        }
        if (train_rows.empty())
            throw std::invalid_argument("cross_fit fold " + std::to_string(k) +
                                        " has no training rows");
        Matrix tx(static_cast<int>(train_rows.size()), x.p);
        std::vector<double> ty(train_rows.size());
        std::vector<double> tw;
        if (weights) tw.resize(train_rows.size());
        for (size_t i = 0; i < train_rows.size(); ++i) {
            for (int j = 0; j < x.p; ++j) tx.at(static_cast<int>(i), j) = x.at(train_rows[i], j);
            ty[i] = y[train_rows[i]];
            if (weights) tw[i] = (*weights)[train_rows[i]];
        }
        auto model = fit(spec, tx, ty, weights ? &tw : nullptr, seed + 1 + k);
        out.models.push_back(model);
        for (int i = 0; i < x.n; ++i)
            if (out.fold[i] == k) out.predictions[i] = model->predict(x.row(i));
    }
    return out;
}

}  // namespace mswig
