#include "mswig/citest.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mswig/rng.hpp"

namespace mswig {

TestMethod parse_test_method(const std::string& s) {
    if (s == "chi2" || s == "chi-square" || s == "chi_square_stratified") return TestMethod::ChiSquareStratified;
    if (s == "wald" || s == "partial_regression_wald") return TestMethod::PartialRegressionWald;
    if (s == "permutation" || s == "perm") return TestMethod::Permutation;
    throw std::invalid_argument("unknown test method: " + s);
}

const char* to_string(TestMethod m) {
    switch (m) {
        case TestMethod::ChiSquareStratified: return "chi_square_stratified";
        case TestMethod::PartialRegressionWald: return "partial_regression_wald";
        case TestMethod::Permutation: return "permutation";
    }
    return "?";
}

namespace {

struct Frame {
    std::vector<std::string> left, right, given;
    // column-major copies restricted to usable rows
    std::map<std::string, std::vector<double>> col;
    int n = 0;
    int dropped_missing = 0;
};

const Column& column_or_throw(const Dataset& data, const std::string& name) {
    if (!data.has(name)) throw std::invalid_argument("column not found in dataset: " + name);
    return data.col(name);
}

std::vector<std::string> term_names(const std::vector<Term>& terms, const std::string& stmt_text) {
    std::vector<std::string> out;
    for (const auto& t : terms) {
        if (!t.labels.empty())
            throw std::invalid_argument(
                "statement involves counterfactual terms and cannot be tested against factual data: " +
                stmt_text);
        out.push_back(t.name);
    }
    return out;
}

Frame build_frame(const Dataset& data, const CIStatement& stmt) {
    Frame f;
    std::string text = stmt.text();
    f.left = term_names(stmt.left, text);
    f.right = term_names(stmt.right, text);
    f.given = term_names(stmt.given, text);

    std::vector<std::string> all = f.left;
    all.insert(all.end(), f.right.begin(), f.right.end());
    all.insert(all.end(), f.given.begin(), f.given.end());

    std::vector<char> keep(data.n(), 1);
    for (const auto& sel : stmt.selection_events) {
        const Column& c = column_or_throw(data, sel);
        for (int i = 0; i < data.n(); ++i)
            if (c.missing[i] || c.values[i] != 1.0) keep[i] = 0;
    }
    for (const auto& name : all) {
        const Column& c = column_or_throw(data, name);
        for (int i = 0; i < data.n(); ++i)
            if (keep[i] && c.missing[i]) {
                keep[i] = 0;
                ++f.dropped_missing;
            }
    }
    for (const auto& name : all) {
        const Column& c = column_or_throw(data, name);
        auto& v = f.col[name];
        for (int i = 0; i < data.n(); ++i)
            if (keep[i]) v.push_back(c.values[i]);
    }
    f.n = all.empty() ? 0 : static_cast<int>(f.col[all[0]].size());
    if (f.n < 2) throw std::invalid_argument("too few usable rows to test: " + text);
    // canonical statement order is textual; regression-based methods need the
    // singleton side on the left
    if (f.left.size() != 1 && f.right.size() == 1) std::swap(f.left, f.right);
    return f;
}

bool is_discrete(const std::vector<double>& v) {
    std::set<double> dist;
    for (double x : v) {
        if (x != std::floor(x)) return false;
        dist.insert(x);
        if (dist.size() > 40) return false;
    }
    return true;
}

std::vector<std::vector<double>> tuples(const Frame& f, const std::vector<std::string>& names) {
    std::vector<std::vector<double>> out(f.n);
    for (int i = 0; i < f.n; ++i) {
        out[i].reserve(names.size());
        for (const auto& nm : names) out[i].push_back(f.col.at(nm)[i]);
    }
    return out;
}

// rows grouped by given tuple, strata ordered by tuple value
std::vector<std::vector<int>> strata_by_tuple(const std::vector<std::vector<double>>& key, int n) {
    std::map<std::vector<double>, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[key[i]].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [k, rows] : groups) out.push_back(std::move(rows));
    return out;
}

struct ChiSquare {
    double stat = 0.0;
    double dof = 0.0;
    double min_expected = 0.0;
};

ChiSquare stratum_chi2(const std::vector<int>& rows, const std::vector<std::vector<double>>& lt,
                       const std::vector<std::vector<double>>& rt) {
    std::map<std::vector<double>, int> li, ri;
    for (int r : rows) {
        li.emplace(lt[r], 0);
        ri.emplace(rt[r], 0);
    }
    int idx = 0;
    for (auto& [k, v] : li) v = idx++;
    idx = 0;
    for (auto& [k, v] : ri) v = idx++;
    int R = static_cast<int>(li.size()), C = static_cast<int>(ri.size());
    ChiSquare out;
    out.min_expected = static_cast<double>(rows.size());
    if (R < 2 || C < 2) return out;

    std::vector<double> obs(R * C, 0.0), rm(R, 0.0), cm(C, 0.0);
    for (int r : rows) {
        int i = li[lt[r]], j = ri[rt[r]];
        obs[i * C + j] += 1.0;
        rm[i] += 1.0;
        cm[j] += 1.0;
    }
    double n = static_cast<double>(rows.size());
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            double e = rm[i] * cm[j] / n;
            out.min_expected = std::min(out.min_expected, e);
            if (e > 0.0) {
                double d = obs[i * C + j] - e;
                out.stat += d * d / e;
            }
        }
    out.dof = static_cast<double>((R - 1) * (C - 1));
    return out;
}

struct PooledChi2 {
    double stat = 0.0;
    double dof = 0.0;
    int strata = 0;
    int merges = 0;
};

PooledChi2 pooled_chi2(std::vector<std::vector<int>> strata,
                       const std::vector<std::vector<double>>& lt,
                       const std::vector<std::vector<double>>& rt, double min_expected,
                       bool merge) {
    if (merge) {
        // strata arrive ordered by covariate tuple; an undersized stratum joins
        // the previous one (the next when it is first)
        bool changed = true;
        while (changed && strata.size() > 1) {
            changed = false;
            for (size_t s = 0; s < strata.size(); ++s) {
                ChiSquare c = stratum_chi2(strata[s], lt, rt);
                if (c.min_expected < min_expected) {
                    size_t into = s > 0 ? s - 1 : s + 1;
                    strata[into].insert(strata[into].end(), strata[s].begin(), strata[s].end());
                    strata.erase(strata.begin() + static_cast<long>(s));
                    changed = true;
                    break;
                }
            }
        }
    }
    PooledChi2 out;
    out.strata = static_cast<int>(strata.size());
    for (const auto& rows : strata) {
        ChiSquare c = stratum_chi2(rows, lt, rt);
        out.stat += c.stat;
        out.dof += c.dof;
    }
    return out;
}

double chi2_pvalue(double stat, double dof) {
    if (dof <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
}

void require_discrete(const Frame& f, const std::vector<std::string>& names, const char* what) {
    for (const auto& nm : names)
        if (!is_discrete(f.col.at(nm)))
            throw std::invalid_argument(std::string(what) + " requires discrete columns; column " +
                                        nm + " is not discrete");
}

TestResult run_chi2(const Frame& f, const TestOptions& opt) {
    require_discrete(f, f.left, "chi-square test");
    require_discrete(f, f.right, "chi-square test");
    require_discrete(f, f.given, "chi-square test");

    auto lt = tuples(f, f.left);
    auto rt = tuples(f, f.right);
    auto strata = f.given.empty() ? std::vector<std::vector<int>>{[&] {
        std::vector<int> all(f.n);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }()}
                                  : strata_by_tuple(tuples(f, f.given), f.n);

    PooledChi2 pc = pooled_chi2(std::move(strata), lt, rt, opt.min_expected, true);
    TestResult res;
    res.statistic = pc.stat;
    res.dof = pc.dof;
    res.strata_used = pc.strata;
    if (pc.dof <= 0.0) {
        res.p_value = 1.0;
        res.note = "degenerate table, no variation on one side";
    } else {
        res.p_value = chi2_pvalue(pc.stat, pc.dof);
    }
    return res;
}

struct Wald {
    double stat = 0.0;
    double dof = 0.0;
    bool ok = true;
    std::string note;
    Eigen::VectorXd fitted;
};

// OLS of left on [1, right, given]; HC0 block Wald on the right coefficients
Wald wald_statistic(const Frame& f, bool want_fitted) {
    if (f.left.size() != 1)
        throw std::invalid_argument("partial regression test needs a single left variable, got " +
                                    std::to_string(f.left.size()));
    int n = f.n;
    int pr = static_cast<int>(f.right.size());
    int pg = static_cast<int>(f.given.size());
    Eigen::MatrixXd x(n, 1 + pr + pg);
    Eigen::VectorXd y(n);
    const auto& lv = f.col.at(f.left[0]);
    for (int i = 0; i < n; ++i) {
        y[i] = lv[i];
        x(i, 0) = 1.0;
        for (int j = 0; j < pr; ++j) x(i, 1 + j) = f.col.at(f.right[j])[i];
        for (int j = 0; j < pg; ++j) x(i, 1 + pr + j) = f.col.at(f.given[j])[i];
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    Wald w;
    if (lu.rank() < gram.rows()) {
        gram.diagonal().array() += 1e-8;
        w.note = "rank-deficient design, ridge-stabilized";
    }
    Eigen::MatrixXd graminv = gram.inverse();
    Eigen::VectorXd beta = graminv * (x.transpose() * y);
    Eigen::VectorXd resid = y - x * beta;
    Eigen::MatrixXd meat = x.transpose() * resid.array().square().matrix().asDiagonal() * x;
    Eigen::MatrixXd cov = graminv * meat * graminv;

    Eigen::VectorXd br = beta.segment(1, pr);
    Eigen::MatrixXd cr = cov.block(1, 1, pr, pr);
    Eigen::FullPivLU<Eigen::MatrixXd> crlu(cr);
    if (crlu.rank() < pr) {
        cr.diagonal().array() += 1e-12;
    }
    w.stat = br.transpose() * cr.inverse() * br;
    w.dof = static_cast<double>(pr);
    if (want_fitted) w.fitted = x * beta;
    return w;
}

TestResult run_wald(const Frame& f) {
    Wald w = wald_statistic(f, false);
    TestResult res;
    res.statistic = w.stat;
    res.dof = w.dof;
    res.p_value = chi2_pvalue(w.stat, w.dof);
    res.strata_used = 1;
    res.note = w.note;
    return res;
}

// strata for permutation: exact given tuples when discrete, otherwise deciles
// of the fitted index from regressing the left variable on the given columns
std::vector<std::vector<int>> permutation_strata(const Frame& f) {
    if (f.given.empty()) {
        std::vector<int> all(f.n);
        std::iota(all.begin(), all.end(), 0);
        return {all};
    }
    bool disc = true;
    for (const auto& nm : f.given)
        if (!is_discrete(f.col.at(nm))) disc = false;
    if (disc) return strata_by_tuple(tuples(f, f.given), f.n);

    Frame sub;
    sub.left = {f.left[0]};
    sub.given = f.given;
    sub.col = f.col;
    sub.n = f.n;
    Wald w = wald_statistic(sub, true);
    std::vector<double> fitted(w.fitted.data(), w.fitted.data() + f.n);
    std::vector<double> sorted = fitted;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (int d = 1; d < 10; ++d) cuts.push_back(sorted[static_cast<size_t>(f.n) * d / 10]);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < f.n; ++i) {
        int g = static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), fitted[i]) - cuts.begin());
        groups[g].push_back(i);
    }
    std::vector<std::vector<int>> out;
    for (auto& [g, rows] : groups) out.push_back(std::move(rows));
    return out;
}

TestResult run_permutation(const Frame& f, const TestOptions& opt) {
    bool disc = true;
    for (const auto& nm : f.left)
        if (!is_discrete(f.col.at(nm))) disc = false;
    for (const auto& nm : f.right)
        if (!is_discrete(f.col.at(nm))) disc = false;

    auto strata = permutation_strata(f);
    auto lt = tuples(f, f.left);
    auto rt = tuples(f, f.right);

    auto statistic = [&](const Frame& frame, const std::vector<std::vector<double>>& left_tuples) {
        if (disc) return pooled_chi2(strata, left_tuples, rt, opt.min_expected, false).stat;
        return wald_statistic(frame, false).stat;
    };

    double observed = statistic(f, lt);

    Rng rng(opt.seed);
    int hits = 0;
    Frame scratch = f;
    auto cur = lt;
    for (int b = 0; b < opt.permutations; ++b) {
        for (const auto& rows : strata) {
            std::vector<int> order = rows;
            rng.shuffle(order);
            for (size_t i = 0; i < rows.size(); ++i) cur[rows[i]] = lt[order[i]];
        }
        if (!disc) {
            for (size_t j = 0; j < f.left.size(); ++j) {
                auto& dst = scratch.col[f.left[j]];
                for (int i = 0; i < f.n; ++i) dst[i] = cur[i][j];
            }
        }
        if (statistic(scratch, cur) >= observed - 1e-12) ++hits;
    }

    TestResult res;
    res.statistic = observed;
    res.dof = 0.0;
    res.p_value = static_cast<double>(hits + 1) / (opt.permutations + 1);
    res.strata_used = static_cast<int>(strata.size());
    res.note = disc ? "stratified chi-square statistic" : "partial regression statistic";
    return res;
}

}  // namespace

TestResult test_independence(const Dataset& data, const CIStatement& stmt, TestMethod method,
                             const TestOptions& options) {
    Frame f = build_frame(data, stmt);
    TestResult res;
    switch (method) {
        case TestMethod::ChiSquareStratified: res = run_chi2(f, options); break;
        case TestMethod::PartialRegressionWald: res = run_wald(f); break;
        case TestMethod::Permutation: res = run_permutation(f, options); break;
    }
    res.statement = stmt.text();
    res.method = method;
    res.n_used = f.n;
    res.reject = res.p_value <= options.alpha;
    if (f.dropped_missing > 0) {
        if (!res.note.empty()) res.note += "; ";
        res.note += std::to_string(f.dropped_missing) + " rows dropped for missing values";
    }
    return res;
}

CatalogTestReport test_catalog(const Dataset& data, const std::vector<CIStatement>& statements,
                               TestMethod method, const TestOptions& options) {
    CatalogTestReport report;
    report.alpha = options.alpha;
    double m = static_cast<double>(statements.size());
    for (const auto& s : statements) {
        CatalogTestRow row;
        row.result = test_independence(data, s, method, options);
        row.p_adjusted = std::min(1.0, m * row.result.p_value);
        row.reject_adjusted = row.p_adjusted <= options.alpha;
        report.any_reject = report.any_reject || row.reject_adjusted;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace mswig
