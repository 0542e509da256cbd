#include "mswig/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mswig {

namespace {

constexpr double kEps = 1e-6;

double floored(double v, int& clipped) {
    if (v < kEps) {
        ++clipped;
        return kEps;
    }
    return v;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sd_of(const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (v.size() - 1));
}

double z_value(double level) {
    boost::math::normal dist;
    return boost::math::quantile(dist, level);
}

void finish_estimate(EstimateResult& res) {
    res.n = static_cast<int>(res.signals.size());
    res.value = mean_of(res.signals);
    res.std_error = sd_of(res.signals, res.value) / std::sqrt(static_cast<double>(res.n));
    double z = z_value(0.975);
    res.ci_lower = res.value - z * res.std_error;
    res.ci_upper = res.value + z * res.std_error;
}

bool all_selected(const EstimationInput& in) {
    return std::all_of(in.s.begin(), in.s.end(), [](double v) { return v == 1.0; });
}

constexpr double kShareTol = 1e-9;

// Cutoff keeping the bottom u mass via y <= cut. Boundary shares bypass the
// quantile model, whose grid cannot express the 0 and 1 levels.
double cut_low(const Predictor& q, const double* xi, double u) {
    if (u >= 1.0 - kShareTol) return std::numeric_limits<double>::infinity();
    if (u <= kShareTol) return -std::numeric_limits<double>::infinity();
    return q.predict_quantile(xi, u);
}

// Cutoff keeping the top u mass via y >= cut.
double cut_high(const Predictor& q, const double* xi, double u) {
    if (u >= 1.0 - kShareTol) return -std::numeric_limits<double>::infinity();
    if (u <= kShareTol) return std::numeric_limits<double>::infinity();
    return q.predict_quantile(xi, 1.0 - u);
}

void check_size(size_t got, int n, const char* what) {
    if (static_cast<int>(got) != n)
        throw std::invalid_argument(std::string(what) + " nuisance length does not match sample");
}

std::vector<uint8_t> mask_where(const EstimationInput& in, bool need_sel, bool treated) {
    std::vector<uint8_t> m(in.n());
    for (int i = 0; i < in.n(); ++i) {
        bool d1 = in.d[i] > 0.5;
        bool ok = treated ? d1 : !d1;
        if (need_sel && in.s[i] < 0.5) ok = false;
        m[i] = ok ? 1 : 0;
    }
    return m;
}

std::vector<double> filled_outcome(const EstimationInput& in) {
    std::vector<double> y = in.y;
    for (int i = 0; i < in.n(); ++i)
        if (std::isnan(y[i])) y[i] = 0.0;  // never enters a training slice
    return y;
}

struct CommonNuisance {
    std::vector<double> mu1, mu0, e, s1, s0;
};

CommonNuisance fit_common(const EstimationInput& in, const EstimatorConfig& config) {
    int n = in.n();
    CommonNuisance nu;
    if (config.known_propensity) {
        nu.e.assign(n, *config.known_propensity);
    } else {
        nu.e = cross_fit(config.propensity, in.x, in.d, nullptr, config.folds, config.seed)
                   .predictions;
    }
    if (all_selected(in)) {
        nu.s1.assign(n, 1.0);
        nu.s0.assign(n, 1.0);
    } else {
        auto m1 = mask_where(in, false, true);
        auto m0 = mask_where(in, false, false);
        nu.s1 = cross_fit(config.selection, in.x, in.s, &m1, config.folds, config.seed).predictions;
        nu.s0 = cross_fit(config.selection, in.x, in.s, &m0, config.folds, config.seed).predictions;
    }
    auto y = filled_outcome(in);
    auto sel1 = mask_where(in, true, true);
    auto sel0 = mask_where(in, true, false);
    nu.mu1 = cross_fit(config.regression, in.x, y, &sel1, config.folds, config.seed).predictions;
    nu.mu0 = cross_fit(config.regression, in.x, y, &sel0, config.folds, config.seed).predictions;
    return nu;
}

PredictorPtr fit_rows(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                      const std::vector<int>& rows, uint64_t seed, const char* what, int fold) {
    if (rows.empty())
        throw std::invalid_argument("fold " + std::to_string(fold) + " has no " + what +
                                    " rows to train on");
    Matrix tx(static_cast<int>(rows.size()), x.p);
    std::vector<double> ty(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < x.p; ++j) tx.at(static_cast<int>(i), j) = x.at(rows[i], j);
        ty[i] = y[rows[i]];
    }
    return fit(spec, tx, ty, nullptr, seed);
}

}  // namespace

EstimationInput make_input(const Dataset& data, const Roles& roles) {
    validate_roles(data, roles);
    EstimationInput in;
    int n = data.n();
    in.d = data.col(roles.treatment).values;
    if (roles.selection.empty())
        in.s.assign(n, 1.0);
    else
        in.s = data.col(roles.selection).values;
    const Column& yc = data.col(roles.outcome);
    in.y.resize(n);
    for (int i = 0; i < n; ++i)
        in.y[i] = yc.missing[i] ? std::numeric_limits<double>::quiet_NaN() : yc.values[i];
    in.x = data.matrix(roles.covariates);
    return in;
}

void apply_learner_preset(EstimatorConfig& config, const std::string& name) {
    auto set = [&](Family reg, Family prob, Family quant) {
        config.regression.family = reg;
        config.propensity.family = prob;
        config.selection.family = prob;
        config.quantile.family = quant;
    };
    if (name == "linear")
        set(Family::Linear, Family::Logistic, Family::HistGradientTrees);
    else if (name == "trees")
        set(Family::HistGradientTrees, Family::HistGradientTrees, Family::HistGradientTrees);
    else if (name == "stratified")
        set(Family::StratifiedEmpirical, Family::StratifiedEmpirical, Family::StratifiedEmpirical);
    else if (name == "knn")
        set(Family::KNN, Family::KNN, Family::KNN);
    else
        throw std::invalid_argument("unknown learner preset: " + name);
}

AteNuisance fit_ate_nuisance(const EstimationInput& in, const EstimatorConfig& config) {
    CommonNuisance c = fit_common(in, config);
    return AteNuisance{std::move(c.mu1), std::move(c.mu0), std::move(c.e), std::move(c.s1),
                       std::move(c.s0)};
}

AttNuisance fit_att_nuisance(const EstimationInput& in, const EstimatorConfig& config) {
    CommonNuisance c = fit_common(in, config);
    return AttNuisance{std::move(c.mu1), std::move(c.mu0), std::move(c.e), std::move(c.s1),
                       std::move(c.s0)};
}

EstimateResult ate_aipw(const EstimationInput& in, const AteNuisance& nu) {
    int n = in.n();
    check_size(nu.mu1.size(), n, "mu1");
    check_size(nu.mu0.size(), n, "mu0");
    check_size(nu.e.size(), n, "propensity");
    check_size(nu.s1.size(), n, "s1");
    check_size(nu.s0.size(), n, "s0");

    EstimateResult res;
    res.estimand = "ate";
    res.signals.resize(n);
    for (int i = 0; i < n; ++i) {
        double e = nu.e[i];
        double pi1 = floored(nu.s1[i] * e, res.clipped);
        double pi0 = floored(nu.s0[i] * (1.0 - e), res.clipped);
        double t1 = nu.mu1[i], t0 = nu.mu0[i];
        bool sel = in.s[i] > 0.5, d1 = in.d[i] > 0.5;
        if (sel && d1) t1 += (in.y[i] - nu.mu1[i]) / pi1;
        if (sel && !d1) t0 += (in.y[i] - nu.mu0[i]) / pi0;
        res.signals[i] = t1 - t0;
    }
    finish_estimate(res);
    return res;
}

EstimateResult att_m2(const EstimationInput& in, const AttNuisance& nu) {
    int n = in.n();
    check_size(nu.mu1c.size(), n, "mu1c");
    check_size(nu.mu0c.size(), n, "mu0c");
    check_size(nu.e.size(), n, "propensity");
    check_size(nu.s1.size(), n, "s1");
    check_size(nu.s0.size(), n, "s0");

    EstimateResult res;
    res.estimand = "att";
    res.signals.resize(n);
    double pbar = floored(mean_of(nu.e), res.clipped);
    for (int i = 0; i < n; ++i) {
        double e = nu.e[i];
        double w = e / pbar;
        double pi11 = floored(nu.s1[i] * e, res.clipped);
        double pi01 = floored(nu.s0[i] * (1.0 - e), res.clipped);
        double a = nu.mu1c[i] * w;
        double b = nu.mu0c[i] * w;
        bool sel = in.s[i] > 0.5, d1 = in.d[i] > 0.5;
        if (sel && d1) a += (in.y[i] - nu.mu1c[i]) / pi11 * w;
        if (sel && !d1) b += (in.y[i] - nu.mu0c[i]) / pi01 * w;
        res.signals[i] = a - b;
    }
    finish_estimate(res);
    return res;
}

BoundsNuisance fit_bounds_nuisance(const EstimationInput& in, const EstimatorConfig& config) {
    int n = in.n();
    BoundsNuisance nu;
    auto resize = [n](std::vector<double>& v) { v.assign(n, 0.0); };
    resize(nu.e);
    resize(nu.s1);
    resize(nu.s0);
    resize(nu.mu1c);
    resize(nu.mu0c);
    resize(nu.q_treated_lower);
    resize(nu.q_treated_upper);
    resize(nu.m_treated_lower);
    resize(nu.m_treated_upper);
    resize(nu.q_control_lower);
    resize(nu.q_control_upper);
    resize(nu.m_control_lower);
    resize(nu.m_control_upper);

    bool sel_const = all_selected(in);
    auto fold = fold_assignment(n, config.folds, config.seed);
    auto y = filled_outcome(in);

    for (int k = 0; k < config.folds; ++k) {
        std::vector<int> train_all, train_d1, train_d0, train_sd1, train_sd0;
        for (int i = 0; i < n; ++i) {
            if (fold[i] == k) continue;
            train_all.push_back(i);
            bool d1 = in.d[i] > 0.5, sel = in.s[i] > 0.5;
            (d1 ? train_d1 : train_d0).push_back(i);
            if (sel && d1) train_sd1.push_back(i);
            if (sel && !d1) train_sd0.push_back(i);
        }

        PredictorPtr e_model, s1_model, s0_model;
        if (!config.known_propensity)
            e_model = fit_rows(config.propensity, in.x, in.d, train_all, config.seed + 1 + k,
                               "training", k);
        if (!sel_const) {
            s1_model =
                fit_rows(config.selection, in.x, in.s, train_d1, config.seed + 1 + k, "treated", k);
            s0_model =
                fit_rows(config.selection, in.x, in.s, train_d0, config.seed + 1 + k, "control", k);
        }
        auto mu1_model = fit_rows(config.regression, in.x, y, train_sd1, config.seed + 1 + k,
                                  "selected treated", k);
        auto mu0_model = fit_rows(config.regression, in.x, y, train_sd0, config.seed + 1 + k,
                                  "selected control", k);
        auto q1_model = fit_rows(config.quantile, in.x, y, train_sd1, config.seed + 1 + k,
                                 "selected treated", k);
        auto q0_model = fit_rows(config.quantile, in.x, y, train_sd0, config.seed + 1 + k,
                                 "selected control", k);

        auto prop = [&](int i) {
            return config.known_propensity ? *config.known_propensity : e_model->predict(in.x.row(i));
        };
        auto sel_ratio = [&](int i) {
            double s1 = sel_const ? 1.0 : s1_model->predict(in.x.row(i));
            double s0 = sel_const ? 1.0 : s0_model->predict(in.x.row(i));
            return s0 / std::max(s1, kEps);
        };

        // plug-in trimmed targets on the training slices, regressed back onto x
        std::vector<double> yl = y, yu = y;
        for (int i : train_sd1) {
            double u = std::min(sel_ratio(i), 1.0);
            double ql = cut_low(*q1_model, in.x.row(i), u);
            double qu = cut_high(*q1_model, in.x.row(i), u);
            yl[i] = in.y[i] <= ql ? in.y[i] : 0.0;
            yu[i] = in.y[i] >= qu ? in.y[i] : 0.0;
        }
        auto ml_model = fit_rows(config.regression, in.x, yl, train_sd1, config.seed + 1 + k,
                                 "selected treated", k);
        auto mu_model = fit_rows(config.regression, in.x, yu, train_sd1, config.seed + 1 + k,
                                 "selected treated", k);

        std::vector<double> y0l = y, y0u = y;
        for (int i : train_sd0) {
            double p0 = sel_ratio(i);
            double r = p0 > 1.0 ? 1.0 / p0 : 1.0;
            double ql = cut_high(*q0_model, in.x.row(i), r);
            double qu = cut_low(*q0_model, in.x.row(i), r);
            y0l[i] = in.y[i] >= ql ? in.y[i] : 0.0;
            y0u[i] = in.y[i] <= qu ? in.y[i] : 0.0;
        }
        auto m0l_model = fit_rows(config.regression, in.x, y0l, train_sd0, config.seed + 1 + k,
                                  "selected control", k);
        auto m0u_model = fit_rows(config.regression, in.x, y0u, train_sd0, config.seed + 1 + k,
                                  "selected control", k);

        for (int i = 0; i < n; ++i) {
            if (fold[i] != k) continue;
            const double* xi = in.x.row(i);
            nu.e[i] = prop(i);
            nu.s1[i] = sel_const ? 1.0 : s1_model->predict(xi);
            nu.s0[i] = sel_const ? 1.0 : s0_model->predict(xi);
            nu.mu1c[i] = mu1_model->predict(xi);
            nu.mu0c[i] = mu0_model->predict(xi);
            double p0 = nu.s0[i] / std::max(nu.s1[i], kEps);
            double u = std::min(p0, 1.0);
            nu.q_treated_lower[i] = cut_low(*q1_model, xi, u);
            nu.q_treated_upper[i] = cut_high(*q1_model, xi, u);
            nu.m_treated_lower[i] = ml_model->predict(xi);
            nu.m_treated_upper[i] = mu_model->predict(xi);
            double r = p0 > 1.0 ? 1.0 / p0 : 1.0;
            nu.q_control_lower[i] = cut_high(*q0_model, xi, r);
            nu.q_control_upper[i] = cut_low(*q0_model, xi, r);
            nu.m_control_lower[i] = m0l_model->predict(xi);
            nu.m_control_upper[i] = m0u_model->predict(xi);
        }
    }
    return nu;
}

BoundsResult zr_lee_bounds(const EstimationInput& in, const BoundsNuisance& nu,
                           const EstimatorConfig& config) {
    int n = in.n();
    check_size(nu.e.size(), n, "propensity");
    check_size(nu.s1.size(), n, "s1");
    check_size(nu.s0.size(), n, "s0");
    check_size(nu.mu1c.size(), n, "mu1c");
    check_size(nu.mu0c.size(), n, "mu0c");
    check_size(nu.m_treated_lower.size(), n, "trimmed treated mean");
    check_size(nu.m_treated_upper.size(), n, "trimmed treated mean");

    BoundsResult res;
    res.alpha = config.alpha;
    res.n = n;
    res.lower_signals.resize(n);
    res.upper_signals.resize(n);

    std::vector<double> p0(n), pao(n);
    std::vector<char> pos(n);
    for (int i = 0; i < n; ++i) {
        double r = nu.s0[i] / floored(nu.s1[i], res.clipped);
        if (!config.use_covariates && r > 1.0) {
            r = 1.0;
            ++res.clamped_ratio_rows;
        }
        p0[i] = r;
        pos[i] = r <= 1.0 ? 1 : 0;
        pao[i] = pos[i] ? nu.s0[i] : nu.s1[i];
    }
    res.p_always_observed = mean_of(pao);
    double p_ao = floored(res.p_always_observed, res.clipped);

    for (int i = 0; i < n; ++i) {
        double e = nu.e[i];
        double s1 = nu.s1[i], s0 = nu.s0[i];
        bool sel = in.s[i] > 0.5, d1 = in.d[i] > 0.5;
        double y = sel ? in.y[i] : 0.0;

        if (pos[i]) {
            double pi11 = floored(s1 * e, res.clipped);
            double al = nu.m_treated_lower[i] * s1 / p_ao;
            double au = nu.m_treated_upper[i] * s1 / p_ao;
            if (sel && d1) {
                double ytl = y <= nu.q_treated_lower[i] ? y : 0.0;
                double ytu = y >= nu.q_treated_upper[i] ? y : 0.0;
                al += (ytl - nu.m_treated_lower[i]) / pi11 * s1 / p_ao;
                au += (ytu - nu.m_treated_upper[i]) / pi11 * s1 / p_ao;
            }
            double om = floored(1.0 - e, res.clipped);
            double b = nu.mu0c[i] * s0 / p_ao;
            if (sel && !d1) b += (y - nu.mu0c[i]) / (om * p_ao);
            res.lower_signals[i] = al - b;
            res.upper_signals[i] = au - b;
        } else {
            double em = floored(e, res.clipped);
            double a = nu.mu1c[i] * s1 / p_ao;
            if (sel && d1) a += (y - nu.mu1c[i]) / (em * p_ao);
            double pi01 = floored(s0 * (1.0 - e), res.clipped);
            double bl = nu.m_control_lower[i] * s0 / p_ao;
            double bu = nu.m_control_upper[i] * s0 / p_ao;
            if (sel && !d1) {
                double y0l = y >= nu.q_control_lower[i] ? y : 0.0;
                double y0u = y <= nu.q_control_upper[i] ? y : 0.0;
                bl += (y0l - nu.m_control_lower[i]) / pi01 * s0 / p_ao;
                bu += (y0u - nu.m_control_upper[i]) / pi01 * s0 / p_ao;
            }
            res.lower_signals[i] = a - bl;
            res.upper_signals[i] = a - bu;
        }
    }

    res.lower = mean_of(res.lower_signals);
    res.upper = mean_of(res.upper_signals);
    res.se_lower = sd_of(res.lower_signals, res.lower) / std::sqrt(static_cast<double>(n));
    res.se_upper = sd_of(res.upper_signals, res.upper) / std::sqrt(static_cast<double>(n));
    if (res.lower > res.upper) {
        double mid = 0.5 * (res.lower + res.upper);
        res.lower = res.upper = mid;
        res.crossed = true;
        res.note = "bound estimates crossed and were collapsed to their midpoint";
    }
    bool no_trim = std::all_of(p0.begin(), p0.end(),
                               [](double v) { return std::fabs(v - 1.0) <= 1e-12; });
    if (no_trim) {
        if (!res.note.empty()) res.note += "; ";
        res.note += "selection ratio is one everywhere, interval collapsed to a point";
    }
    if (res.clamped_ratio_rows > 0) {
        if (!res.note.empty()) res.note += "; ";
        res.note += "selection ratio above one on " + std::to_string(res.clamped_ratio_rows) +
                    " rows was clamped; covariate-free monotonicity may be violated";
    }
    double z = z_value(1.0 - config.alpha);
    res.ci_lower = res.lower - z * res.se_lower;
    res.ci_upper = res.upper + z * res.se_upper;
    return res;
}

EstimateResult estimate_ate(const EstimationInput& in, const EstimatorConfig& config) {
    return ate_aipw(in, fit_ate_nuisance(in, config));
}

EstimateResult estimate_att(const EstimationInput& in, const EstimatorConfig& config) {
    return att_m2(in, fit_att_nuisance(in, config));
}

BoundsResult estimate_bounds(const EstimationInput& in, const EstimatorConfig& config) {
    return zr_lee_bounds(in, fit_bounds_nuisance(in, config), config);
}

EstimateResult estimate_complete_case(const EstimationInput& in, const EstimatorConfig&) {
    EstimationInput cc;
    std::vector<int> rows;
    for (int i = 0; i < in.n(); ++i)
        if (in.s[i] > 0.5) rows.push_back(i);
    cc.x = Matrix(static_cast<int>(rows.size()), 0);
    for (int i : rows) {
        cc.d.push_back(in.d[i]);
        cc.s.push_back(1.0);
        cc.y.push_back(in.y[i]);
    }
    int n1 = 0;
    double sum1 = 0.0, sum0 = 0.0;
    for (int i = 0; i < cc.n(); ++i) {
        if (cc.d[i] > 0.5) {
            ++n1;
            sum1 += cc.y[i];
        } else {
            sum0 += cc.y[i];
        }
    }
    int n0 = cc.n() - n1;
    if (n1 == 0 || n0 == 0)
        throw std::invalid_argument("complete cases contain a single treatment arm");

    AteNuisance nu;
    nu.mu1.assign(cc.n(), sum1 / n1);
    nu.mu0.assign(cc.n(), sum0 / n0);
    nu.e.assign(cc.n(), static_cast<double>(n1) / cc.n());
    nu.s1.assign(cc.n(), 1.0);
    nu.s0.assign(cc.n(), 1.0);
    EstimateResult res = ate_aipw(cc, nu);
    res.note = "complete-case difference of means";
    return res;
}

HetResult heterogeneous_effects(const std::vector<double>& signals, const Matrix& z,
                                const std::vector<std::string>& z_names, HetDictionary dict) {
    int n = static_cast<int>(signals.size());
    if (z.n != n) throw std::invalid_argument("signal and group rows differ");
    if (z.p == 0) throw std::invalid_argument("no heterogeneity variables given");

    HetResult het;
    het.dictionary = dict;
    het.aggregate = mean_of(signals);
    het.aggregate_se = sd_of(signals, het.aggregate) / std::sqrt(static_cast<double>(n));

    if (dict == HetDictionary::Indicators) {
        std::map<std::vector<double>, std::vector<int>> groups;
        for (int i = 0; i < n; ++i)
            groups[std::vector<double>(z.row(i), z.row(i) + z.p)].push_back(i);
        for (const auto& [key, rows] : groups) {
            HetCell cell;
            std::string label;
            for (int j = 0; j < z.p; ++j) {
                if (j > 0) label += ", ";
                label += z_names[j] + "=" + format_double(key[j]);
            }
            cell.label = label;
            cell.n = static_cast<int>(rows.size());
            cell.share = static_cast<double>(cell.n) / n;
            double m = 0.0;
            for (int i : rows) m += signals[i];
            m /= cell.n;
            cell.value = m;
            double ss = 0.0;
            for (int i : rows) ss += (signals[i] - m) * (signals[i] - m);
            cell.std_error = std::sqrt(ss) / cell.n;  // HC0 variance of a cell mean
            het.cells.push_back(std::move(cell));
        }
    } else {
        Eigen::MatrixXd x(n, z.p + 1);
        Eigen::VectorXd yv(n);
        for (int i = 0; i < n; ++i) {
            x(i, 0) = 1.0;
            for (int j = 0; j < z.p; ++j) x(i, j + 1) = z.at(i, j);
            yv[i] = signals[i];
        }
        Eigen::MatrixXd gram = x.transpose() * x;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (lu.rank() < gram.rows()) gram.diagonal().array() += 1e-8;
        Eigen::MatrixXd graminv = gram.inverse();
        Eigen::VectorXd beta = graminv * (x.transpose() * yv);
        Eigen::VectorXd resid = yv - x * beta;
        Eigen::MatrixXd meat = x.transpose() * resid.array().square().matrix().asDiagonal() * x;
        Eigen::MatrixXd cov = graminv * meat * graminv;
        het.coef_names.push_back("intercept");
        for (const auto& nm : z_names) het.coef_names.push_back(nm);
        for (int j = 0; j < beta.size(); ++j) {
            het.coef.push_back(beta[j]);
            het.coef_se.push_back(std::sqrt(std::max(0.0, cov(j, j))));
        }
    }
    return het;
}

OverlapReport overlap_report(const EstimationInput& in, const EstimatorConfig& config) {
    int n = in.n();
    OverlapReport rep;
    rep.n = n;
    rep.has_selection = !all_selected(in);

    std::vector<double> e;
    if (config.known_propensity) {
        e.assign(n, *config.known_propensity);
    } else {
        e = cross_fit(config.propensity, in.x, in.d, nullptr, config.folds, config.seed).predictions;
    }

    auto summarize = [](std::vector<double> v) {
        OverlapSummary s;
        s.n = static_cast<int>(v.size());
        if (v.empty()) return s;
        std::sort(v.begin(), v.end());
        s.min = v.front();
        s.max = v.back();
        for (int k = 1; k <= 9; ++k) {
            size_t idx = static_cast<size_t>(std::ceil(0.1 * k * v.size()));
            s.deciles.push_back(v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)]);
        }
        for (double x : v) {
            if (x < 0.05) s.share_below_005 += 1.0;
            if (x < 0.10) s.share_below_010 += 1.0;
            if (x > 0.90) s.share_above_090 += 1.0;
            if (x > 0.95) s.share_above_095 += 1.0;
        }
        s.share_below_005 /= s.n;
        s.share_below_010 /= s.n;
        s.share_above_090 /= s.n;
        s.share_above_095 /= s.n;
        return s;
    };

    std::vector<double> et, ec;
    rep.histogram_treated.assign(50, 0);
    rep.histogram_control.assign(50, 0);
    for (int i = 0; i < n; ++i) {
        int bin = std::min(49, static_cast<int>(e[i] / 0.02));
        if (in.d[i] > 0.5) {
            et.push_back(e[i]);
            rep.histogram_treated[bin] += 1;
        } else {
            ec.push_back(e[i]);
            rep.histogram_control[bin] += 1;
        }
    }
    rep.treated = summarize(std::move(et));
    rep.control = summarize(std::move(ec));

    if (rep.has_selection) {
        std::vector<uint8_t> m1 = mask_where(in, false, true);
        std::vector<uint8_t> m0 = mask_where(in, false, false);
        auto s1 = cross_fit(config.selection, in.x, in.s, &m1, config.folds, config.seed).predictions;
        auto s0 = cross_fit(config.selection, in.x, in.s, &m0, config.folds, config.seed).predictions;
        int positive = 0;
        bool all_one = true;
        for (int i = 0; i < n; ++i) {
            double p0 = s0[i] / std::max(s1[i], kEps);
            if (p0 <= 1.0 + 1e-9) ++positive;
            if (std::fabs(p0 - 1.0) > 1e-9) all_one = false;
        }
        rep.positive_share = static_cast<double>(positive) / n;
        rep.no_trimming_required = all_one;
    }
    return rep;
}

}  // namespace mswig
