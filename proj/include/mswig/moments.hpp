#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mswig/dataset.hpp"
#include "mswig/learners.hpp"

namespace mswig {

// Sample for treatment effect estimation. The outcome proxy is NaN exactly on
// rows with selection 0; selection is all ones when no selection column exists.
struct EstimationInput {
    Matrix x;               // covariates, possibly zero columns
    std::vector<double> d;  // binary treatment
    std::vector<double> s;  // selection indicator
    std::vector<double> y;  // outcome proxy
    int n() const { return static_cast<int>(d.size()); }
};

EstimationInput make_input(const Dataset& data, const Roles& roles);

struct EstimatorConfig {
    LearnerSpec regression{Task::Mean, Family::Linear};
    LearnerSpec propensity{Task::Probability, Family::Logistic};
    LearnerSpec selection{Task::Probability, Family::Logistic};
    LearnerSpec quantile{Task::Quantile, Family::HistGradientTrees};
    int folds = 5;
    std::uint64_t seed = 0;
    double alpha = 0.10;  // bound confidence level is 1 - alpha
    bool use_covariates = true;
    std::optional<double> known_propensity;  // randomized designs skip the propensity fit
};

// presets: linear, trees, stratified, knn
void apply_learner_preset(EstimatorConfig& config, const std::string& name);

struct EstimateResult {
    std::string estimand;
    double value = 0.0;
    double std_error = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;  // two-sided 95% normal interval
    int n = 0;
    int clipped = 0;  // denominator evaluations floored at 1e-6
    std::string note;
    std::vector<double> signals;  // per-row uncentered orthogonal signal
};

// Per-row nuisance values. Point estimators accept injected nuisances so exact
// values can be supplied in tests and in designs with known components.
struct AteNuisance {
    std::vector<double> mu1, mu0;  // E[Y | S=1, D=d, X]
    std::vector<double> e;         // P(D=1 | X)
    std::vector<double> s1, s0;    // P(S=1 | D=d, X), all ones without selection
};

struct AttNuisance {
    std::vector<double> mu1c, mu0c;  // E[Y | S=1, D=d, X]
    std::vector<double> e;
    std::vector<double> s1, s0;
};

struct BoundsNuisance {
    std::vector<double> e, s1, s0;
    std::vector<double> mu1c, mu0c;  // untrimmed arm means for point-identified pieces
    // treated-arm trimming: thresholds and partial means at shares p0 and 1-p0
    std::vector<double> q_treated_lower, q_treated_upper;
    std::vector<double> m_treated_lower, m_treated_upper;  // E[Y 1(Y<=q) | S=1, D=1, X] etc.
    // control-arm trimming used on strata where selection rises under control
    std::vector<double> q_control_lower, q_control_upper;
    std::vector<double> m_control_lower, m_control_upper;
};

AteNuisance fit_ate_nuisance(const EstimationInput& in, const EstimatorConfig& config);
AttNuisance fit_att_nuisance(const EstimationInput& in, const EstimatorConfig& config);
BoundsNuisance fit_bounds_nuisance(const EstimationInput& in, const EstimatorConfig& config);

EstimateResult ate_aipw(const EstimationInput& in, const AteNuisance& nu);
EstimateResult att_m2(const EstimationInput& in, const AttNuisance& nu);

struct BoundsResult {
    std::string estimand = "always_observed_ate";
    double lower = 0.0, upper = 0.0;
    double se_lower = 0.0, se_upper = 0.0;
    double ci_lower = 0.0, ci_upper = 0.0;  // outer interval for the identified set
    double alpha = 0.10;
    std::string ci_method = "conservative_substitute";
    bool crossed = false;
    double p_always_observed = 0.0;
    int n = 0;
    int clipped = 0;
    int clamped_ratio_rows = 0;  // selection ratio above one forced to one
    std::string note;
    std::vector<double> lower_signals, upper_signals;
};

BoundsResult zr_lee_bounds(const EstimationInput& in, const BoundsNuisance& nu,
                           const EstimatorConfig& config);

// convenience entry points that fit nuisances and evaluate
EstimateResult estimate_ate(const EstimationInput& in, const EstimatorConfig& config);
EstimateResult estimate_att(const EstimationInput& in, const EstimatorConfig& config);
BoundsResult estimate_bounds(const EstimationInput& in, const EstimatorConfig& config);
// complete-case difference of means in signal form, valid when missingness is exogenous
EstimateResult estimate_complete_case(const EstimationInput& in, const EstimatorConfig& config);

// Group effects from a signal regression onto heterogeneity variables.
enum class HetDictionary { Indicators, Linear };

struct HetCell {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    int n = 0;
    double share = 0.0;
};

struct HetResult {
    HetDictionary dictionary = HetDictionary::Indicators;
    std::vector<HetCell> cells;           // indicator dictionary
    std::vector<std::string> coef_names;  // linear dictionary
    std::vector<double> coef, coef_se;
    double aggregate = 0.0;      // mean signal; equals the share-weighted cell sum
    double aggregate_se = 0.0;
};

HetResult heterogeneous_effects(const std::vector<double>& signals, const Matrix& z,
                                const std::vector<std::string>& z_names, HetDictionary dict);

// Propensity overlap diagnostics and the selection ratio profile used by bounds.
struct OverlapSummary {
    double min = 0.0, max = 0.0;
    std::vector<double> deciles;  // 9 interior deciles
    double share_below_005 = 0.0, share_below_010 = 0.0;
    double share_above_090 = 0.0, share_above_095 = 0.0;
    int n = 0;
};

struct OverlapReport {
    OverlapSummary treated, control;  // fitted propensity by arm
    std::vector<int> histogram_treated, histogram_control;  // 50 bins of width 0.02
    double positive_share = 1.0;      // rows whose selection ratio is at most one
    bool no_trimming_required = true; // ratio is one everywhere
    bool has_selection = false;
    int n = 0;
};

OverlapReport overlap_report(const EstimationInput& in, const EstimatorConfig& config);

}  // namespace mswig
