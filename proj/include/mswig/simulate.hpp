#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mswig/dataset.hpp"
#include "mswig/graph.hpp"

namespace mswig {

// Structural simulators with per-draw ground truth. Each template evaluates the
// same exogenous noise under the natural regime and under both treatment
// assignments, so the hidden table carries exact Y(0), Y(1), S(0), S(1) and the
// observed table satisfies Y* = Y(D) exactly on selected rows.
enum class SimTemplate { M1, M2, M3, M4Panel, Custom };

SimTemplate parse_sim_template(const std::string& s);
const char* to_string(SimTemplate t);

struct SimConfig {
    SimTemplate model = SimTemplate::M2;
    int n = 1000;
    std::uint64_t seed = 0;

    double tau = 1.0;     // treatment effect on the outcome
    double tau_x = 0.0;   // effect modification per covariate level
    double p_treat = 0.5; // assignment probability under randomization
    bool randomized = true;
    bool force_always_selected = false;  // overrides selection to one everywhere

    double p_select = 0.7;  // exogenous selection rate, first template

    int x_levels = 4;      // discrete covariate support 0..levels-1
    double beta_x = 0.5;   // outcome slope in the covariate
    double gamma_d = 0.5;  // selection response to treatment
    double gamma_x = 0.3;  // selection slope in the covariate

    double rho_xu = 0.5;          // covariate loading on the shared latent factor
    double beta_u = 0.5;          // outcome loading on the latent factor
    double gamma_u = 0.5;         // selection loading on the latent factor
    double negative_share = 0.0;  // covariate mass whose selection response flips sign

    bool exclusion_treatment = false;   // panel: remove the treatment arrow into selection
    bool exclusion_confounding = false; // panel: remove latent links into selection
    double gamma_v = 1.0;
    double a1 = 0.5;  // panel follow-up intercept

    MGraph graph;  // custom template
    std::string treatment = "D";
    std::string outcome = "Y";
    std::map<std::string, double> coef;  // "<node>.icept", "<node>.from.<parent>",
                                         // "<node>.sd", "<node>.binary"
};

// hidden stratum codes
inline constexpr double kStratumAlways = 0;
inline constexpr double kStratumTreatedOnly = 1;
inline constexpr double kStratumControlOnly = 2;
inline constexpr double kStratumNever = 3;

struct SimData {
    Dataset observed;
    Dataset hidden;  // Y0, Y1, S0, S1, stratum, latent factors
    Roles roles;
};

SimData simulate(const SimConfig& config);

struct OracleTruth {
    double ate = 0.0;
    double att = 0.0;
    double always_observed_ate = 0.0;
    double p_always_observed = 0.0;
};

// finite-sample truths computed from the hidden potential outcome table
OracleTruth oracle(const SimData& data);

}  // namespace mswig
