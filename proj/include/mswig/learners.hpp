#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mswig/dataset.hpp"

namespace mswig {

enum class Task { Mean, Probability, Quantile };
enum class Family { Linear, Logistic, HistGradientTrees, KNN, StratifiedEmpirical };

Task parse_task(const std::string& s);
Family parse_family(const std::string& s);
const char* to_string(Task t);
const char* to_string(Family f);

// Supported pairs: Linear+Mean, Logistic+Probability, and all three tasks for
// HistGradientTrees, KNN and StratifiedEmpirical.
struct LearnerSpec {
    Task task = Task::Mean;
    Family family = Family::Linear;
    double quantile_u = 0.5;  // training level for Task::Quantile

    int trees = 200;
    int depth = 3;
    int min_leaf = 20;
    double learning_rate = 0.1;
    int bins = 64;
    int quantile_grid = 19;  // boosted quantile models at levels i/(grid+1)

    int k = 25;              // KNN neighbours

    double ridge = 0.0;      // Linear; rank deficiency falls back to 1e-8
    int max_iter = 100;      // Logistic IRLS
};

struct FitDiagnostics {
    bool degenerate_constant = false;  // constant target, constant prediction
    bool ridge_fallback = false;
    int iterations = 0;
};

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual double predict(const double* x) const = 0;
    // Conditional quantile at an arbitrary level, monotone in u for fixed x.
    virtual double predict_quantile(const double* x, double u) const;
    FitDiagnostics diag;
};

using PredictorPtr = std::shared_ptr<const Predictor>;

// Probability outputs: logistic and boosted sigmoids are clipped to
// [1e-6, 1-1e-6]; exact cell rates and degenerate constant fits keep their
// exact value in [0,1].
PredictorPtr fit(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                 const std::vector<double>* weights, uint64_t seed);

// deterministic fold labels: seeded permutation, fold = position % k_folds
std::vector<int> fold_assignment(int n, int k_folds, std::uint64_t seed);

struct CrossFitResult {
    std::vector<double> predictions;     // out-of-fold, all rows
    std::vector<int> fold;               // fold id per row
    std::vector<PredictorPtr> models;    // one per fold
};

// K-fold out-of-fold predictions. Rows outside train_mask are never used for
// fitting but still receive predictions from their fold's model. Folds come
// from a seeded permutation; every model must see at least one training row.
CrossFitResult cross_fit(const LearnerSpec& spec, const Matrix& x, const std::vector<double>& y,
                         const std::vector<uint8_t>* train_mask, int k_folds, uint64_t seed,
                         const std::vector<double>* weights = nullptr);

}  // namespace mswig
