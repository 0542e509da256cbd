#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mswig/catalog_graphs.hpp"
#include "mswig/graph.hpp"
#include "mswig/independence.hpp"
#include "mswig/swig.hpp"

namespace mswig {

enum class TreatmentEffect { ATE, ATT };
enum class Monotonicity { None, Positive, ConditionalOnCovariates };

struct EstimandSpec {
    std::string treatment;
    std::string outcome;
    TreatmentEffect effect = TreatmentEffect::ATE;
    std::vector<std::string> adjustment;
    Monotonicity monotonicity = Monotonicity::None;
};

enum class PlanStatus { PointIdentified, PartiallyIdentified, NotIdentified };
enum class Strategy { Adjustment, WeightedAdjustmentATT, TrimmingBounds, None };

const char* to_string(PlanStatus s);
const char* to_string(Strategy s);

struct IdentificationPlan {
    PlanStatus status = PlanStatus::NotIdentified;
    Strategy strategy = Strategy::None;
    std::vector<CIStatement> certifying;
    std::vector<std::string> required_assumptions;
    std::string estimand_formula;
    std::optional<CIStatement> failed;  // first failed query when NotIdentified
    std::vector<std::string> witness_path;
};

// Checks, in order: treatment unconfoundedness Y(d) _||_ D | adjustment, then
// (missing outcome) selection ignorability S(d) _||_ Y(d) | adjustment, D, and
// finally, if monotonicity is declared, the trimming condition
// D _||_ S(d), Y(d) | adjustment.
IdentificationPlan plan_identification(const MGraph& g, const EstimandSpec& spec);

struct CatalogEntry {
    std::string name;
    std::vector<std::pair<std::string, std::string>> removed_edges;
    std::vector<CIStatement> implied;           // observed-level testable restrictions
    std::vector<CIStatement> swig_statements;   // counterfactual representativeness
    std::vector<CIStatement> untestable;        // hold on the graph, involve hidden terms
    std::string estimand_note;
    MGraph restricted;
};

struct ImplicationCatalog {
    std::string family;
    bool randomized = false;
    std::vector<CatalogEntry> entries;
};

// Attrition test battery on the M2 template. With randomized treatment the
// four models collapse pairwise to two.
ImplicationCatalog attrition_catalog(bool randomized_treatment);

// Panel refutation battery for one M4 variant.
CatalogEntry panel_catalog(M4Variant variant);

// Graph where missingness tests reject although the complete-case mean of Y
// is consistent, plus an explanation.
std::pair<MGraph, std::string> necessity_counterexample();

}  // namespace mswig
