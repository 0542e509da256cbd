#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mswig/catalog_graphs.hpp"
#include "mswig/identification.hpp"
#include "mswig/independence.hpp"

using namespace mswig;

namespace {

std::vector<std::string> texts(const std::vector<CIStatement>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.text());
    return out;
}

EstimandSpec spec_for(const std::string& treatment, const std::string& outcome,
                      TreatmentEffect effect, std::vector<std::string> adjust,
                      Monotonicity mono = Monotonicity::None) {
    EstimandSpec s;
    s.treatment = treatment;
    s.outcome = outcome;
    s.effect = effect;
    s.adjustment = std::move(adjust);
    s.monotonicity = mono;
    return s;
}

}  // namespace

TEST_CASE("selection ignorable given covariates identifies the adjusted mean") {
    auto plan = plan_identification(graph_m2(), spec_for("D", "Y", TreatmentEffect::ATE, {"X"}));
    CHECK(plan.status == PlanStatus::PointIdentified);
    CHECK(plan.strategy == Strategy::Adjustment);
    CHECK(texts(plan.certifying) ==
          std::vector<std::string>{"D _||_ Y(d) | X", "S(d) _||_ Y(d) | D,X"});
    CHECK(plan.estimand_formula ==
          "E[Y_star | S=1, D=d, X=x] = E[Y(d) | X=x]; "
          "E[Y(d)] = sum_x E[Y_star | S=1, D=d, X=x] P(X=x)");
    CHECK(plan.required_assumptions.empty());
    CHECK_FALSE(plan.failed.has_value());
}

TEST_CASE("treated-population effect reweights by the treated covariate law") {
    auto plan = plan_identification(graph_m2(), spec_for("D", "Y", TreatmentEffect::ATT, {"X"}));
    CHECK(plan.status == PlanStatus::PointIdentified);
    CHECK(plan.strategy == Strategy::WeightedAdjustmentATT);
    CHECK(plan.estimand_formula ==
          "E[Y_star | S=1, D=d, X=x] = E[Y(d) | X=x]; "
          "E[Y(d) | D=1] = sum_x E[Y_star | S=1, D=d, X=x] P(D=1 | X=x) P(X=x) / P(D=1)");
}

TEST_CASE("an empty adjustment set fails on the confounded design") {
    auto plan = plan_identification(graph_m2(), spec_for("D", "Y", TreatmentEffect::ATE, {}));
    CHECK(plan.status == PlanStatus::NotIdentified);
    CHECK(plan.strategy == Strategy::None);
    REQUIRE(plan.failed.has_value());
    CHECK(plan.failed->text() == "D _||_ Y(d)");
    CHECK_FALSE(plan.witness_path.empty());
}

TEST_CASE("fully randomized missingness needs no adjustment") {
    auto plan = plan_identification(graph_m1(), spec_for("D", "Y", TreatmentEffect::ATE, {}));
    CHECK(plan.status == PlanStatus::PointIdentified);
    CHECK(plan.estimand_formula == "E[Y_star | S=1, D=d] = E[Y(d)]");
}

TEST_CASE("latent selection confounding blocks point identification") {
    auto plan = plan_identification(graph_m3(), spec_for("D", "Y", TreatmentEffect::ATE, {"X"}));
    CHECK(plan.status == PlanStatus::NotIdentified);
    REQUIRE(plan.failed.has_value());
    CHECK(plan.failed->text() == "S(d) _||_ Y(d) | D,X");
    CHECK_FALSE(plan.witness_path.empty());
}

TEST_CASE("declared monotonicity turns the latent-confounding case into bounds") {
    auto plan = plan_identification(
        graph_m3(), spec_for("D", "Y", TreatmentEffect::ATE, {"X"}, Monotonicity::Positive));
    CHECK(plan.status == PlanStatus::PartiallyIdentified);
    CHECK(plan.strategy == Strategy::TrimmingBounds);
    CHECK(texts(plan.certifying) ==
          std::vector<std::string>{"D _||_ Y(d) | X", "D _||_ S(d),Y(d) | X"});
    CHECK(plan.required_assumptions ==
          std::vector<std::string>{"Monotonicity: S(1) >= S(0)"});
    CHECK(plan.estimand_formula.find("p0(x) = P(S=1 | D=0, X=x) / P(S=1 | D=1, X=x)") !=
          std::string::npos);

    auto cond = plan_identification(
        graph_m3(),
        spec_for("D", "Y", TreatmentEffect::ATE, {"X"}, Monotonicity::ConditionalOnCovariates));
    CHECK(cond.status == PlanStatus::PartiallyIdentified);
    CHECK(cond.required_assumptions.front().find("Conditional monotonicity") == 0);
}

TEST_CASE("an observed outcome skips the selection query") {
    MGraph g;
    g.add_node("X", NodeKind::Observed);
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y", NodeKind::Observed);
    g.add_edge("X", "D");
    g.add_edge("X", "Y");
    g.add_edge("D", "Y");
    auto plan = plan_identification(g, spec_for("D", "Y", TreatmentEffect::ATE, {"X"}));
    CHECK(plan.status == PlanStatus::PointIdentified);
    CHECK(plan.estimand_formula == "E[Y(d)] = sum_x E[Y | D=d, X=x] P(X=x)");
}

TEST_CASE("value symbols avoid colliding with a lowercase treatment name") {
    MGraph g;
    g.add_node("d", NodeKind::Observed);
    g.add_node("Y", NodeKind::Observed);
    g.add_edge("d", "Y");
    auto plan = plan_identification(g, spec_for("d", "Y", TreatmentEffect::ATE, {}));
    CHECK(plan.status == PlanStatus::PointIdentified);
    CHECK(plan.certifying.front().text() == "Y(d_0) _||_ d");
}

TEST_CASE("estimand specs are validated against node kinds") {
    MGraph g = graph_m3();
    CHECK_THROWS_AS(
        plan_identification(g, spec_for("U", "Y", TreatmentEffect::ATE, {})),
        std::invalid_argument);
    CHECK_THROWS_AS(
        plan_identification(g, spec_for("D", "U", TreatmentEffect::ATE, {})),
        std::invalid_argument);
    CHECK_THROWS_AS(
        plan_identification(g, spec_for("D", "Y", TreatmentEffect::ATE, {"U"})),
        std::invalid_argument);
    CHECK_THROWS_AS(
        plan_identification(g, spec_for("D", "Y", TreatmentEffect::ATE, {"D"})),
        std::invalid_argument);
    CHECK_THROWS_AS(
        plan_identification(g, spec_for("Q", "Y", TreatmentEffect::ATE, {})),
        std::invalid_argument);
}

TEST_CASE("observational attrition catalog lists the four restricted designs") {
    ImplicationCatalog cat = attrition_catalog(false);
    CHECK(cat.family == "attrition");
    CHECK_FALSE(cat.randomized);
    REQUIRE(cat.entries.size() == 4);

    CHECK(cat.entries[0].name == "Differential attrition");
    CHECK(texts(cat.entries[0].implied) == std::vector<std::string>{"D _||_ S | X"});
    CHECK(cat.entries[0].removed_edges ==
          std::vector<std::pair<std::string, std::string>>{{"D", "S"}});

    CHECK(cat.entries[1].name == "Determinants of attrition");
    CHECK(texts(cat.entries[1].implied) == std::vector<std::string>{"S _||_ X | D"});

    CHECK(cat.entries[2].name == "Selective attrition (1)");
    CHECK(texts(cat.entries[2].implied) ==
          std::vector<std::string>{"D _||_ X", "S _||_ X", "D _||_ X | S"});

    CHECK(cat.entries[3].name == "Selective attrition (2)");
    CHECK(texts(cat.entries[3].implied) ==
          std::vector<std::string>{"D _||_ S", "D _||_ X", "D _||_ S | X", "D _||_ X | S"});
}

TEST_CASE("randomized treatment collapses the catalog to two entries") {
    ImplicationCatalog cat = attrition_catalog(true);
    CHECK(cat.randomized);
    REQUIRE(cat.entries.size() == 2);

    CHECK(texts(cat.entries[0].implied) ==
          std::vector<std::string>{"D _||_ X", "S _||_ X", "D _||_ X | S"});
    CHECK(cat.entries[0].swig_statements.size() == 2);
    CHECK(cat.entries[0].estimand_note.find("representative") != std::string::npos);

    CHECK(texts(cat.entries[1].implied) ==
          std::vector<std::string>{"D _||_ S", "D _||_ X", "D _||_ S | X", "D _||_ X | S"});
    CHECK(texts(cat.entries[1].swig_statements) ==
          std::vector<std::string>{"D _||_ Y(d)", "S _||_ Y(d) | X"});
}

TEST_CASE("panel catalog distinguishes the exclusion restrictions") {
    CatalogEntry none = panel_catalog(M4Variant::NoExclusion);
    CHECK(texts(none.implied) == std::vector<std::string>{"D _||_ Y_0"});
    CHECK(none.estimand_note.find("not identified") != std::string::npos);
    CHECK(none.estimand_note.find("U_1") != std::string::npos);

    CatalogEntry one = panel_catalog(M4Variant::ExclusionI);
    CHECK(texts(one.implied) ==
          std::vector<std::string>{"D _||_ Y_0", "D,S _||_ Y_0", "S _||_ Y_0",
                                   "D _||_ Y_0 | S"});
    CHECK(texts(one.untestable) == std::vector<std::string>{"S _||_ Y_1 | D"});
    CHECK(texts(one.swig_statements) == std::vector<std::string>{"D,S(d) _||_ Y_1(d)"});

    CatalogEntry two = panel_catalog(M4Variant::ExclusionII);
    CHECK(texts(two.implied) ==
          std::vector<std::string>{"D _||_ S", "D _||_ Y_0", "D _||_ S | Y_0"});
    CHECK(texts(two.swig_statements) == std::vector<std::string>{"D _||_ Y_1(d) | S"});
    CHECK(two.estimand_note.find("responders") != std::string::npos);
}

TEST_CASE("passing the battery is not necessary for a valid complete-case analysis") {
    auto [g, why] = necessity_counterexample();
    CHECK(g == graph_counterexample());
    CHECK_FALSE(why.empty());

    // complete-case identification holds: selection is independent of the outcome
    CHECK(d_separated(g, {Term("S")}, {Term("Y")}, {}).separated);
    auto plan = plan_identification(g, spec_for("D", "Y", TreatmentEffect::ATE, {}));
    CHECK(plan.status == PlanStatus::PointIdentified);

    // yet the differential-attrition restriction fails on this graph
    CHECK_FALSE(d_separated(g, {Term("D")}, {Term("S")}, {Term("X")}).separated);
}
