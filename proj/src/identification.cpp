#include "mswig/identification.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mswig {

const char* to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::PointIdentified: return "PointIdentified";
        case PlanStatus::PartiallyIdentified: return "PartiallyIdentified";
        case PlanStatus::NotIdentified: return "NotIdentified";
    }
    return "?";
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Adjustment: return "Adjustment";
        case Strategy::WeightedAdjustmentATT: return "WeightedAdjustmentATT";
        case Strategy::TrimmingBounds: return "TrimmingBounds";
        case Strategy::None: return "None";
    }
    return "?";
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

}  // namespace

IdentificationPlan plan_identification(const MGraph& g, const EstimandSpec& spec) {
    g.validate();
    const auto& treat = g.node(spec.treatment);
    const auto& outcome = g.node(spec.outcome);
    if (treat.kind != NodeKind::Observed)
        throw std::invalid_argument("treatment must be an Observed node: " + spec.treatment);
    if (outcome.kind != NodeKind::Observed && outcome.kind != NodeKind::PartiallyMissing)
        throw std::invalid_argument("outcome must be Observed or PartiallyMissing: " + spec.outcome);
    for (const auto& a : spec.adjustment) {
        if (a == spec.treatment || a == spec.outcome)
            throw std::invalid_argument("adjustment set overlaps treatment or outcome: " + a);
        if (g.node(a).kind != NodeKind::Observed)
            throw std::invalid_argument("adjustment variable must be Observed: " + a);
    }

    std::string sym = lower(spec.treatment);
    if (sym == spec.treatment) sym = spec.treatment + "_0";
    SwigGraph swig = split(g, Intervention{{{spec.treatment, sym}}});

    Term d_term = swig.term(swig.index_of(spec.treatment));
    Term y_term = swig.term(swig.index_of(spec.outcome));
    std::vector<Term> adj_terms;
    for (const auto& a : spec.adjustment) adj_terms.push_back(swig.term(swig.index_of(a)));

    IdentificationPlan plan;
    const std::string adj_list = join(spec.adjustment, ",");
    const std::string x_eq = spec.adjustment.empty() ? "" : ", " + adj_list + "=x";
    const std::string sum_x = spec.adjustment.empty() ? "" : "sum_x ";
    const std::string p_x = spec.adjustment.empty() ? "" : " P(" + adj_list + "=x)";
    const std::string y_of_d = spec.outcome + "(" + sym + ")";

    // treatment unconfoundedness
    auto q1_stmt = CIStatement::make({y_term}, {d_term}, adj_terms);
    auto q1 = d_separated(swig, {y_term}, {d_term}, adj_terms);
    if (!q1.separated) {
        plan.failed = q1_stmt;
        plan.witness_path = q1.witness_path;
        return plan;
    }
    plan.certifying.push_back(q1_stmt);

    if (outcome.kind == NodeKind::Observed) {
        plan.status = PlanStatus::PointIdentified;
        plan.strategy = spec.effect == TreatmentEffect::ATT ? Strategy::WeightedAdjustmentATT
                                                            : Strategy::Adjustment;
        std::ostringstream f;
        if (spec.effect == TreatmentEffect::ATE)
            f << "E[" << y_of_d << "] = " << sum_x << "E[" << spec.outcome << " | "
              << spec.treatment << "=" << sym << x_eq << "]" << p_x;
        else
            f << "E[" << y_of_d << " | " << spec.treatment << "=1] = " << sum_x << "E["
              << spec.outcome << " | " << spec.treatment << "=" << sym << x_eq << "]"
              << (spec.adjustment.empty() ? "" : " P(" + adj_list + "=x | " + spec.treatment + "=1)");
        plan.estimand_formula = f.str();
        return plan;
    }

    // missing outcome: selection ignorability under the adjustment set
    std::string sel = g.selection_of(spec.outcome);
    std::string proxy = g.proxy_of(spec.outcome);
    Term s_term = swig.term(swig.index_of(sel));
    std::vector<Term> adj_and_d = adj_terms;
    adj_and_d.push_back(d_term);
    auto q2_stmt = CIStatement::make({s_term}, {y_term}, adj_and_d);
    auto q2 = d_separated(swig, {s_term}, {y_term}, adj_and_d);
    if (q2.separated) {
        plan.certifying.push_back(q2_stmt);
        plan.status = PlanStatus::PointIdentified;
        plan.strategy = spec.effect == TreatmentEffect::ATT ? Strategy::WeightedAdjustmentATT
                                                            : Strategy::Adjustment;
        std::ostringstream f;
        f << "E[" << proxy << " | " << sel << "=1, " << spec.treatment << "=" << sym << x_eq
          << "] = E[" << y_of_d << (spec.adjustment.empty() ? "" : " | " + adj_list + "=x") << "]";
        if (spec.effect == TreatmentEffect::ATE) {
            if (!spec.adjustment.empty())
                f << "; E[" << y_of_d << "] = " << sum_x << "E[" << proxy << " | " << sel << "=1, "
                  << spec.treatment << "=" << sym << x_eq << "]" << p_x;
        } else
            f << "; E[" << y_of_d << " | " << spec.treatment << "=1] = " << sum_x << "E[" << proxy
              << " | " << sel << "=1, " << spec.treatment << "=" << sym << x_eq << "]"
              << (spec.adjustment.empty()
                      ? ""
                      : " P(" + spec.treatment + "=1 | " + adj_list + "=x) P(" + adj_list +
                            "=x) / P(" + spec.treatment + "=1)");
        plan.estimand_formula = f.str();
        return plan;
    }

    if (spec.monotonicity != Monotonicity::None) {
        auto q3_stmt = CIStatement::make({d_term}, {s_term, y_term}, adj_terms);
        auto q3 = d_separated(swig, {d_term}, {s_term, y_term}, adj_terms);
        if (q3.separated) {
            plan.certifying.push_back(q3_stmt);
            plan.status = PlanStatus::PartiallyIdentified;
            plan.strategy = Strategy::TrimmingBounds;
            plan.required_assumptions.push_back(
                spec.monotonicity == Monotonicity::Positive
                    ? "Monotonicity: " + sel + "(1) >= " + sel + "(0)"
                    : "Conditional monotonicity: sign of " + sel + "(1) - " + sel +
                          "(0) constant given " + adj_list);
            std::ostringstream f;
            std::string cond = sel + "=1, " + spec.treatment;
            f << "p0(x) = P(" << sel << "=1 | " << spec.treatment << "=0" << x_eq << ") / P(" << sel
              << "=1 | " << spec.treatment << "=1" << x_eq << "); bounds for E[" << spec.outcome
              << "(1) | always observed] trim " << proxy << " at Q(p0(x)) (lower) and Q(1-p0(x)) "
              << "(upper) within " << cond << "=1" << x_eq << "; control arm uses E[" << proxy
              << " | " << sel << "=1, " << spec.treatment << "=0" << x_eq << "]";
            plan.estimand_formula = f.str();
            return plan;
        }
        plan.failed = q3_stmt;
        plan.witness_path = q3.witness_path;
        return plan;
    }

    plan.failed = q2_stmt;
    plan.witness_path = q2.witness_path;
    return plan;
}

namespace {

Term T(const std::string& n) { return Term{n}; }
Term Td(const std::string& n, const std::string& sym) { return Term{n, {sym}}; }

// union of the stated rows and the engine-derived minimal set, verified
std::vector<CIStatement> entry_implied(const MGraph& restricted,
                                       std::vector<CIStatement> rows) {
    for (const auto& st : minimal_testable_set(restricted)) {
        if (std::find(rows.begin(), rows.end(), st) == rows.end()) rows.push_back(st);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& st : rows) {
        if (!d_separated(restricted, st.left, st.right, st.given).separated)
            throw std::logic_error("catalog statement does not verify: " + st.text());
    }
    return rows;
}

void verify_swig(const MGraph& restricted, const std::vector<CIStatement>& stmts) {
    SwigGraph sw = split(restricted, Intervention{{{"D", "d"}}});
    for (const auto& st : stmts) {
        if (!d_separated(sw, st.left, st.right, st.given).separated)
            throw std::logic_error("catalog intervention statement does not verify: " + st.text());
    }
}

}  // namespace

ImplicationCatalog attrition_catalog(bool randomized_treatment) {
    ImplicationCatalog cat;
    cat.family = "attrition";
    cat.randomized = randomized_treatment;

    if (!randomized_treatment) {
        struct Row {
            const char* name;
            AttritionModel model;
            std::vector<std::pair<std::string, std::string>> removed;
            std::vector<CIStatement> rows;
        };
        std::vector<Row> defs;
        defs.push_back({"Differential attrition",
                        AttritionModel::Differential,
                        {{"D", "S"}},
                        {CIStatement::make({T("D")}, {T("S")}, {T("X")})}});
        defs.push_back({"Determinants of attrition",
                        AttritionModel::Determinants,
                        {{"X", "S"}},
                        {CIStatement::make({T("S")}, {T("X")}, {T("D")})}});
        defs.push_back({"Selective attrition (1)",
                        AttritionModel::SelectiveOne,
                        {{"X", "D"}, {"X", "S"}},
                        {CIStatement::make({T("X")}, {T("D")}, {T("S")}),
                         CIStatement::make({T("S")}, {T("X")})}});
        defs.push_back({"Selective attrition (2)",
                        AttritionModel::SelectiveTwo,
                        {{"X", "D"}, {"D", "S"}},
                        {CIStatement::make({T("X")}, {T("D")}, {T("S")}),
                         CIStatement::make({T("D")}, {T("S")})}});
        for (auto& d : defs) {
            CatalogEntry e;
            e.name = d.name;
            e.removed_edges = d.removed;
            e.restricted = graph_attrition(d.model, false);
            e.implied = entry_implied(e.restricted, d.rows);
            cat.entries.push_back(std::move(e));
        }
        return cat;
    }

    // with X -> D removed the four models collapse to two
    {
        CatalogEntry e;
        e.name = "Determinants of attrition / Selective attrition (1)";
        e.removed_edges = {{"X", "D"}, {"X", "S"}};
        e.restricted = graph_attrition(AttritionModel::SelectiveOne, true);
        e.implied = entry_implied(e.restricted, {CIStatement::make({T("S")}, {T("X")}),
                                                 CIStatement::make({T("X")}, {T("D")}, {T("S")})});
        e.swig_statements = {CIStatement::make({Td("Y", "d")}, {T("D"), Td("S", "d")}),
                             CIStatement::make({Td("Y", "d")}, {T("D"), Td("S", "d")}, {T("X")})};
        verify_swig(e.restricted, e.swig_statements);
        e.estimand_note =
            "complete-case mean of Y_star under D=d is representative of E[Y(d)], with or "
            "without conditioning on X";
        cat.entries.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "Differential attrition / Selective attrition (2)";
        e.removed_edges = {{"X", "D"}, {"D", "S"}};
        e.restricted = graph_attrition(AttritionModel::SelectiveTwo, true);
        e.implied = entry_implied(e.restricted, {CIStatement::make({T("D")}, {T("S")}),
                                                 CIStatement::make({T("D")}, {T("X")}),
                                                 CIStatement::make({T("X")}, {T("D")}, {T("S")})});
        e.swig_statements = {CIStatement::make({Td("Y", "d")}, {T("D")}),
                             CIStatement::make({Td("Y", "d")}, {T("S")}, {T("X")})};
        verify_swig(e.restricted, e.swig_statements);
        e.estimand_note =
            "complete-case contrasts are representative only after conditioning on X: Y(d) is "
            "independent of S given X but not marginally";
        cat.entries.push_back(std::move(e));
    }
    return cat;
}

CatalogEntry panel_catalog(M4Variant variant) {
    CatalogEntry e;
    e.restricted = graph_m4(variant);
    switch (variant) {
        case M4Variant::NoExclusion: {
            e.name = "Panel: no exclusion";
            e.implied = entry_implied(e.restricted, {});
            SwigGraph sw = split(e.restricted, Intervention{{{"D", "d"}}});
            auto sel = d_separated(sw, {Td("Y_1", "d")}, {Td("S", "d")}, {});
            if (sel.separated)
                throw std::logic_error("expected Y_1(d) and S(d) to share a latent cause");
            std::string path;
            for (size_t i = 0; i < sel.witness_path.size(); ++i) {
                if (i) path += " - ";
                path += sel.witness_path[i];
            }
            e.estimand_note =
                "not identified; respondents form a treatment-dependent subpopulation because "
                "S(d) and Y_1(d) share latent causes: " + path;
            break;
        }
        case M4Variant::ExclusionI: {
            e.name = "Panel: exclusion restriction I";
            e.removed_edges = {{"U_0", "V"}, {"U_1", "V"}};
            e.implied = entry_implied(
                e.restricted, {CIStatement::make({T("Y_0")}, {T("D"), T("S")})});
            e.untestable = {CIStatement::make({T("Y_1")}, {T("S")}, {T("D")})};
            for (const auto& st : e.untestable) {
                if (!d_separated(e.restricted, st.left, st.right, st.given).separated)
                    throw std::logic_error("catalog statement does not verify: " + st.text());
            }
            e.swig_statements = {CIStatement::make({Td("Y_1", "d")}, {T("D"), Td("S", "d")})};
            verify_swig(e.restricted, e.swig_statements);
            e.estimand_note =
                "identifies the population effect: always-observed respondents are representative";
            break;
        }
        case M4Variant::ExclusionII: {
            e.name = "Panel: exclusion restriction II";
            e.removed_edges = {{"D", "S"}};
            e.implied = entry_implied(e.restricted, {CIStatement::make({T("D")}, {T("Y_0")}),
                                                     CIStatement::make({T("D")}, {T("S")})});
            e.swig_statements = {CIStatement::make({Td("Y_1", "d")}, {T("D")}, {T("S")})};
            verify_swig(e.restricted, e.swig_statements);
            e.estimand_note =
                "identifies the effect on responders (S=1); the two marginal restrictions jointly "
                "imply D _||_ Y_0 | S on the graph";
            break;
        }
    }
    return e;
}

std::pair<MGraph, std::string> necessity_counterexample() {
    MGraph g = graph_counterexample();
    std::string why =
        "S _||_ Y holds, so the complete-case mean of Y_star is consistent for E[Y], yet the "
        "test battery rejects: D and X are both associated with S through U (D -> U -> S, "
        "X -> U -> S). Rejection of the implied restrictions is therefore not necessary for "
        "identification.";
    return {g, why};
}

}  // namespace mswig
