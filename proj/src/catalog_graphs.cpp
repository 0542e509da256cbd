#include "mswig/catalog_graphs.hpp"

#include <stdexcept>

namespace mswig {

MGraph graph_m1() {
    MGraph g;
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y");
    g.add_edge("D", "Y");
    g.validate();
    return g;
}

MGraph graph_m2() {
    MGraph g;
    g.add_node("X", NodeKind::Observed);
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y");
    g.add_edge("X", "D");
    g.add_edge("X", "Y");
    g.add_edge("X", "S");
    g.add_edge("D", "Y");
    g.add_edge("D", "S");
    g.validate();
    return g;
}

MGraph graph_m3() {
    MGraph g;
    g.add_node("X", NodeKind::Observed);
    g.add_node("U", NodeKind::Latent);
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y");
    g.add_edge("X", "D");
    g.add_edge("X", "Y");
    g.add_edge("X", "S");
    g.add_edge("D", "Y");
    g.add_edge("D", "S");
    g.add_edge("U", "S");
    g.add_edge("U", "Y");
    g.add_biedge("X", "U");
    g.validate();
    return g;
}

MGraph graph_counterexample() {
    MGraph g;
    g.add_node("X", NodeKind::Observed);
    g.add_node("D", NodeKind::Observed);
    g.add_node("U", NodeKind::Latent);
    g.add_node("Y", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y");
    g.add_edge("D", "U");
    g.add_edge("X", "U");
    g.add_edge("U", "S");
    g.validate();
    return g;
}

MGraph graph_m4(M4Variant variant) {
    MGraph g;
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y_0", NodeKind::Observed);
    g.add_node("U_0", NodeKind::Latent);
    g.add_node("U_1", NodeKind::Latent);
    g.add_node("V", NodeKind::Latent);
    g.add_node("Y_1", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y_1");
    g.add_edge("D", "Y_1");
    g.add_edge("U_0", "Y_0");
    g.add_edge("U_1", "Y_1");
    g.add_edge("V", "S");
    if (variant != M4Variant::ExclusionII) g.add_edge("D", "S");
    g.add_biedge("U_0", "U_1");
    if (variant != M4Variant::ExclusionI) {
        g.add_biedge("U_0", "V");
        g.add_biedge("U_1", "V");
    }
    g.validate();
    return g;
}

MGraph graph_attrition(AttritionModel model, bool randomized) {
    MGraph g;
    g.add_node("X", NodeKind::Observed);
    g.add_node("D", NodeKind::Observed);
    g.add_node("Y", NodeKind::PartiallyMissing);
    g.add_selection("S", "Y");
    bool x_to_d = !randomized, x_to_s = true, d_to_s = true;
    switch (model) {
        case AttritionModel::Differential: d_to_s = false; break;
        case AttritionModel::Determinants: x_to_s = false; break;
        case AttritionModel::SelectiveOne:
            x_to_d = false;
            x_to_s = false;
            break;
        case AttritionModel::SelectiveTwo:
            x_to_d = false;
            d_to_s = false;
            break;
    }
    if (x_to_d) g.add_edge("X", "D");
    g.add_edge("X", "Y");
    if (x_to_s) g.add_edge("X", "S");
    g.add_edge("D", "Y");
    if (d_to_s) g.add_edge("D", "S");
    g.validate();
    return g;
}

}  // namespace mswig
