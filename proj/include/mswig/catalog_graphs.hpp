#pragma once

#include "mswig/graph.hpp"

namespace mswig {

// Benchmark missingness graphs. Nodes: D treatment, Y outcome (PartiallyMissing
// with selection S and proxy Y_star), X baseline covariate, U unobserved.
MGraph graph_m1();  // D -> Y only; selection exogenous
MGraph graph_m2();  // X -> {D,Y,S}, D -> {Y,S}
MGraph graph_m3();  // M2 plus U -> {S,Y} with X <-> U

// Missingness tests can reject while the complete-case mean stays valid:
// D -> U <- X, U -> S, Y exogenous.
MGraph graph_counterexample();

enum class M4Variant { NoExclusion, ExclusionI, ExclusionII };

// Two-period panel: baseline outcome Y_0 (Observed), follow-up Y_1
// (PartiallyMissing, selection S), randomized D, latents U_0, U_1, V.
// ExclusionI drops U_0 <-> V and U_1 <-> V; ExclusionII drops D -> S.
MGraph graph_m4(M4Variant variant);

enum class AttritionModel { Differential, Determinants, SelectiveOne, SelectiveTwo };

// Restricted M2 variants of the attrition test templates; randomized
// additionally removes X -> D.
MGraph graph_attrition(AttritionModel model, bool randomized);

}  // namespace mswig
