#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mswig/graph.hpp"
#include "mswig/independence.hpp"
#include "mswig/swig.hpp"

namespace mswig {

enum class MissingnessClass { MCAR, MAR, MNAR };

const char* to_string(MissingnessClass c);

struct MissingnessVerdict {
    MissingnessClass cls = MissingnessClass::MNAR;
    // MCAR: S _||_ everything except proxies; MAR: S _||_ hidden | observables.
    std::optional<CIStatement> certifying;
    // MNAR: minimal failed query (first hidden variable an active trail reaches).
    std::optional<CIStatement> violating;
    std::vector<std::string> witness_path;
};

// Classification for a subset of the selection indicators; empty = all of
// them. Observables for the MAR query are Observed nodes plus selection nodes
// outside the subset; hidden variables are PartiallyMissing and Latent nodes.
MissingnessVerdict classify(const MGraph& g, const std::vector<std::string>& subset = {});

// Counterfactual classification on an intervention graph.
MissingnessVerdict classify(const SwigGraph& g, const std::vector<std::string>& subset = {});

}  // namespace mswig
