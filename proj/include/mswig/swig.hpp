#pragma once

#include <string>
#include <vector>

#include "mswig/graph.hpp"
#include "mswig/independence.hpp"

namespace mswig {

// do(node := value symbol), e.g. {{"D", "d"}}.
struct Intervention {
    std::vector<std::pair<std::string, std::string>> assignments;
};

struct SwigNode {
    std::string base;
    NodeKind kind = NodeKind::Observed;
    bool fixed = false;
    std::string value;                // value symbol when fixed
    std::vector<std::string> labels;  // counterfactual labels, intervention topological order
    std::string of;                   // selection/proxy linkage, as in the source graph
};

// Node-split single-world intervention graph. Every intervened node splits
// into a random half (keeps incoming edges) and a fixed half (takes outgoing
// edges). Fixed halves are constants: they block every path and never appear
// as query terms.
class SwigGraph {
public:
    const std::vector<SwigNode>& nodes() const { return nodes_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const Intervention& intervention() const { return intervention_; }
    const MGraph& source() const { return source_; }

    // Random-half lookup by base node id; -1 if absent.
    int index_of(const std::string& base) const;
    // Flat term (base name + labels); proxies get the nested display form.
    Term term(int idx) const;
    std::string term_text(int idx) const;

    std::string to_dot() const;

private:
    friend SwigGraph split(const MGraph&, const Intervention&);
    std::vector<SwigNode> nodes_;
    std::vector<std::pair<int, int>> edges_;
    Intervention intervention_;
    MGraph source_;
};

SwigGraph split(const MGraph& g, const Intervention& iv);

// Queries resolve terms by base name; when a term carries labels they must
// match the node's labels exactly.
SeparationVerdict d_separated(const SwigGraph& g, const std::vector<Term>& x,
                              const std::vector<Term>& y, const std::vector<Term>& z);

std::vector<CIStatement> counterfactual_independencies(const SwigGraph& g, Scope scope,
                                                       int max_conditioning = 4);

namespace detail {
SepView make_view(const SwigGraph& g);
}

}  // namespace mswig
