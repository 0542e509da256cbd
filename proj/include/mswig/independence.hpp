#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mswig/graph.hpp"

namespace mswig {

// A (possibly counterfactual) variable reference. `labels` holds intervention
// value symbols, e.g. Y(d) has labels {"d"}. `display` overrides the rendered
// text for proxies whose nested form is Y_star(Y(d),S(d)).
struct Term {
    std::string name;
    std::vector<std::string> labels;
    std::string display;

    Term() = default;
    Term(std::string n) : name(std::move(n)) {}
    Term(std::string n, std::vector<std::string> l) : name(std::move(n)), labels(std::move(l)) {}

    std::string text() const;
    bool operator==(const Term& o) const { return name == o.name && labels == o.labels; }
    bool operator<(const Term& o) const { return text() < o.text(); }
};

// Conditional independence statement in canonical form: each side sorted by
// term text, sides ordered so the smaller rendered side comes first, and a
// statement equals its left/right swap. `selection_events` lists selection
// indicators that must equal 1 for the statement to be evaluable on data
// (present whenever a proxy term appears anywhere in the statement).
struct CIStatement {
    std::vector<Term> left, right, given;
    std::vector<std::string> selection_events;

    static CIStatement make(std::vector<Term> left, std::vector<Term> right,
                            std::vector<Term> given = {},
                            std::vector<std::string> selection_events = {});

    bool conditioned_on_selection() const { return !selection_events.empty(); }
    // "A _||_ B | C,D [given S=1]"
    std::string text() const;
    bool operator==(const CIStatement& o) const { return text() == o.text(); }
    bool operator<(const CIStatement& o) const;
};

struct SeparationVerdict {
    bool separated = false;
    // Node display names along one active trail (x .. y) when not separated.
    std::vector<std::string> witness_path;
};

enum class Scope { All, ObservedOnly };

// d-separation of x and y given z. Sets must be disjoint, x and y nonempty.
// Terms on an MGraph must be factual (no labels). Bidirected edges are
// expanded to explicit latents internally.
SeparationVerdict d_separated(const MGraph& g, const std::vector<Term>& x,
                              const std::vector<Term>& y, const std::vector<Term>& z);

// All singleton-pair independencies with conditioning sets up to
// max_conditioning, deterministic order (conditioning size, then text).
// Scope::ObservedOnly restricts terms to Observed, Selection and Proxy nodes.
std::vector<CIStatement> enumerate_independencies(const MGraph& g, Scope scope,
                                                  int max_conditioning = 4);

// Greedy reduction of the ObservedOnly enumeration: statements derivable from
// earlier retained ones via the semi-graphoid axioms (symmetry, decomposition,
// weak union, contraction) are dropped.
std::vector<CIStatement> minimal_testable_set(const MGraph& g, int max_conditioning = 4);

namespace detail {

// Flattened DAG over integer nodes used by every separation query. Fixed SWIG
// halves are excluded before construction, so all nodes here are traversable.
struct SepView {
    std::vector<Term> terms;
    std::vector<NodeKind> kinds;
    std::vector<std::string> selection_event;  // proxy nodes: their selection id
    std::vector<std::vector<int>> par, chi;
    std::map<std::string, int> by_name;

    int add(Term t, NodeKind k, const std::string& sel_event = "");
    void add_edge(int a, int b);
    int size() const { return static_cast<int>(terms.size()); }
};

SepView make_view(const MGraph& g);
SeparationVerdict reachable(const SepView& v, const std::set<int>& x, const std::set<int>& y,
                            const std::set<int>& z);
std::vector<CIStatement> enumerate_core(const SepView& v, const std::vector<int>& eligible,
                                        int max_conditioning);
std::vector<CIStatement> minimal_core(const SepView& v, const std::vector<int>& eligible,
                                      int max_conditioning);
std::vector<int> eligible_nodes(const SepView& v, Scope scope);

}  // namespace detail

}  // namespace mswig
