#include "mswig/swig.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mswig {

SwigGraph split(const MGraph& g, const Intervention& iv) {
    g.validate();
    if (iv.assignments.empty()) throw std::invalid_argument("intervention must be nonempty");
    std::map<std::string, std::string> value_of;
    for (const auto& [id, val] : iv.assignments) {
        const auto& n = g.node(id);
        if (n.kind == NodeKind::Proxy || n.kind == NodeKind::Latent)
            throw std::invalid_argument("cannot intervene on " + std::string(to_string(n.kind)) +
                                        " node " + id);
        if (val.empty()) throw std::invalid_argument("empty value symbol for " + id);
        if (!value_of.emplace(id, val).second)
            throw std::invalid_argument("duplicate intervention target: " + id);
    }

    SwigGraph out;
    out.source_ = g;
    out.intervention_ = iv;

    MGraph expanded = g.expand_latents();
    std::map<std::string, int> random_idx, fixed_idx;
    for (const auto& n : expanded.nodes()) {
        random_idx[n.id] = static_cast<int>(out.nodes_.size());
        out.nodes_.push_back(SwigNode{n.id, n.kind, false, "", {}, n.of});
    }
    for (const auto& [id, val] : iv.assignments) {
        fixed_idx[id] = static_cast<int>(out.nodes_.size());
        out.nodes_.push_back(SwigNode{id, expanded.node(id).kind, true, val, {}, ""});
    }
    for (const auto& [a, b] : expanded.edges()) {
        int from = value_of.count(a) ? fixed_idx[a] : random_idx[a];
        out.edges_.emplace_back(from, random_idx[b]);
    }

    // counterfactual labels flow from fixed halves; label order follows the
    // source topological order of the targets
    std::vector<std::string> topo = expanded.topological_sort();
    for (const auto& t : topo) {
        if (!value_of.count(t)) continue;
        std::deque<int> q{fixed_idx[t]};
        std::vector<char> seen(out.nodes_.size(), 0);
        seen[fixed_idx[t]] = 1;
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (const auto& [a, b] : out.edges_) {
                if (a != cur || seen[b]) continue;
                seen[b] = 1;
                out.nodes_[b].labels.push_back(value_of[t]);
                q.push_back(b);
            }
        }
    }
    return out;
}

int SwigGraph::index_of(const std::string& base) const {
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (!nodes_[i].fixed && nodes_[i].base == base) return static_cast<int>(i);
    return -1;
}

Term SwigGraph::term(int idx) const {
    const auto& n = nodes_.at(idx);
    if (n.fixed) throw std::invalid_argument("term refers to a fixed node: " + n.value);
    Term t{n.base, n.labels};
    if (n.kind == NodeKind::Proxy && !n.labels.empty()) {
        // nested display: proxy(labeled variable, labeled selection)
        std::string inner;
        int vi = index_of(n.of);
        int si = index_of(source_.selection_of(n.of));
        for (int pi : {vi, si}) {
            if (pi < 0 || nodes_[pi].labels.empty()) continue;
            if (!inner.empty()) inner += ",";
            inner += term(pi).text();
        }
        if (!inner.empty()) t.display = n.base + "(" + inner + ")";
    }
    return t;
}

std::string SwigGraph::term_text(int idx) const {
    const auto& n = nodes_.at(idx);
    if (n.fixed) return n.value;
    return term(idx).text();
}

std::string SwigGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph swig {\n";
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        os << "  n" << i << " [label=\"" << term_text(static_cast<int>(i)) << "\"";
        if (n.fixed) os << ", shape=square";
        if (n.kind == NodeKind::Proxy) os << ", shape=doublecircle";
        if (n.kind == NodeKind::Latent) os << ", style=dashed";
        os << "];\n";
    }
    for (const auto& [a, b] : edges_) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

namespace detail {

SepView make_view(const SwigGraph& g) {
    SepView v;
    std::map<int, int> to_view;
    const auto& ns = g.nodes();
    for (size_t i = 0; i < ns.size(); ++i) {
        if (ns[i].fixed) continue;  // constants block every trail
        std::string ev;
        if (ns[i].kind == NodeKind::Proxy) ev = g.source().selection_of(ns[i].of);
        to_view[static_cast<int>(i)] = v.add(g.term(static_cast<int>(i)), ns[i].kind, ev);
    }
    for (const auto& [a, b] : g.edges()) {
        auto ia = to_view.find(a), ib = to_view.find(b);
        if (ia == to_view.end() || ib == to_view.end()) continue;
        v.add_edge(ia->second, ib->second);
    }
    return v;
}

}  // namespace detail

namespace {

std::set<int> resolve_swig(const detail::SepView& v, const SwigGraph& g,
                           const std::vector<Term>& ts, const char* role) {
    std::set<int> out;
    for (const auto& t : ts) {
        auto it = v.by_name.find(t.name);
        if (it == v.by_name.end()) {
            for (const auto& n : g.nodes())
                if (n.fixed && n.value == t.name)
                    throw std::invalid_argument("term refers to a fixed node: " + t.name);
            throw std::invalid_argument(std::string(role) + " term refers to unknown node: " + t.name);
        }
        if (!t.labels.empty() && t.labels != v.terms[it->second].labels)
            throw std::invalid_argument("term " + t.text() + " does not match intervention labels " +
                                        v.terms[it->second].text());
        if (!out.insert(it->second).second)
            throw std::invalid_argument("duplicate term in " + std::string(role) + ": " + t.name);
    }
    return out;
}

}  // namespace

SeparationVerdict d_separated(const SwigGraph& g, const std::vector<Term>& x,
                              const std::vector<Term>& y, const std::vector<Term>& z) {
    auto v = detail::make_view(g);
    auto xs = resolve_swig(v, g, x, "x");
    auto ys = resolve_swig(v, g, y, "y");
    auto zs = resolve_swig(v, g, z, "z");
    if (xs.empty() || ys.empty()) throw std::invalid_argument("x and y must be nonempty");
    for (int i : xs)
        if (ys.count(i) || zs.count(i)) throw std::invalid_argument("query sets must be disjoint");
    for (int i : ys)
        if (zs.count(i)) throw std::invalid_argument("query sets must be disjoint");
    return detail::reachable(v, xs, ys, zs);
}

std::vector<CIStatement> counterfactual_independencies(const SwigGraph& g, Scope scope,
                                                       int max_conditioning) {
    auto v = detail::make_view(g);
    std::vector<int> eligible;
    for (int i : detail::eligible_nodes(v, scope))
        if (g.source().has_node(v.terms[i].name)) eligible.push_back(i);
    return detail::enumerate_core(v, eligible, max_conditioning);
}

}  // namespace mswig
