#include "mswig/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace mswig {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Observed: return "Observed";
        case NodeKind::PartiallyMissing: return "PartiallyMissing";
        case NodeKind::Proxy: return "Proxy";
        case NodeKind::Selection: return "Selection";
        case NodeKind::Latent: return "Latent";
    }
    return "?";
}

namespace {

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

}  // namespace

void MGraph::add_node(const std::string& id, NodeKind kind) {
    if (!valid_id(id))
        throw std::invalid_argument("node id must be nonempty [A-Za-z0-9_]: '" + id + "'");
    if (index_.count(id)) throw std::invalid_argument("duplicate node id: " + id);
    if (kind == NodeKind::Proxy || kind == NodeKind::Selection)
        throw std::invalid_argument("proxy and selection nodes are created via add_selection");
    index_[id] = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{id, kind, ""});
}

void MGraph::add_selection(const std::string& sel_id, const std::string& miss_id) {
    require_node(miss_id);
    if (node(miss_id).kind != NodeKind::PartiallyMissing)
        throw std::invalid_argument("selection target must be PartiallyMissing: " + miss_id);
    if (!selection_of(miss_id).empty())
        throw std::invalid_argument(miss_id + " already has a selection node");
    if (!valid_id(sel_id))
        throw std::invalid_argument("node id must be nonempty [A-Za-z0-9_]: '" + sel_id + "'");
    if (index_.count(sel_id)) throw std::invalid_argument("duplicate node id: " + sel_id);

    std::string star = unique_id(*this, miss_id + "_star");
    index_[sel_id] = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{sel_id, NodeKind::Selection, miss_id});
    index_[star] = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{star, NodeKind::Proxy, miss_id});
    edges_.emplace_back(miss_id, star);
    edges_.emplace_back(sel_id, star);
}

void MGraph::add_edge(const std::string& from, const std::string& to) {
    require_node(from);
    require_node(to);
    if (from == to) throw std::invalid_argument("self loop on " + from);
    auto e = std::make_pair(from, to);
    if (std::find(edges_.begin(), edges_.end(), e) != edges_.end())
        throw std::invalid_argument("duplicate edge " + from + " -> " + to);
    edges_.push_back(e);
}

void MGraph::add_biedge(const std::string& a, const std::string& b) {
    require_node(a);
    require_node(b);
    if (a == b) throw std::invalid_argument("self loop on " + a);
    auto e = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (std::find(biedges_.begin(), biedges_.end(), e) != biedges_.end())
        throw std::invalid_argument("duplicate bidirected edge " + a + " <-> " + b);
    biedges_.push_back(e);
}

void MGraph::validate() const {
    topological_sort();  // throws on cycle
    for (const auto& n : nodes_) {
        if (n.kind == NodeKind::PartiallyMissing) {
            int sel = 0, proxy = 0;
            for (const auto& m : nodes_) {
                if (m.of == n.id && m.kind == NodeKind::Selection) ++sel;
                if (m.of == n.id && m.kind == NodeKind::Proxy) ++proxy;
            }
            if (sel != 1 || proxy != 1)
                throw std::invalid_argument("PartiallyMissing node " + n.id +
                                            " needs exactly one selection node and one proxy");
        }
        if (n.kind == NodeKind::Proxy) {
            auto par = parents(n.id);
            std::set<std::string> ps(par.begin(), par.end());
            std::set<std::string> want{n.of, selection_of(n.of)};
            if (ps != want)
                throw std::invalid_argument("proxy " + n.id +
                                            " must have exactly its variable and its selection node as parents");
            if (!children(n.id).empty())
                throw std::invalid_argument("proxy " + n.id + " cannot have outgoing edges");
        }
    }
    for (const auto& [a, b] : biedges_) {
        if (node(a).kind == NodeKind::Proxy || node(b).kind == NodeKind::Proxy)
            throw std::invalid_argument("bidirected edge cannot touch a proxy: " + a + " <-> " + b);
    }
}

bool MGraph::has_node(const std::string& id) const { return index_.count(id) > 0; }

const Node& MGraph::node(const std::string& id) const {
    require_node(id);
    return nodes_[index_.at(id)];
}

void MGraph::require_node(const std::string& id) const {
    if (!index_.count(id)) throw std::invalid_argument("unknown node: " + id);
}

std::vector<std::string> MGraph::parents(const std::string& id) const {
    require_node(id);
    std::vector<std::string> out;
    for (const auto& [a, b] : edges_)
        if (b == id) out.push_back(a);
    return out;
}

std::vector<std::string> MGraph::children(const std::string& id) const {
    require_node(id);
    std::vector<std::string> out;
    for (const auto& [a, b] : edges_)
        if (a == id) out.push_back(b);
    return out;
}

std::set<std::string> MGraph::ancestors(const std::set<std::string>& ids) const {
    std::set<std::string> seen;
    std::deque<std::string> queue;
    for (const auto& id : ids) {
        require_node(id);
        seen.insert(id);
        queue.push_back(id);
    }
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (const auto& p : parents(cur))
            if (seen.insert(p).second) queue.push_back(p);
    }
    return seen;
}

std::set<std::string> MGraph::descendants(const std::set<std::string>& ids) const {
    std::set<std::string> seen;
    std::deque<std::string> queue;
    for (const auto& id : ids) {
        require_node(id);
        seen.insert(id);
        queue.push_back(id);
    }
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (const auto& c : children(cur))
            if (seen.insert(c).second) queue.push_back(c);
    }
    return seen;
}

std::vector<std::string> MGraph::topological_sort() const {
    std::map<std::string, int> indeg;
    for (const auto& n : nodes_) indeg[n.id] = 0;
    for (const auto& [a, b] : edges_) {
        (void)a;
        ++indeg[b];
    }
    std::set<std::string> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.insert(id);
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto& c : children(id))
            if (--indeg[c] == 0) ready.insert(c);
    }
    if (order.size() != nodes_.size()) throw std::invalid_argument("graph has a directed cycle");
    return order;
}

MGraph MGraph::expand_latents() const {
    MGraph out = *this;
    out.biedges_.clear();
    for (const auto& [a, b] : biedges_) {
        std::string lid = unique_id(out, "L_" + a + "_" + b);
        out.add_node(lid, NodeKind::Latent);
        out.add_edge(lid, a);
        out.add_edge(lid, b);
    }
    return out;
}

std::vector<std::string> MGraph::selection_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::Selection) out.push_back(n.id);
    return out;
}

std::vector<std::string> MGraph::partially_missing_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::PartiallyMissing) out.push_back(n.id);
    return out;
}

std::string MGraph::proxy_of(const std::string& miss_id) const {
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::Proxy && n.of == miss_id) return n.id;
    return "";
}

std::string MGraph::selection_of(const std::string& miss_id) const {
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::Selection && n.of == miss_id) return n.id;
    return "";
}

bool MGraph::operator==(const MGraph& other) const {
    auto key = [](const MGraph& g) {
        std::set<std::pair<std::string, std::string>> es(g.edges_.begin(), g.edges_.end());
        std::set<std::pair<std::string, std::string>> bs(g.biedges_.begin(), g.biedges_.end());
        std::set<std::tuple<std::string, int, std::string>> ns;
        for (const auto& n : g.nodes_) ns.insert({n.id, static_cast<int>(n.kind), n.of});
        return std::make_tuple(ns, es, bs);
    };
    return key(*this) == key(other);
}

std::string unique_id(const MGraph& g, const std::string& base) {
    if (!g.has_node(base)) return base;
    for (int i = 2;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (!g.has_node(cand)) return cand;
    }
}

}  // namespace mswig
