#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mswig {

enum class NodeKind { Observed, PartiallyMissing, Proxy, Selection, Latent };

const char* to_string(NodeKind kind);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Observed;
    // For Selection and Proxy nodes: the PartiallyMissing variable they attend.
    std::string of;
};

// Causal DAG with missingness machinery. Each PartiallyMissing node v owns
// exactly one Selection indicator and one auto-generated Proxy `<v>_star`
// whose parents are exactly {v, selection(v)}. Bidirected edges are shorthand
// for a latent common parent and are expanded before separation queries.
class MGraph {
public:
    void add_node(const std::string& id, NodeKind kind);
    // Adds the selection indicator for a PartiallyMissing node and its proxy.
    void add_selection(const std::string& sel_id, const std::string& miss_id);
    void add_edge(const std::string& from, const std::string& to);
    void add_biedge(const std::string& a, const std::string& b);

    // Throws std::invalid_argument naming the violated rule.
    void validate() const;

    bool has_node(const std::string& id) const;
    const Node& node(const std::string& id) const;
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
    const std::vector<std::pair<std::string, std::string>>& biedges() const { return biedges_; }

    std::vector<std::string> parents(const std::string& id) const;
    std::vector<std::string> children(const std::string& id) const;

    // Both include the seed set itself.
    std::set<std::string> ancestors(const std::set<std::string>& ids) const;
    std::set<std::string> descendants(const std::set<std::string>& ids) const;

    // Deterministic: smallest id first among ready nodes. Throws on cycle.
    std::vector<std::string> topological_sort() const;

    // Replaces each bidirected edge by a fresh Latent parent of both endpoints.
    MGraph expand_latents() const;

    std::vector<std::string> selection_nodes() const;
    std::vector<std::string> partially_missing_nodes() const;
    // Id of the proxy / selection node attending a PartiallyMissing node.
    std::string proxy_of(const std::string& miss_id) const;
    std::string selection_of(const std::string& miss_id) const;

    bool operator==(const MGraph& other) const;

private:
    std::vector<Node> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::vector<std::pair<std::string, std::string>> biedges_;
    std::map<std::string, int> index_;

    void require_node(const std::string& id) const;
};

std::string unique_id(const MGraph& g, const std::string& base);

}  // namespace mswig
