#pragma once

#include <string>

#include "mswig/graph.hpp"

namespace mswig {

// Statement-per-line grammar, ';' also separates statements, '#' starts a comment:
//   node <id> (obs|miss|latent)
//   sel <id> for <missId>
//   edge <a> -> <b>
//   bi <a> <-> <b>
// Proxies are implicit: `sel S for Y` creates Y_star with parents {Y, S}.
MGraph parse_graph(const std::string& text);
MGraph parse_graph_file(const std::string& path);

// Emits the same grammar; parse(serialize(g)) == g.
std::string serialize_graph(const MGraph& g);

// Graphviz export: bidirected edges dashed with dir=both, proxies double-circled,
// latent nodes dashed.
std::string to_dot(const MGraph& g);

}  // namespace mswig
