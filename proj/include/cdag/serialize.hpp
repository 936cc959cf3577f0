#pragma once

#include <string>

#include "cdag/graph.hpp"

namespace cdag {

/// {"nodes":[{"id","kind","kernel","params","effort"}...],"edges":[[from,to],...]}
/// Edges are listed per target in argument order, so reading them back in file
/// order restores each compute node's argument order.
std::string graph_to_json(const Cdag& g, int indent = -1);
Cdag graph_from_json(const std::string& text);

nlohmann::ordered_json graph_to_json_value(const Cdag& g);
Cdag graph_from_json_value(const Json& j);

/// Data nodes as blue boxes, compute nodes as red ellipses.
std::string graph_to_dot(const Cdag& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace cdag
