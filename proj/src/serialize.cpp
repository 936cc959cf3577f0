#include "cdag/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cdag/error.hpp"

namespace cdag {

nlohmann::ordered_json graph_to_json_value(const Cdag& g) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  g.for_each_node([&](NodeId id) {
    const auto& t = g.task(id);
    nlohmann::ordered_json n;
    n["id"] = id.value;
    n["kind"] = to_string(t.kind);
    n["kernel"] = t.kernel;
    n["params"] = t.params;
    n["effort"] = t.effort;
    nodes.push_back(std::move(n));
  });
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [from, to] : g.edges()) edges.push_back({from.value, to.value});
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

std::string graph_to_json(const Cdag& g, int indent) { return graph_to_json_value(g).dump(indent); }

Cdag graph_from_json_value(const Json& j) {
  try {
    Cdag g;
    std::vector<std::pair<std::uint64_t, TaskDescriptor>> nodes;
    for (const auto& n : j.at("nodes")) {
      TaskDescriptor t;
      const auto kind = n.at("kind").get<std::string>();
      if (kind == "data") {
        t.kind = TaskKind::Data;
      } else if (kind == "compute") {
        t.kind = TaskKind::Compute;
      } else {
        throw Error(ErrorCode::Parse, "unknown node kind '" + kind + "'");
      }
      t.kernel = n.at("kernel").get<std::string>();
      t.params = n.value("params", Json::object());
      t.effort = n.at("effort").get<std::uint64_t>();
      nodes.emplace_back(n.at("id").get<std::uint64_t>(), std::move(t));
    }
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [id, t] : nodes) g.add_node_with_id(NodeId{id}, t);
    for (const auto& e : j.at("edges")) {
      g.add_edge(NodeId{e.at(0).get<std::uint64_t>()}, NodeId{e.at(1).get<std::uint64_t>()});
    }
    return g;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

Cdag graph_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return graph_from_json_value(j);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string graph_to_dot(const Cdag& g) {
  std::ostringstream os;
  os << "digraph cdag {\n";
  g.for_each_node([&](NodeId id) {
    const auto& t = g.task(id);
    os << "  n" << id.value << " [label=\"" << dot_escape(t.kernel) << "\\n#" << id.value << "\"";
    if (t.kind == TaskKind::Data) {
      os << ", shape=box, color=blue";
    } else {
      os << ", shape=ellipse, color=red";
    }
    os << "];\n";
  });
  for (auto [from, to] : g.edges()) os << "  n" << from.value << " -> n" << to.value << ";\n";
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace cdag
