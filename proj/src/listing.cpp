#include "cdag/listing.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cdag/error.hpp"

namespace cdag {

namespace {

std::string short_name(const std::string& tag) {
  auto dot = tag.rfind('.');
  std::string s = dot == std::string::npos ? tag : tag.substr(dot + 1);
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return s.empty() ? std::string("t") : s;
}

}  // namespace

std::string emit_listing(const Cdag& g, const Schedule& s) {
  check_schedule(g, s);
  auto exits = g.exit_nodes();
  if (exits.size() != 1) throw Error(ErrorCode::ValidationFailed, "graph must have exactly one exit node");

  std::unordered_map<std::uint64_t, std::string> name;
  std::map<std::string, std::size_t> counter;
  std::ostringstream out;

  // Entries may appear anywhere in a valid schedule; the listing hoists them.
  std::vector<NodeId> body;
  for (const auto& step : s.steps) {
    const auto& t = g.task(step.node);
    if (t.kind == TaskKind::Data && g.parents(step.node).empty()) {
      auto it = t.params.find(kInputIndexKey);
      std::string idx = it != t.params.end() ? it->dump() : "?";
      name[step.node.value] = "in_" + idx;
      out << name[step.node.value] << " = input[" << idx << "]\n";
    } else {
      body.push_back(step.node);
    }
  }
  for (NodeId n : body) {
    const auto& t = g.task(n);
    auto ps = g.parents(n);
    if (t.kind == TaskKind::Data) {
      const std::string& from = name.at(ps.front().value);
      name[n.value] = from + "_p";
      out << name[n.value] << " = " << from << "\n";
      continue;
    }
    const std::string base = short_name(t.kernel);
    name[n.value] = base + "_" + std::to_string(++counter[base]);
    out << name[n.value] << " = " << t.kernel;
    if (!t.params.empty()) out << t.params.dump();
    out << "(";
    for (std::size_t i = 0; i < ps.size(); ++i) out << (i ? ", " : "") << name.at(ps[i].value);
    out << ")\n";
  }
  out << "return " << name.at(exits.front().value) << "\n";
  return out.str();
}

}  // namespace cdag
