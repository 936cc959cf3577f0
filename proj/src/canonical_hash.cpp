#include "cdag/canonical_hash.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

namespace cdag {

namespace {

constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t v) noexcept { return mix(seed ^ mix(v)); }

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Digest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

Digest canonical_hash(const Cdag& g, HashOptions options) {
  const auto ids = g.nodes();
  const std::size_t slots = g.next_id().value;

  std::vector<std::uint64_t> seed_of_descriptor(g.descriptor_count());
  for (DescriptorId d = 0; d < g.descriptor_count(); ++d) {
    const auto& t = g.descriptor(d);
    std::uint64_t h = combine(0x5eed, static_cast<std::uint64_t>(t.kind));
    if (!options.erase_labels) {
      h = combine(h, fnv1a(t.kernel));
      h = combine(h, fnv1a(t.params.dump()));
      h = combine(h, t.effort);
    }
    seed_of_descriptor[d] = h;
  }

  std::vector<std::uint64_t> label(slots, 0), next(slots, 0);
  for (NodeId id : ids) label[id.value] = seed_of_descriptor[g.descriptor_id(id)];

  auto class_count = [&](const std::vector<std::uint64_t>& l) {
    std::unordered_set<std::uint64_t> seen;
    for (NodeId id : ids) seen.insert(l[id.value]);
    return seen.size();
  };

  std::size_t classes = class_count(label);
  std::vector<std::uint64_t> child_labels;
  for (std::size_t round = 0; round < ids.size(); ++round) {
    for (NodeId id : ids) {
      std::uint64_t h = combine(label[id.value], 0xa11);
      for (NodeId p : g.parents(id)) h = combine(h, label[p.value]);
      child_labels.clear();
      for (NodeId c : g.children(id)) child_labels.push_back(label[c.value]);
      std::sort(child_labels.begin(), child_labels.end());
      h = combine(h, 0xc41d);
      for (std::uint64_t c : child_labels) h = combine(h, c);
      next[id.value] = h;
    }
    label.swap(next);
    std::size_t refined = class_count(label);
    if (refined == classes) break;
    classes = refined;
  }

  std::vector<std::uint64_t> all;
  all.reserve(ids.size());
  for (NodeId id : ids) all.push_back(label[id.value]);
  std::sort(all.begin(), all.end());
  std::uint64_t h = combine(ids.size(), g.edge_count());
  for (std::uint64_t l : all) h = combine(h, l);
  return Digest{h};
}

}  // namespace cdag
