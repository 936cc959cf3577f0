#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cdag/graph.hpp"

namespace cdag {

struct Digest {
  std::uint64_t value = 0;

  friend bool operator==(Digest, Digest) = default;
  std::string hex() const;
};

struct HashOptions {
  // Seed nodes by kind only, ignoring kernel tag, params and effort. Used to
  // compare topologies of graphs from different models.
  bool erase_labels = false;
};

/// Weisfeiler-Leman style digest: invariant under NodeId relabeling, sensitive
/// to descriptors and to argument order of compute nodes.
Digest canonical_hash(const Cdag& g, HashOptions options = {});

/// 64-bit FNV-1a, also used for params hashing.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

}  // namespace cdag
