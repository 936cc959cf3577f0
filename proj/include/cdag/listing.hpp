#pragma once

#include <string>

#include "cdag/graph.hpp"
#include "cdag/schedule.hpp"

namespace cdag {

/// Pseudo-code listing, one assignment per node in schedule order with input
/// bindings first and the return last. Names are derived from kernel tags and
/// per-tag counters, so the text is stable for a fixed graph and schedule.
std::string emit_listing(const Cdag& g, const Schedule& s);

}  // namespace cdag
