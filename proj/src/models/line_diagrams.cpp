#include "cdag/models/line_diagrams.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "cdag/error.hpp"

namespace cdag::models {

std::vector<std::size_t> boson_indices(std::size_t n) {
  std::vector<std::size_t> b;
  for (std::size_t i = 1; i <= n; ++i) b.push_back(i);
  b.push_back(n + 2);
  return b;
}

std::uint64_t sum_effort(std::size_t count) { return 2 * (count - 1) + 3; }

namespace {

class Builder {
 public:
  Builder(const LineKernels& k, std::size_t n, ReuseMode reuse) : k_(k), n_(n), reuse_(reuse) {}

  Cdag build() {
    const std::size_t ext = external_count(n_);
    if (k_.u_params.size() != ext) throw Error(ErrorCode::InvalidProcess, "one U parameter set per external required");
    for (std::size_t i = 0; i < ext; ++i) {
      auto p = g_.add_node(data_task(k_.prefix + ".momentum", k_.momentum_bytes, {{kInputIndexKey, i}}));
      base_.push_back(emit(k_.prefix + ".U", k_.u_effort, k_.u_params[i], {p}, "state", k_.state_bytes));
    }

    std::uint64_t all = 0;
    for (std::size_t i = 0; i < ext; ++i) all |= std::uint64_t{1} << i;
    Json s2p = k_.s2_params;
    s2p["all"] = all;

    auto order = boson_indices(n_);
    const std::size_t a = left_count(n_);
    std::vector<NodeId> diagrams;
    do {
      std::vector<std::size_t> left(order.begin(), order.begin() + a);
      std::vector<std::size_t> right(order.rbegin(), order.rend() - a);
      NodeId l = line(0, left);
      NodeId r = line(1, right);
      diagrams.push_back(emit(k_.prefix + ".S2", k_.s2_effort, s2p, {l, r}, "scalar", k_.scalar_bytes));
    } while (std::next_permutation(order.begin(), order.end()));

    Json sp = k_.sum_params;
    sp["count"] = diagrams.size();
    emit(k_.prefix + ".Sum", sum_effort(diagrams.size()), sp, diagrams, "result", k_.output_bytes);
    return std::move(g_);
  }

 private:
  NodeId emit(const std::string& kernel, std::uint64_t effort, const Json& params, const std::vector<NodeId>& args,
              const char* out_kind, std::uint64_t out_bytes) {
    auto c = g_.add_node(compute_task(kernel, effort, params));
    for (NodeId a : args) g_.add_edge(a, c);
    auto d = g_.add_node(data_task(k_.prefix + "." + out_kind, out_bytes));
    g_.add_edge(c, d);
    return d;
  }

  // Partial line on one side, bosons in absorption order.
  NodeId line(int side, const std::vector<std::size_t>& bosons) {
    NodeId state = base_[side == 0 ? 0 : n_ + 1];
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < bosons.size(); ++i) {
      if (i > 0) state = memo(propagated_, side, seq, [&] {
        return emit(k_.prefix + ".S1", k_.s1_effort, k_.s1_params, {state}, "state", k_.state_bytes);
      });
      seq.push_back(bosons[i]);
      state = memo(vertices_, side, seq, [&] {
        return emit(k_.prefix + ".V", k_.v_effort, k_.v_params, {base_[bosons[i]], state}, "state", k_.state_bytes);
      });
    }
    return state;
  }

  using Key = std::pair<int, std::vector<std::size_t>>;

  template <typename F>
  NodeId memo(std::map<Key, NodeId>& table, int side, const std::vector<std::size_t>& seq, F&& make) {
    if (reuse_ == ReuseMode::BaseStates) return make();
    Key key{side, seq};
    if (auto it = table.find(key); it != table.end()) return it->second;
    NodeId id = make();
    table.emplace(std::move(key), id);
    return id;
  }

  const LineKernels& k_;
  std::size_t n_;
  ReuseMode reuse_;
  Cdag g_;
  std::vector<NodeId> base_;
  std::map<Key, NodeId> vertices_, propagated_;
};

}  // namespace

Cdag generate_line_dag(const LineKernels& k, std::size_t n, ReuseMode reuse) {
  if (n < 1) throw Error(ErrorCode::InvalidProcess, "at least one incoming boson required");
  if (external_count(n) > 64) throw Error(ErrorCode::InvalidProcess, "too many externals");
  return Builder(k, n, reuse).build();
}

}  // namespace cdag::models
