#include "cdag/bench/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "cdag/error.hpp"
#include "cdag/graph_ops.hpp"
#include "cdag/models/abc.hpp"
#include "cdag/models/registry.hpp"
#include "cdag/models/example.hpp"
#include "cdag/models/strassen.hpp"
#include "cdag/plan.hpp"
#include "cdag/qed/compton.hpp"

namespace cdag::bench {

double speedup(const BreakEvenInput& in) { return in.t_e * in.n / (in.t_e_opt * in.n + in.t_o); }

double break_even_n(const BreakEvenInput& in) {
  if (!(in.t_e > in.t_e_opt)) {
    throw Error(ErrorCode::NoBreakEven, "optimized time per sample is not smaller than the unoptimized one");
  }
  return in.t_o / (in.t_e - in.t_e_opt);
}

Cdag build_model(const ModelRequest& req) {
  const auto reuse = req.subdiagram_reuse ? models::ReuseMode::Subdiagrams : models::ReuseMode::BaseStates;
  if (req.model == "qed") {
    qed::ComptonProcess p;
    p.n = req.n;
    p.reuse = reuse;
    p.output = req.amplitude_output ? qed::SumOutput::Amplitude : qed::SumOutput::Squared;
    return qed::generate_compton_dag(p);
  }
  if (req.model == "abc") {
    abc::AbcProcess p;
    p.n = req.n;
    p.reuse = reuse;
    p.amplitude_output = req.amplitude_output;
    return abc::generate_ab_dag(p);
  }
  if (req.model == "strassen") return strassen::generate_strassen_dag({req.n, req.cutoff, req.same_inputs});
  if (req.model == "example") return models::example_graph();
  throw Error(ErrorCode::Usage, "unknown model '" + req.model + "' (expected qed, abc, strassen or example)");
}

std::vector<InputRecord> sample_inputs(const ModelRequest& req, std::size_t count, std::uint64_t seed) {
  std::vector<InputRecord> out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = rng();
    if (req.model == "qed") {
      qed::ComptonProcess p;
      p.n = req.n;
      out.push_back(models::to_input_record(qed::sample_phase_space(p, s)));
    } else if (req.model == "abc") {
      abc::AbcProcess p;
      p.n = req.n;
      out.push_back(models::to_input_record(abc::sample_abc_phase_space(p, s)));
    } else if (req.model == "strassen") {
      std::mt19937_64 r(s);
      auto rnd = [&] { return Matrix(Matrix::NullaryExpr(req.n, req.n, [&] { return u(r); })); };
      InputRecord rec{rnd()};
      if (!req.same_inputs) rec.push_back(rnd());
      out.push_back(std::move(rec));
    } else if (req.model == "example") {
      out.push_back({u(rng), u(rng)});
    } else {
      throw Error(ErrorCode::Usage, "unknown model '" + req.model + "'");
    }
  }
  return out;
}

BenchReport bench_pipeline(const ModelRequest& req, std::uint64_t seed, const BenchOptions& opts) {
  using Clock = std::chrono::steady_clock;
  auto seconds = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
  BenchReport r;
  r.request = req;
  r.seed = seed;
  r.workers = opts.workers;

  auto t0 = Clock::now();
  Cdag g = build_model(req);
  auto t1 = Clock::now();
  FixpointResult reduced = reduce_to_fixpoint(g, seed);
  auto t2 = Clock::now();
  const auto& kernels = models::default_registry();
  BoundPlan plan(lower(g, schedule(g, Machine::single())), kernels);
  auto t3 = Clock::now();
  BoundPlan plan_opt(lower(reduced.graph, schedule(reduced.graph, Machine::single())), kernels);

  r.t_gen = seconds(t0, t1);
  r.t_opt = seconds(t1, t2);
  r.t_lower = seconds(t2, t3);
  r.nodes = g.node_count();
  r.nodes_reduced = reduced.graph.node_count();
  r.before = graph_metrics(g);
  r.after = graph_metrics(reduced.graph);
  r.kernels_before = per_kernel_counts(g);
  r.kernels_after = per_kernel_counts(reduced.graph);

  const auto inputs = sample_inputs(req, std::max<std::size_t>(1, opts.samples), seed);
  auto timed = [&](const BoundPlan& p) {
    BoundPlan::Arena arena;
    double sink = 0.0;
    const double t = median_time(
        [&] {
          for (const auto& in : inputs) sink += flatten(p.run(in, arena)).front();
        },
        opts.repetitions, opts.warmup);
    volatile double keep = sink;
    (void)keep;
    return t / static_cast<double>(inputs.size());
  };
  r.t_e = timed(plan);
  r.t_e_opt = timed(plan_opt);
  r.flops_speedup = r.after.compute_effort
                        ? static_cast<double>(r.before.compute_effort) / static_cast<double>(r.after.compute_effort)
                        : 0.0;
  r.measured_speedup = r.t_e / r.t_e_opt;
  for (int k = 0; k <= 8; ++k) {
    const double n = std::pow(10.0, k);
    r.curve.push_back({n, speedup({r.t_e, r.t_e_opt, r.t_opt, n})});
  }
  return r;
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << std::setprecision(9) << v;
  return s.str();
}

}  // namespace

std::string export_csv(const std::vector<BenchReport>& reports) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : reports) {
    out << r.request.n << ',' << r.nodes << ',' << r.before.compute_effort << ',' << r.before.data_transfer << ','
        << fmt(r.before.compute_intensity) << ',' << fmt(r.t_gen) << ',' << fmt(r.t_opt) << ',' << fmt(r.t_lower)
        << ',' << fmt(r.t_e) << ',' << fmt(r.t_e_opt) << ',' << fmt(r.flops_speedup) << ','
        << fmt(r.measured_speedup) << "\n";
  }
  return out.str();
}

nlohmann::ordered_json report_to_json(const BenchReport& r) {
  auto metrics = [](const GraphMetrics& m) {
    nlohmann::ordered_json j;
    j["C"] = m.compute_effort;
    j["D"] = m.data_transfer;
    if (std::isfinite(m.compute_intensity)) {
      j["I"] = m.compute_intensity;
    } else {
      j["I"] = "inf";
    }
    return j;
  };
  nlohmann::ordered_json j;
  j["model"] = r.request.model;
  j["n"] = r.request.n;
  if (r.request.model == "strassen") j["cutoff"] = r.request.cutoff;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["nodes"] = r.nodes;
  j["nodes_reduced"] = r.nodes_reduced;
  j["before"] = metrics(r.before);
  j["after"] = metrics(r.after);
  j["kernels_before"] = r.kernels_before;
  j["kernels_after"] = r.kernels_after;
  j["t_gen"] = r.t_gen;
  j["t_opt"] = r.t_opt;
  j["t_lower"] = r.t_lower;
  j["t_e"] = r.t_e;
  j["t_e_opt"] = r.t_e_opt;
  j["flops_speedup"] = r.flops_speedup;
  j["measured_speedup"] = r.measured_speedup;
  if (r.t_e > r.t_e_opt) j["break_even_n"] = break_even_n({r.t_e, r.t_e_opt, r.t_opt, 1.0});
  nlohmann::ordered_json curve = nlohmann::ordered_json::array();
  for (const auto& p : r.curve) curve.push_back({{"N", p.n}, {"S", p.speedup}});
  j["speedup_curve"] = std::move(curve);
  return j;
}

}  // namespace cdag::bench
