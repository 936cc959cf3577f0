#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdag/graph.hpp"
#include "cdag/metrics.hpp"
#include "cdag/value.hpp"

namespace cdag::bench {

struct BreakEvenInput {
  double t_e = 0.0;      // seconds per sample, unoptimized
  double t_e_opt = 0.0;  // seconds per sample, optimized
  double t_o = 0.0;      // seconds spent optimizing
  double n = 1.0;        // sample count
};

/// t_e N / (t_e_opt N + t_o)
double speedup(const BreakEvenInput& in);
/// Sample count where the speedup reaches 1. Throws NoBreakEven if t_e <= t_e_opt.
double break_even_n(const BreakEvenInput& in);

/// Which bundled model to build and how.
struct ModelRequest {
  std::string model = "qed";  // qed | abc | strassen | example
  std::size_t n = 1;          // photons / B count / matrix dimension
  std::size_t cutoff = 1;     // strassen only
  bool same_inputs = false;   // strassen only
  bool subdiagram_reuse = false;
  bool amplitude_output = false;
};

Cdag build_model(const ModelRequest& req);
/// Random valid input records, deterministic in `seed`.
std::vector<InputRecord> sample_inputs(const ModelRequest& req, std::size_t count, std::uint64_t seed);

/// Median of `repetitions` timed runs after `warmup` untimed ones, in seconds.
template <typename F>
double median_time(F&& fn, std::size_t repetitions = 31, std::size_t warmup = 3);

struct BenchOptions {
  std::size_t samples = 64;  // inputs per timed repetition
  std::size_t repetitions = 31;
  std::size_t warmup = 3;
  std::size_t workers = 1;  // recorded only; timing is single-threaded
};

struct CurvePoint {
  double n;
  double speedup;
};

struct BenchReport {
  ModelRequest request;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t nodes = 0, nodes_reduced = 0;
  GraphMetrics before, after;
  std::map<std::string, std::size_t> kernels_before, kernels_after;
  double t_gen = 0, t_opt = 0, t_lower = 0, t_e = 0, t_e_opt = 0;
  double flops_speedup = 0, measured_speedup = 0;
  std::vector<CurvePoint> curve;  // N = 10^0 .. 10^8
};

BenchReport bench_pipeline(const ModelRequest& req, std::uint64_t seed, const BenchOptions& opts = {});

inline constexpr const char* kCsvHeader =
    "n,nodes,C,D,I,t_gen,t_opt,t_lower,t_e,t_e_opt,flops_speedup,measured_speedup";

/// One row per report under kCsvHeader; C, D, I are those of the unreduced graph.
std::string export_csv(const std::vector<BenchReport>& reports);
nlohmann::ordered_json report_to_json(const BenchReport& r);

}  // namespace cdag::bench

#include "cdag/bench/timing.ipp"
