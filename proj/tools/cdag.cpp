// cdag: generate, inspect, optimize and run computable DAGs from the command line.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cdag/bench/bench.hpp"
#include "cdag/error.hpp"
#include "cdag/graph_ops.hpp"
#include "cdag/listing.hpp"
#include "cdag/metrics.hpp"
#include "cdag/models/abc.hpp"
#include "cdag/models/registry.hpp"
#include "cdag/plan.hpp"
#include "cdag/qed/compton.hpp"
#include "cdag/serialize.hpp"

using namespace cdag;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumeric = 3, kUsage = 4 };

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CDAG_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, std::string("CDAG_SEED is not an integer: ") + s);
    }
  }
  return 0;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

Cdag load_graph(const std::string& path) {
  Cdag g = graph_from_json(path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(path));
  require_valid(g);
  return g;
}

// A file of 4-vectors is a single momenta record; anything else is an array of records.
std::vector<InputRecord> load_inputs(const std::string& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw Error(ErrorCode::Parse, path + ": expected a JSON array");
  const bool momenta = !j.empty() && std::all_of(j.begin(), j.end(), [](const Json& e) {
    return e.is_array() && e.size() == 4 && std::all_of(e.begin(), e.end(), [](const Json& x) { return x.is_number(); });
  });
  if (momenta) return {input_record_from_json(j)};
  std::vector<InputRecord> out;
  for (const auto& rec : j) out.push_back(input_record_from_json(rec));
  return out;
}

struct ModelFlags {
  bench::ModelRequest req;
  std::string process;
  std::string reuse = "base";
  std::string output = "squared";
  std::string spin_in = "up", spin_out = "up";
  std::string pol;

  void add_to(CLI::App* app) {
    app->add_option("--model", req.model, "qed, abc, strassen or example")
        ->check(CLI::IsMember({"qed", "abc", "strassen", "example"}));
    app->add_option("--process", process, "'e- Ngamma -> e- gamma' or 'A B^n -> A B'");
    app->add_option("-n,--n", req.n, "photon / B count, or matrix dimension for strassen");
    app->add_option("--cutoff", req.cutoff, "strassen recursion cutoff");
    app->add_flag("--same-inputs", req.same_inputs, "strassen: multiply A by itself");
    app->add_option("--reuse", reuse, "base (reduction finds shared subdiagrams) or subdiagrams (memoized)")
        ->check(CLI::IsMember({"base", "subdiagrams"}));
    app->add_option("--output", output, "exit value: squared |M|^2 or complex amplitude")
        ->check(CLI::IsMember({"squared", "amplitude"}));
    app->add_option("--spin-in", spin_in, "qed incoming electron spin")->check(CLI::IsMember({"up", "down"}));
    app->add_option("--spin-out", spin_out, "qed outgoing electron spin")->check(CLI::IsMember({"up", "down"}));
    app->add_option("--pol", pol, "qed photon polarizations, e.g. k1=x,k2=y (photon n+1 is outgoing)");
  }

  void resolve() {
    if (!process.empty()) {
      if (req.model == "qed") req.n = qed::parse_compton_process(process);
      else if (req.model == "abc") req.n = abc::parse_abc_process(process);
      else throw Error(ErrorCode::Usage, "--process applies to qed and abc only");
    }
    req.subdiagram_reuse = reuse == "subdiagrams";
    req.amplitude_output = output == "amplitude";
  }

  Cdag build() {
    resolve();
    if (req.model != "qed") return bench::build_model(req);
    qed::ComptonProcess p;
    p.n = req.n;
    p.spin_in_up = spin_in == "up";
    p.spin_out_up = spin_out == "up";
    p.polarizations = qed::parse_polarizations(pol, req.n + 1);
    p.reuse = req.subdiagram_reuse ? models::ReuseMode::Subdiagrams : models::ReuseMode::BaseStates;
    p.output = req.amplitude_output ? qed::SumOutput::Amplitude : qed::SumOutput::Squared;
    return qed::generate_compton_dag(p);
  }
};

int exit_code(ErrorCode c) {
  if (c == ErrorCode::Usage) return kUsage;
  if (is_numeric(c)) return kNumeric;
  return kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, optimize, schedule and execute computable DAGs"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed (default: $CDAG_SEED or 0)")->each([&](const std::string&) {
      seed_given = true;
    });
  };

  std::string graph_path, out_path;

  ModelFlags gen_flags;
  int indent = -1;
  auto* gen = app.add_subcommand("generate", "write a model graph as JSON");
  gen_flags.add_to(gen);
  gen->add_option("-o,--out", out_path, "output file (default stdout)");
  gen->add_option("--indent", indent, "JSON indentation");

  auto* stats = app.add_subcommand("stats", "node counts and C, D, I of a graph");
  stats->add_option("graph", graph_path, "graph JSON")->required();

  std::string log_path;
  auto* opt = app.add_subcommand("optimize", "reduce a graph to its fixpoint");
  opt->add_option("graph", graph_path, "graph JSON")->required();
  opt->add_option("-o,--out", out_path, "reduced graph output (default stdout)");
  opt->add_option("--log", log_path, "write the applied operations as JSON lines");
  add_seed(opt);

  std::size_t devices = 1;
  double link_rate = 1e9;
  Device proto{"dev"};
  bool dump_plan = false;
  auto* sch = app.add_subcommand("schedule", "static schedule and runtime estimate");
  sch->add_option("graph", graph_path, "graph JSON")->required();
  sch->add_option("--devices", devices, "number of identical devices")->check(CLI::PositiveNumber);
  sch->add_option("--flops-rate", proto.flops_rate, "device FLOP/s")->check(CLI::PositiveNumber);
  sch->add_option("--bandwidth", proto.mem_bandwidth, "device memory bandwidth, byte/s")->check(CLI::PositiveNumber);
  sch->add_option("--link-rate", link_rate, "byte/s between devices")->check(CLI::PositiveNumber);
  sch->add_flag("--plan", dump_plan, "also dump the lowered execution plan");
  sch->add_option("-o,--out", out_path, "output file (default stdout)");

  std::string inputs_path;
  std::size_t random_count = 0, workers = 1;
  ModelFlags run_flags;
  auto* run = app.add_subcommand("run", "execute a graph on input records");
  run->add_option("graph", graph_path, "graph JSON")->required();
  run->add_option("--inputs", inputs_path, "JSON array of input records, or one momenta array");
  run->add_option("--random", random_count, "sample this many random inputs for --model instead");
  run->add_option("--workers", workers, "batch worker threads")->check(CLI::PositiveNumber);
  run->add_option("-o,--out", out_path, "output file (default stdout)");
  run_flags.add_to(run);
  add_seed(run);

  auto* code = app.add_subcommand("emit-code", "pseudo-code listing of the scheduled graph");
  code->add_option("graph", graph_path, "graph JSON")->required();
  code->add_option("-o,--out", out_path, "output file (default stdout)");

  ModelFlags bench_flags;
  std::vector<std::size_t> sizes;
  std::string csv_path, json_path;
  bench::BenchOptions bopts;
  auto* bench_cmd = app.add_subcommand("bench", "time unreduced and reduced plans");
  bench_flags.add_to(bench_cmd);
  bench_cmd->add_option("--sizes", sizes, "comma separated sizes (overrides -n)")->delimiter(',');
  bench_cmd->add_option("--samples", bopts.samples, "inputs per timed repetition")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", bopts.repetitions, "timed repetitions (median reported)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--warmup", bopts.warmup, "untimed warmup repetitions");
  bench_cmd->add_option("--workers", bopts.workers, "recorded in the report; timing is single-threaded");
  bench_cmd->add_option("--csv", csv_path, "CSV output (default stdout)");
  bench_cmd->add_option("--json", json_path, "JSON report output");
  add_seed(bench_cmd);

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a graph");
  dot->add_option("graph", graph_path, "graph JSON")->required();
  dot->add_option("-o,--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (!seed_given) seed = default_seed();

    if (gen->parsed()) {
      emit(out_path, graph_to_json(gen_flags.build(), indent) + "\n");
    } else if (stats->parsed()) {
      Cdag g = load_graph(graph_path);
      const auto m = graph_metrics(g);
      ojson j;
      j["nodes"] = g.node_count();
      std::size_t compute = 0;
      g.for_each_node([&](NodeId n) { compute += g.kind(n) == TaskKind::Compute; });
      j["compute_nodes"] = compute;
      j["data_nodes"] = g.node_count() - compute;
      j["C"] = m.compute_effort;
      j["D"] = m.data_transfer;
      if (std::isfinite(m.compute_intensity)) j["I"] = m.compute_intensity;
      else j["I"] = "inf";
      j["per_kernel_counts"] = per_kernel_counts(g);
      std::cout << j.dump(2) << "\n";
    } else if (opt->parsed()) {
      Cdag g = load_graph(graph_path);
      FixpointResult r = reduce_to_fixpoint(std::move(g), seed);
      if (!log_path.empty()) {
        std::ofstream log(log_path);
        if (!log) throw Error(ErrorCode::Io, "cannot open " + log_path);
        for (const auto& op : r.log) {
          ojson line;
          line["op"] = "reduce";
          std::vector<std::uint64_t> members;
          for (NodeId n : op.members) members.push_back(n.value);
          line["members"] = members;
          line["survivor"] = op.survivor.value;
          line["dC"] = op.delta.d_compute_effort;
          line["dD"] = op.delta.d_data_transfer;
          log << line.dump() << "\n";
        }
      }
      std::cerr << "applied " << r.applied << " reductions, " << r.graph.node_count() << " nodes remain\n";
      emit(out_path, graph_to_json(r.graph) + "\n");
    } else if (sch->parsed()) {
      Cdag g = load_graph(graph_path);
      Machine m = devices == 1 ? Machine::single(proto) : Machine::uniform(devices, proto, link_rate);
      Schedule s = schedule(g, m);
      ojson j;
      ojson steps = ojson::array();
      for (const auto& st : s.steps) steps.push_back({{"node", st.node.value}, {"device", st.device}});
      j["devices"] = devices;
      j["estimate_seconds"] = estimate_runtime(g, s, m);
      j["steps"] = std::move(steps);
      if (dump_plan) j["plan"] = plan_to_json(lower(g, schedule(g, Machine::single())));
      emit(out_path, j.dump(2) + "\n");
    } else if (run->parsed()) {
      Cdag g = load_graph(graph_path);
      std::vector<InputRecord> inputs;
      if (!inputs_path.empty()) {
        inputs = load_inputs(inputs_path);
      } else if (random_count > 0) {
        run_flags.resolve();
        inputs = bench::sample_inputs(run_flags.req, random_count, seed);
      } else {
        throw Error(ErrorCode::Usage, "run needs --inputs FILE or --random N");
      }
      const auto plan = lower(g, schedule(g, Machine::single()));
      const auto results = execute_batch(plan, models::default_registry(), inputs, workers);
      ojson out = ojson::array();
      int status = kOk;
      for (const auto& r : results) {
        if (r.ok()) {
          out.push_back(ojson::parse(value_to_json(*r.value).dump()));
        } else {
          out.push_back({{"error", std::string(to_string(*r.error))}, {"message", r.message}});
          status = std::max(status, exit_code(*r.error));
        }
      }
      emit(out_path, out.dump() + "\n");
      return status;
    } else if (code->parsed()) {
      Cdag g = load_graph(graph_path);
      emit(out_path, emit_listing(g, schedule(g, Machine::single())));
    } else if (bench_cmd->parsed()) {
      bench_flags.resolve();
      if (sizes.empty()) sizes.push_back(bench_flags.req.n);
      std::vector<bench::BenchReport> reports;
      ojson all = ojson::array();
      for (std::size_t n : sizes) {
        bench::ModelRequest req = bench_flags.req;
        req.n = n;
        reports.push_back(bench::bench_pipeline(req, seed, bopts));
        all.push_back(bench::report_to_json(reports.back()));
      }
      emit(csv_path, bench::export_csv(reports));
      if (!json_path.empty()) write_file(json_path, all.dump(2) + "\n");
    } else if (dot->parsed()) {
      emit(out_path, graph_to_dot(load_graph(graph_path)));
    }
  } catch (const Error& e) {
    std::cerr << "cdag: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "cdag: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
