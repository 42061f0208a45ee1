#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfs1d/bench.hpp"
#include "bfs1d/edge_io.hpp"
#include "bfs1d/error.hpp"
#include "bfs1d/generators.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitCorrectness = 3;

bfs1d::GraphFamily parse_family(const std::string& s) {
  if (s == "star") return bfs1d::GraphFamily::star;
  if (s == "er") return bfs1d::GraphFamily::erdos_renyi;
  if (s == "ws") return bfs1d::GraphFamily::small_world;
  throw bfs1d::InvalidParameterError("--family: expected star, er or ws, got '" +
                                     s + "'");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct GeneratorOptions {
  std::string family = "er";
  std::uint64_t n = 100'000;
  double edge_prob = -1.0;  // default: expected degree 16
  std::uint64_t k = 6;
  double rewire_prob = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t chunk_size = 1'000'000;

  void attach(CLI::App& cmd, bool require_family) {
    auto* fam = cmd.add_option("--family", family, "graph family: star, er, ws");
    if (require_family) fam->required();
    cmd.add_option("--n", n, "vertex count (per rank in weak mode)");
    cmd.add_option("--edge-prob", edge_prob,
                   "er: pair inclusion probability (default 16/(n-1))");
    cmd.add_option("--k", k, "ws: even ring degree");
    cmd.add_option("--rewire-prob", rewire_prob, "ws: rewiring probability");
    cmd.add_option("--seed", seed, "generator seed");
    cmd.add_option("--chunk-size", chunk_size,
                   "vertices generated per chunk (memory knob only)");
  }

  bfs1d::GeneratorSpec to_spec() const {
    bfs1d::GeneratorSpec spec;
    spec.family = parse_family(family);
    spec.n = n;
    spec.edge_prob =
        edge_prob >= 0.0 ? edge_prob : (n > 1 ? 16.0 / static_cast<double>(n - 1) : 0.0);
    spec.ring_degree = k;
    spec.rewire_prob = rewire_prob;
    spec.seed = seed;
    spec.chunk_size = chunk_size;
    return spec;
  }
};

int run_gen(const GeneratorOptions& gen, const std::string& out_path) {
  const bfs1d::EdgeList edges = bfs1d::generate(gen.to_spec());
  bfs1d::write_edge_list(edges, std::filesystem::path(out_path));
  std::cout << "wrote " << edges.vertex_count << " vertices, "
            << edges.edges.size() << " edges to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D partitioned level-synchronous parallel BFS benchmark"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a graph and write it as an edge list");
  GeneratorOptions gen_opts;
  gen_opts.attach(*gen_cmd, /*require_family=*/true);
  std::string gen_out;
  gen_cmd->add_option("--out", gen_out, "output edge-list file")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "run a BFS benchmark plan");
  GeneratorOptions run_gen_opts;
  run_gen_opts.attach(*run_cmd, /*require_family=*/false);
  std::string graph_file;
  run_cmd->add_option("--graph", graph_file, "edge-list file (instead of --family)");
  std::string mode = "strong";
  run_cmd->add_option("--mode", mode, "strong, weak or single");
  std::uint64_t source = 0;
  run_cmd->add_option("--source", source, "BFS source vertex");
  std::string ranks = "1";
  run_cmd->add_option("--ranks", ranks, "comma list of rank counts, ascending");
  std::string strategies = "baseline,optimized";
  run_cmd->add_option("--strategy", strategies, "comma subset of baseline,optimized");
  std::string frontiers = "master,distributed";
  run_cmd->add_option("--frontier", frontiers, "comma subset of master,distributed");
  std::string backend = "inproc";
  run_cmd->add_option("--backend", backend, "inproc or socket");
  std::string socket_addrs;
  run_cmd->add_option("--socket-addrs", socket_addrs,
                      "socket backend: comma list of host:port, one per rank");
  int reps = 3;
  run_cmd->add_option("--reps", reps, "repetitions per configuration");
  std::string csv_out;
  run_cmd->add_option("--csv", csv_out, "write records to this CSV file");
  std::uint64_t oracle_limit = 1'000'000;
  run_cmd->add_option("--oracle-limit", oracle_limit,
                      "verify against serial BFS up to this vertex count");
  std::uint64_t timeout_ms = 30'000;
  run_cmd->add_option("--timeout-ms", timeout_ms, "transport timeout");

  // summarize
  auto* sum_cmd = app.add_subcommand("summarize", "summarize a benchmark CSV");
  std::string sum_csv;
  sum_cmd->add_option("--csv", sum_csv, "CSV file produced by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen_opts, gen_out);

    if (run_cmd->parsed()) {
      bfs1d::BenchPlan plan;
      if (mode == "strong")
        plan.mode = bfs1d::BenchMode::strong;
      else if (mode == "weak")
        plan.mode = bfs1d::BenchMode::weak;
      else if (mode == "single")
        plan.mode = bfs1d::BenchMode::single;
      else
        throw bfs1d::InvalidParameterError("--mode: expected strong, weak or single");

      if (!graph_file.empty())
        plan.graph_file = graph_file;
      else
        plan.generator = run_gen_opts.to_spec();

      plan.source = source;
      for (const std::string& r : split_list(ranks))
        plan.rank_counts.push_back(std::stoi(r));

      plan.strategies.clear();
      for (const std::string& s : split_list(strategies)) {
        if (s == "baseline")
          plan.strategies.push_back(bfs1d::Strategy::baseline);
        else if (s == "optimized")
          plan.strategies.push_back(bfs1d::Strategy::optimized);
        else
          throw bfs1d::InvalidParameterError("--strategy: unknown '" + s + "'");
      }
      plan.frontier_modes.clear();
      for (const std::string& f : split_list(frontiers)) {
        if (f == "master" || f == "master_merge")
          plan.frontier_modes.push_back(bfs1d::FrontierMode::master_merge);
        else if (f == "distributed")
          plan.frontier_modes.push_back(bfs1d::FrontierMode::distributed);
        else
          throw bfs1d::InvalidParameterError("--frontier: unknown '" + f + "'");
      }

      if (backend == "inproc")
        plan.backend = bfs1d::Backend::in_process;
      else if (backend == "socket")
        plan.backend = bfs1d::Backend::socket;
      else
        throw bfs1d::InvalidParameterError("--backend: expected inproc or socket");
      plan.listen_addresses = split_list(socket_addrs);
      plan.repetitions = reps;
      plan.csv_output = csv_out;
      plan.oracle_limit = oracle_limit;
      plan.world_timeout = std::chrono::milliseconds(timeout_ms);

      const std::vector<bfs1d::BenchRecord> records = bfs1d::run_plan(plan);
      std::cout << summarize(records);
      if (!csv_out.empty())
        std::cout << records.size() << " records written to " << csv_out << "\n";
      return 0;
    }

    if (sum_cmd->parsed()) {
      std::cout << bfs1d::summarize(bfs1d::read_csv(sum_csv));
      return 0;
    }
  } catch (const bfs1d::CorrectnessError& e) {
    std::cerr << "correctness violation: " << e.what() << "\n";
    return kExitCorrectness;
  } catch (const bfs1d::InvalidParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bfs1d::InvalidVertexError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
