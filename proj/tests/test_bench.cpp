#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bfs1d/bench.hpp"
#include "bfs1d/error.hpp"
#include "doctest.h"

using namespace bfs1d;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

GeneratorSpec star_spec(VertexId n) {
  GeneratorSpec spec;
  spec.family = GraphFamily::star;
  spec.n = n;
  return spec;
}

BenchRecord make_record(int p, std::uint64_t total_ns,
                        const std::string& strategy = "optimized",
                        std::uint64_t wire = 100) {
  BenchRecord r;
  r.mode = "strong";
  r.family = "er";
  r.n = 100;
  r.edges = 200;
  r.p = p;
  r.strategy = strategy;
  r.frontier_mode = "distributed";
  r.backend = "inproc";
  r.repetition = 0;
  r.levels_traversed = 3;
  r.total_wire_bytes = wire;
  r.total_messages = 10;
  r.aggregation_copy_bytes = strategy == "baseline" ? wire : 0;
  r.shortcircuit_hits = strategy == "optimized" ? 5 : 0;
  r.compute_ns = total_ns / 2;
  r.comm_ns = total_ns / 2;
  r.total_ns = total_ns;
  return r;
}

}  // namespace

TEST_CASE("run_plan: strong star sweep traverses exactly two levels") {
  BenchPlan plan;
  plan.mode = BenchMode::strong;
  plan.generator = star_spec(10'000);
  plan.rank_counts = {1, 2, 4};
  plan.strategies = {Strategy::optimized};
  plan.frontier_modes = {FrontierMode::distributed};
  plan.repetitions = 1;

  const auto records = run_plan(plan);
  REQUIRE(records.size() == 3);
  for (const BenchRecord& r : records) {
    CHECK(r.levels_traversed == 2);
    CHECK(r.mode == "strong");
    CHECK(r.family == "star");
    CHECK(r.n == 10'000);
    CHECK(r.edges == 9'999);
  }
  CHECK(records[0].p == 1);
  CHECK(records[1].p == 2);
  CHECK(records[2].p == 4);
}

TEST_CASE("run_plan: single mode on one rank moves zero wire bytes") {
  BenchPlan plan;
  plan.mode = BenchMode::single;
  plan.generator = star_spec(50);
  plan.rank_counts = {1};
  plan.repetitions = 1;

  const auto records = run_plan(plan);
  REQUIRE(records.size() == 4);  // 2 strategies x 2 modes
  for (const BenchRecord& r : records) CHECK(r.total_wire_bytes == 0);
}

TEST_CASE("run_plan: weak mode scales n with the rank count") {
  BenchPlan plan;
  plan.mode = BenchMode::weak;
  plan.generator = star_spec(1000);
  plan.rank_counts = {1, 2};
  plan.strategies = {Strategy::optimized};
  plan.frontier_modes = {FrontierMode::distributed};
  plan.repetitions = 1;

  const auto records = run_plan(plan);
  REQUIRE(records.size() == 2);
  CHECK(records[0].n == 1000);
  CHECK(records[1].n == 2000);
  CHECK(records[0].mode == "weak");
}

TEST_CASE("run_plan: CSV output round-trips exactly") {
  const auto csv = temp_file("bfs1d_bench_roundtrip.csv");
  BenchPlan plan;
  plan.mode = BenchMode::strong;
  plan.generator = star_spec(200);
  plan.rank_counts = {1, 2};
  plan.repetitions = 2;
  plan.csv_output = csv;

  const auto records = run_plan(plan);
  const auto parsed = read_csv(csv);
  CHECK(parsed == records);
  std::filesystem::remove(csv);
}

TEST_CASE("run_plan: non-timing columns are deterministic across reruns") {
  BenchPlan plan;
  plan.mode = BenchMode::strong;
  plan.generator = star_spec(500);
  plan.generator->family = GraphFamily::erdos_renyi;
  plan.generator->edge_prob = 0.02;
  plan.generator->seed = 99;
  plan.rank_counts = {1, 3};
  plan.repetitions = 1;

  auto first = run_plan(plan);
  auto second = run_plan(plan);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    BenchRecord a = first[i];
    BenchRecord b = second[i];
    a.compute_ns = b.compute_ns = 0;
    a.comm_ns = b.comm_ns = 0;
    a.total_ns = b.total_ns = 0;
    CHECK(a == b);
  }
}

TEST_CASE("run_plan: plan validation") {
  BenchPlan plan;
  plan.generator = star_spec(10);

  plan.rank_counts = {};
  CHECK_THROWS_AS(run_plan(plan), InvalidParameterError);

  plan.rank_counts = {4, 2};
  CHECK_THROWS_AS(run_plan(plan), InvalidParameterError);

  plan.rank_counts = {1, 2};
  plan.mode = BenchMode::single;
  CHECK_THROWS_AS(run_plan(plan), InvalidParameterError);

  plan.mode = BenchMode::weak;
  plan.generator.reset();
  plan.graph_file = "whatever.el";
  CHECK_THROWS_AS(run_plan(plan), InvalidParameterError);

  plan.mode = BenchMode::strong;
  plan.graph_file = "/nonexistent/graph.el";
  CHECK_THROWS_AS(run_plan(plan), IoError);
}

TEST_CASE("run_plan: verification is skipped above the oracle limit") {
  BenchPlan plan;
  plan.generator = star_spec(500);
  plan.rank_counts = {2};
  plan.strategies = {Strategy::optimized};
  plan.frontier_modes = {FrontierMode::distributed};
  plan.repetitions = 1;
  plan.oracle_limit = 100;  // below n, so the serial check is skipped

  const auto records = run_plan(plan);
  REQUIRE(records.size() == 1);
  CHECK(records[0].levels_traversed == 2);
}

TEST_CASE("run_plan: out-of-range source is rejected") {
  BenchPlan plan;
  plan.generator = star_spec(10);
  plan.rank_counts = {1};
  plan.source = 10;
  CHECK_THROWS_AS(run_plan(plan), InvalidVertexError);
}

TEST_CASE("read_csv: malformed inputs") {
  const auto path = temp_file("bfs1d_bad.csv");
  {
    std::ofstream out(path);
    out << "not,the,header\n";
  }
  CHECK_THROWS_AS(read_csv(path), ParseError);
  {
    std::ofstream out(path);
    out << "mode,family,n,edges,p,strategy,frontier_mode,backend,repetition,"
           "levels_traversed,total_wire_bytes,total_messages,"
           "aggregation_copy_bytes,shortcircuit_hits,compute_ns,comm_ns,"
           "total_ns\n";
    out << "strong,er,1,2\n";
  }
  CHECK_THROWS_AS(read_csv(path), ParseError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_csv(path), IoError);
}

TEST_CASE("summarize: single record has speedup 1.0") {
  const std::string table = summarize({make_record(1, 1'000'000)});
  CHECK(table.find("1.00") != std::string::npos);
}

TEST_CASE("summarize: halved time doubles the speedup") {
  const std::string table = summarize(
      {make_record(1, 10'000'000'000ull), make_record(2, 5'000'000'000ull)});
  CHECK(table.find("2.00") != std::string::npos);
  CHECK(table.find("slower") == std::string::npos);
}

TEST_CASE("summarize: regression over the previous rank count is flagged") {
  const std::string table = summarize({make_record(32, 1'000'000),
                                       make_record(64, 2'000'000)});
  CHECK(table.find("slower than previous p") != std::string::npos);
}

TEST_CASE("summarize: wire ratio needs both strategies") {
  const std::string both = summarize(
      {make_record(2, 1000, "baseline", 300), make_record(2, 900, "optimized", 200)});
  CHECK(both.find("1.50") != std::string::npos);

  CHECK_THROWS_AS(summarize({}), InvalidParameterError);
}
