#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ost/cli.hpp"
#include "ost/error.hpp"
#include "ost/generators.hpp"
#include "test_support.hpp"

using namespace ost;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result ostctl(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("ostctl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("exit codes for bad invocations") {
  CHECK(ostctl({}).code == cli::kParseError);
  CHECK(ostctl({"frobnicate"}).code == cli::kParseError);
  CHECK(ostctl({"build"}).code == cli::kParseError);
  CHECK(ostctl({"--help"}).code == cli::kOk);
  CHECK(ostctl({"build", "--graph", "/nonexistent/graph.txt"}).code == cli::kFailure);
  TempDir dir;
  auto bad = dir.file("bad.txt", "3 2\n0 1 1\n1 x 1\n");
  auto r = ostctl({"build", "--graph", bad});
  CHECK(r.code == cli::kParseError);
  CHECK(r.err.find("line 3") != std::string::npos);
  auto disconnected = dir.file("disc.txt", "3 1\n0 1 1\n");
  CHECK(ostctl({"build", "--graph", disconnected}).code == cli::kValidationError);
  auto p5 = dir.file("p5.txt", format_graph(testing::path_graph(5)));
  CHECK(ostctl({"build", "--graph", p5, "--sink", "9"}).code == cli::kValidationError);
  CHECK(ostctl({"simulate", "--graph", p5, "--sources", "1,x"}).code == cli::kParseError);
  CHECK(ostctl({"simulate", "--graph", p5, "--sources", "7"}).code == cli::kValidationError);
  CHECK(ostctl({"simulate", "--graph", p5, "--fusion", "cubic", "--sources", "1"}).code == cli::kParseError);
  auto grid = dir.file("grid.txt", format_graph(generate_grid(4, 4)));
  CHECK(ostctl({"oracle", "--graph", grid, "--sources", "5", "--kind", "exact"}).code == cli::kInstanceTooLarge);
}

TEST_CASE("generate is deterministic") {
  auto a = ostctl({"generate", "--kind", "random", "--n", "30", "--p", "0.2", "--max-weight", "5", "--seed", "7"});
  auto b = ostctl({"generate", "--kind", "random", "--n", "30", "--p", "0.2", "--max-weight", "5", "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(load_graph(a.out).node_count() == 30);
  auto grid = ostctl({"generate", "--kind", "grid", "--rows", "3", "--cols", "4"});
  REQUIRE(grid.code == 0);
  CHECK(grid.out == format_graph(generate_grid(3, 4)));
}

TEST_CASE("build and simulate") {
  TempDir dir;
  auto p5 = dir.file("p5.txt", format_graph(testing::path_graph(5)));
  auto tree_path = dir.path("p5.tree");
  auto built = ostctl({"build", "--graph", p5, "--sink", "0", "--out", tree_path});
  REQUIRE(built.code == 0);
  CHECK(slurp(tree_path).starts_with("ost-tree 1\n"));

  auto sim = ostctl({"simulate", "--graph", p5, "--tree", tree_path, "--sources", "4", "--fusion", "linear",
                     "--c-star", "4"});
  REQUIRE(sim.code == 0);
  CHECK(sim.out.find("\nQ 4\n") != std::string::npos);
  CHECK(sim.out.find("sink_count 1\n") != std::string::npos);
  CHECK(sim.out.find("upper_bound round=2 j=0 cost=4 limit=24") != std::string::npos);
  CHECK(sim.out.find("lower_bound round=2 j=0 sender=4 c_star=4 threshold=2") != std::string::npos);

  auto trace = dir.path("trace.txt");
  REQUIRE(ostctl({"simulate", "--graph", p5, "--sources", "4", "--trace", trace}).code == 0);
  CHECK(slurp(trace) == "# round sender receiver count size length cost\n2 4 0 1 1 4 4\n");

  auto other = dir.file("c4.txt", "4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n");
  CHECK(ostctl({"simulate", "--graph", other, "--tree", tree_path, "--sources", "1"}).code == cli::kValidationError);
}

TEST_CASE("oracle and bound") {
  TempDir dir;
  auto c4 = dir.file("c4.txt", "4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n");
  auto r = ostctl({"oracle", "--graph", c4, "--sources", "1,3", "--fusion", "constant:1", "--kind", "exact"});
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("value 2\nkind exact-tree-enumeration\n"));
  auto lin = ostctl({"oracle", "--graph", c4, "--sources", "1,2,3", "--kind", "linear"});
  CHECK(lin.out.starts_with("value 4\n"));

  auto b = ostctl({"bound", "--rho", "0", "--diameter", "2", "--n", "2", "--sources", "1"});
  REQUIRE(b.code == 0);
  CHECK(b.out == "120\n");
  CHECK(ostctl({"bound", "--rho", "-1"}).code == cli::kValidationError);

  auto d = ostctl({"doubling", "--graph", c4, "--seed", "3"});
  REQUIRE(d.code == 0);
  CHECK(d.out == ostctl({"doubling", "--graph", c4, "--seed", "3"}).out);
}

TEST_CASE("compare") {
  TempDir dir;
  auto config = dir.file("cfg.json", R"({
    "graph": {"generator": "grid", "rows": 5, "cols": 5},
    "trees": ["ost", "mst", "spt"],
    "fusions": ["constant:1"],
    "counts": [2, 4, 8],
    "trials": 3,
    "seed": 11
  })");
  auto one = ostctl({"compare", "--config", config, "--threads", "1"});
  REQUIRE(one.code == 0);
  CHECK(line_count(one.out) == 28);
  CHECK(one.out.starts_with(
      "trial,graph_id,n,sink,fusion,num_sources,tree,cost_tree,cost_rounds,oracle_value,oracle_kind,ratio_tree\n"));
  auto four = ostctl({"compare", "--config", config, "--threads", "4"});
  CHECK(one.out == four.out);
  auto reseeded = ostctl({"compare", "--config", config, "--seed", "12"});
  CHECK(reseeded.out != one.out);

  auto defaults = dir.file("defaults.json", R"({"graph": {"generator": "grid", "rows": 3, "cols": 3}, "trees": ["ost"]})");
  auto swept = ostctl({"compare", "--config", defaults});
  REQUIRE(swept.code == 0);
  CHECK(line_count(swept.out) == 3);  // header, |A| = 5 and |A| = 9

  auto unknown = dir.file("bad.json", R"({"graph": {"generator": "grid"}, "colour": 1})");
  CHECK(ostctl({"compare", "--config", unknown}).code == cli::kParseError);
  auto broken = dir.file("broken.json", "{");
  CHECK(ostctl({"compare", "--config", broken}).code == cli::kParseError);
  auto too_many = dir.file("many.json", R"({"graph": {"generator": "grid", "rows": 2, "cols": 2}, "counts": [5]})");
  CHECK(ostctl({"compare", "--config", too_many}).code == cli::kValidationError);
}

TEST_CASE("experiment config and sampling") {
  auto c = cli::parse_experiment_config(R"({"fusions": ["linear", "sqrt"], "sampling": "nested", "oracle": "none"})");
  CHECK(c.fusions.size() == 2);
  CHECK(c.sampling == cli::Sampling::nested);
  CHECK(c.oracle == cli::OracleMode::none);
  CHECK_THROWS_AS(cli::parse_experiment_config(R"({"trials": 0})"), ValidationError);
  CHECK_THROWS_AS(cli::parse_experiment_config(R"({"fusions": ["nope"]})"), ParseError);
  CHECK_THROWS_AS(cli::parse_experiment_config(R"({"trees": ["bfs"]})"), ParseError);
  CHECK_THROWS_AS(cli::parse_experiment_config(R"({"trials": "three"})"), ParseError);

  CHECK(cli::default_schedule(1600) == std::vector<std::int64_t>{5, 10, 20, 40, 80, 160, 320, 640, 1280, 1600});
  CHECK(cli::default_schedule(5) == std::vector<std::int64_t>{5});

  auto small = cli::sample_sources(100, 10, 5, 2, 0, cli::Sampling::nested);
  auto large = cli::sample_sources(100, 40, 5, 2, 3, cli::Sampling::nested);
  CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  CHECK(cli::sample_sources(100, 10, 5, 2, 0, cli::Sampling::independent) ==
        cli::sample_sources(100, 10, 5, 2, 0, cli::Sampling::independent));
  CHECK(cli::sample_sources(100, 10, 5, 2, 0, cli::Sampling::independent) !=
        cli::sample_sources(100, 10, 5, 2, 1, cli::Sampling::independent));
  CHECK_THROWS_AS(cli::sample_sources(10, 11, 5, 0, 0, cli::Sampling::independent), ValidationError);
}
