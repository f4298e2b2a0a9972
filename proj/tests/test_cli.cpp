#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <string>

#include "lovasz/io.hpp"

using namespace lsv;
namespace fs = std::filesystem;

namespace {

struct CliFixture {
  fs::path dir;
  std::string bin;

  CliFixture() {
    const char* env = std::getenv("LSV_CLI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "LSV_CLI_BIN must point at the lsv binary");
    bin = env;
    static int counter = 0;
    dir = fs::temp_directory_path() / ("lsv_cli_test_" + std::to_string(::getpid()) +
                                       "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~CliFixture() { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string cmd = bin + " " + args + " > " + (dir / "stdout.txt").string() +
                            " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  std::string stdout_text() const { return io::read_text(dir / "stdout.txt"); }
  std::string stderr_text() const { return io::read_text(dir / "stderr.txt"); }
};

}  // namespace

TEST_CASE("gradcheck subcommand") {
  CliFixture cli;
  SUBCASE("passes for the lovasz hinge and writes the trial table") {
    CHECK(cli.run("gradcheck --loss lovasz_hinge --p 16 --trials 20 --tol 1e-4 "
                  "--out-dir " + cli.dir.string()) == 0);
    const auto table = io::parse_csv(io::read_text(cli.dir / "gradcheck.csv"));
    REQUIRE(table.size() >= 21);
    CHECK(table[0] == std::vector<std::string>{"trial", "max_abs_err"});
  }
  SUBCASE("unknown loss is a usage error") {
    CHECK(cli.run("gradcheck --loss none") == 2);
    CHECK(cli.stderr_text().find("--loss") != std::string::npos);
  }
  SUBCASE("zero dimension is a usage error") {
    CHECK(cli.run("gradcheck --loss hinge --p 0") == 2);
  }
}

TEST_CASE("toy subcommand") {
  CliFixture cli;
  const std::string small =
      " --images 4 --height 24 --width 24 --grid-min -1 --grid-max 1 --out-dir " +
      cli.dir.string();
  SUBCASE("same seed twice produces identical sweep files") {
    CHECK(cli.run("toy --bias-sweep --seed 7" + small) == 0);
    const std::string first = io::read_text(cli.dir / "bias_sweep.csv");
    CHECK(cli.run("toy --bias-sweep --seed 7" + small) == 0);
    CHECK(io::read_text(cli.dir / "bias_sweep.csv") == first);
    const auto table = io::parse_csv(first);
    CHECK(table[0] == std::vector<std::string>{"loss", "bias", "value"});
    CHECK(table.size() == 1 + 5 * 201);  // menu of 4 + jaccard, 201 biases
  }
  SUBCASE("train mode writes the experiment records") {
    CHECK(cli.run("toy --train --seed 7 --epochs 3 --batch-size 2" + small) == 0);
    const auto table = io::parse_csv(io::read_text(cli.dir / "train.csv"));
    CHECK(table[0] ==
          std::vector<std::string>{"step", "loss", "image_miou", "dataset_miou"});
    CHECK(table.size() >= 2);
  }
  SUBCASE("exactly one mode must be chosen") {
    CHECK(cli.run("toy" + small) == 2);
    CHECK(cli.run("toy --bias-sweep --train" + small) == 2);
  }
}

TEST_CASE("metrics subcommand") {
  CliFixture cli;
  const fs::path gt_dir = cli.dir / "gt";
  const fs::path pred_dir = cli.dir / "pred";
  fs::create_directories(gt_dir);
  fs::create_directories(pred_dir);
  io::write_pgm(gt_dir / "a.pgm", {0, 1, 1, 0}, 2, 2);
  io::write_pgm(pred_dir / "a.pgm", {0, 1, 1, 0}, 2, 2);

  SUBCASE("identical masks give unit iou") {
    CHECK(cli.run("metrics --gt-dir " + gt_dir.string() + " --pred-dir " +
                  pred_dir.string() + " --classes 2 --out-dir " + cli.dir.string()) == 0);
    const auto table = io::parse_csv(io::read_text(cli.dir / "metrics.csv"));
    CHECK(table[0] == std::vector<std::string>{"class", "intersection", "union", "iou"});
    CHECK(table[1][3] == "1.000000");
    CHECK(table[2][3] == "1.000000");
    CHECK(table[3][0] == "mean");
    CHECK(table[3][3] == "1.000000");
  }
  SUBCASE("mismatched filename sets list the difference and exit 1") {
    io::write_pgm(pred_dir / "b.pgm", {0}, 1, 1);
    CHECK(cli.run("metrics --gt-dir " + gt_dir.string() + " --pred-dir " +
                  pred_dir.string() + " --classes 2") == 1);
    CHECK(cli.stderr_text().find("b.pgm") != std::string::npos);
  }
  SUBCASE("label outside the class set exits 1") {
    io::write_pgm(gt_dir / "a.pgm", {0, 3, 1, 0}, 2, 2);
    CHECK(cli.run("metrics --gt-dir " + gt_dir.string() + " --pred-dir " +
                  pred_dir.string() + " --classes 2") == 1);
  }
}

TEST_CASE("prox-demo subcommand") {
  CliFixture cli;
  SUBCASE("zero steps writes a header-only csv") {
    CHECK(cli.run("prox-demo --steps 0 --out-dir " + cli.dir.string()) == 0);
    const auto table = io::parse_csv(io::read_text(cli.dir / "prox_demo.csv"));
    REQUIRE(table.size() == 1);
    CHECK(table[0] ==
          std::vector<std::string>{"method", "step", "x1", "x2", "objective"});
  }
  SUBCASE("trajectories cover the three methods") {
    CHECK(cli.run("prox-demo --steps 5 --out-dir " + cli.dir.string()) == 0);
    const auto table = io::parse_csv(io::read_text(cli.dir / "prox_demo.csv"));
    CHECK(table.size() == 1 + 3 * 6);  // header + 3 methods x (start + 5 steps)
  }
}

TEST_CASE("bench subcommand runs a small range") {
  CliFixture cli;
  CHECK(cli.run("bench --p-min 1024 --p-max 4096 --reps 3 --out-dir " +
                cli.dir.string()) == 0);
  const auto table = io::parse_csv(io::read_text(cli.dir / "bench.csv"));
  REQUIRE(table.size() == 4);  // header + 1024, 2048, 4096
  CHECK(table[0] == std::vector<std::string>{"p", "median_ns"});
  CHECK(table[1][0] == "1024");
  CHECK(std::stod(table[1][1]) > 0.0);
  CHECK(cli.run("bench --p-min 1000 --p-max 4096") == 2);  // not a power of two
}
