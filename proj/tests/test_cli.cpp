#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// The suite drives the installed binary end to end, so exit codes and files
// are observed exactly as a user would see them.
CliResult run_cli(const std::string& args) {
  static const TempDir dir("cli-io");
  static int counter = 0;
  const fs::path out_file = dir.path / ("out" + std::to_string(counter));
  const fs::path err_file = dir.path / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(PEDFUSE_CLI_PATH) + " " + args + " >" + out_file.string() +
                          " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out_file), slurp(err_file)};
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("help screens cover every subcommand and carry units") {
  const CliResult top = run_cli("--help");
  CHECK(top.code == 0);
  for (const char* name : {"generate", "train", "evaluate", "gradcheck", "plot", "experiment"}) {
    CHECK(top.out.find(name) != std::string::npos);
  }
  const CliResult gen = run_cli("generate --help");
  CHECK(gen.code == 0);
  CHECK(gen.out.find("(meters)") != std::string::npos);
  CHECK(gen.out.find("(seconds)") != std::string::npos);
  const CliResult tr = run_cli("train --help");
  CHECK(tr.code == 0);
  CHECK(tr.out.find("learning rate") != std::string::npos);
  CHECK(tr.out.find("hidden width (units") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("generate --bogus 1 --out x").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("generate --kinds rainstorm --out x").code == 2);
}

TEST_CASE("a missing config file is a usage error naming the path") {
  const TempDir dir("cli-cfg");
  const std::string missing = (dir.path / "missing.cfg").string();
  const CliResult r = run_cli("train --config " + missing);
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.cfg") != std::string::npos);
}

TEST_CASE("gradcheck verifies all three cue configurations") {
  const CliResult r = run_cli("gradcheck --hidden 8 --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("baseline") != std::string::npos);
  CHECK(r.out.find("method1") != std::string::npos);
  CHECK(r.out.find("method2") != std::string::npos);
  CHECK(r.out.find("max relative error") != std::string::npos);
}

TEST_CASE("cli pipeline: generate, train, experiment, evaluate, plot") {
  const TempDir dir("cli-pipe");
  const std::string corpus = (dir.path / "corpus").string();

  // generate
  const CliResult gen = run_cli("generate --kinds all --n 2 --seed 7 --out " + corpus);
  REQUIRE(gen.code == 0);
  for (const char* name :
       {"s0000.txt", "s0001.txt", "s0002.txt", "s0003.txt", "s0004.txt", "s0005.txt",
        "manifest.tsv", "generate.cfg"}) {
    CHECK(fs::exists(fs::path(corpus) / name));
  }
  CHECK_FALSE(fs::exists(corpus + ".staging"));
  CHECK(run_cli("generate --kinds all --n 2 --seed 7 --out " + corpus).code == 5);

  SUBCASE("kind filtering keeps only the requested scenarios") {
    const std::string inter = (dir.path / "inter").string();
    REQUIRE(run_cli("generate --kinds interaction --n 2 --seed 7 --out " + inter).code == 0);
    std::size_t tracks = 0;
    for (const auto& entry : fs::directory_iterator(inter)) {
      tracks += entry.path().extension() == ".txt";
    }
    CHECK(tracks == 4);
  }

  // train
  const std::string flags = " --hidden 4 --decoder-hidden 8 --epochs 2 --batch 32 --seed 3";
  const std::string t1 = (dir.path / "t1").string();
  const CliResult tr =
      run_cli("train --corpus " + corpus + " --method method2 --out " + t1 + flags);
  REQUIRE(tr.code == 0);
  for (const char* name : {"checkpoint.bin", "config.cfg", "history.txt", "split_manifest.txt"}) {
    CHECK(fs::exists(fs::path(t1) / name));
  }
  const std::string echoed = slurp(fs::path(t1) / "config.cfg");
  CHECK(echoed.find("ped_hidden=4") != std::string::npos);
  CHECK(echoed.find("decoder_hidden=8") != std::string::npos);
  CHECK(echoed.find("cues=method2") != std::string::npos);
  CHECK(echoed.find("seed=3") != std::string::npos);

  SUBCASE("training is deterministic across runs") {
    const std::string t2 = (dir.path / "t2").string();
    REQUIRE(run_cli("train --corpus " + corpus + " --method method2 --out " + t2 + flags).code ==
            0);
    CHECK(slurp(fs::path(t2) / "checkpoint.bin") == slurp(fs::path(t1) / "checkpoint.bin"));
    CHECK(slurp(fs::path(t2) / "split_manifest.txt") ==
          slurp(fs::path(t1) / "split_manifest.txt"));
  }

  SUBCASE("flags override a config file") {
    const fs::path cfg_file = dir.path / "base.cfg";
    std::ofstream(cfg_file) << "max_epochs=1\nped_hidden=4\nveh_hidden=4\nhead_hidden=4\n"
                               "decoder_hidden=8\n";
    const std::string t3 = (dir.path / "t3").string();
    const CliResult r = run_cli("train --corpus " + corpus + " --config " + cfg_file.string() +
                                " --lr 0.002 --out " + t3);
    REQUIRE(r.code == 0);
    const std::string echoed3 = slurp(fs::path(t3) / "config.cfg");
    CHECK(echoed3.find("learning_rate=0.002") != std::string::npos);  // flag wins
    CHECK(echoed3.find("max_epochs=1") != std::string::npos);         // file beats default
    CHECK(echoed3.find("cues=baseline") != std::string::npos);        // built-in default
  }

  // experiment + evaluate
  const std::string exp = (dir.path / "exp").string();
  const CliResult ex = run_cli("experiment --corpus " + corpus + " --out " + exp + flags);
  REQUIRE(ex.code == 0);
  for (const char* name : {"report.txt", "report.tsv", "horizon.tsv", "split_manifest.txt"}) {
    CHECK(fs::exists(fs::path(exp) / name));
  }
  for (const char* method : {"baseline", "method1", "method2"}) {
    CHECK(fs::exists(fs::path(exp) / method / "checkpoint.bin"));
    CHECK(fs::exists(fs::path(exp) / method / "config.cfg"));
  }
  CHECK(count_occurrences(slurp(fs::path(exp) / "report.tsv"), "\n") == 4);
  CHECK(count_occurrences(slurp(fs::path(exp) / "horizon.tsv"), "\n") == 11);
  CHECK(ex.out.find("RMSE") != std::string::npos);

  SUBCASE("evaluate reproduces the experiment's report from its artifacts") {
    const std::string ev_out = (dir.path / "ev").string();
    const CliResult ev = run_cli("evaluate --corpus " + corpus + " --baseline " + exp +
                                 "/baseline --method1 " + exp + "/method1 --method2 " + exp +
                                 "/method2 --out " + ev_out);
    REQUIRE(ev.code == 0);
    CHECK(slurp(fs::path(ev_out) / "report.tsv") == slurp(fs::path(exp) / "report.tsv"));
    CHECK(slurp(fs::path(ev_out) / "horizon.tsv") == slurp(fs::path(exp) / "horizon.tsv"));
  }

  // plot
  const std::string svg = (dir.path / "p.svg").string();
  const CliResult pl = run_cli("plot --corpus " + corpus + " --index 0 --out " + svg);
  REQUIRE(pl.code == 0);
  const std::string body = slurp(svg);
  CHECK(body.rfind("<?xml", 0) == 0);
  CHECK(count_occurrences(body, "<circle") == 10);

  SUBCASE("plot overlays checkpoint forecasts") {
    const std::string svg2 = (dir.path / "p2.svg").string();
    REQUIRE(run_cli("plot --corpus " + corpus + " --index 3 --method2 " + exp +
                    "/method2 --baseline " + exp + "/baseline --out " + svg2)
                .code == 0);
    CHECK(count_occurrences(slurp(svg2), "<circle") == 30);
  }
  SUBCASE("plot rejects an out-of-range index") {
    const CliResult r =
        run_cli("plot --corpus " + corpus + " --index 999999 --out " + svg + ".n");
    CHECK(r.code == 3);
    CHECK(r.err.find("out of range") != std::string::npos);
  }
  SUBCASE("plot into a missing directory is an io error") {
    CHECK(run_cli("plot --corpus " + corpus + " --index 0 --out " +
                  (dir.path / "nodir" / "x.svg").string())
              .code == 5);
  }
}

TEST_CASE("data and numeric failures map to their exit codes") {
  const TempDir dir("cli-err");
  const fs::path empty = dir.path / "empty";
  fs::create_directories(empty);
  const CliResult no_tracks =
      run_cli("train --corpus " + empty.string() + " --out " + (dir.path / "o1").string());
  CHECK(no_tracks.code == 3);

  const std::string corpus = (dir.path / "c").string();
  REQUIRE(run_cli("generate --n 1 --seed 2 --out " + corpus).code == 0);
  const CliResult diverged =
      run_cli("train --corpus " + corpus + " --out " + (dir.path / "o2").string() +
              " --hidden 4 --decoder-hidden 8 --epochs 3 --lr 1e200 --clip 0");
  CHECK(diverged.code == 4);
  CHECK(diverged.err.find("diverged") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "o2"));
}
