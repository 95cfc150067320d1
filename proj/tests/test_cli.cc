#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sportscaster/cli.h"
#include "sportscaster/report.h"

using namespace sportscaster;
namespace fs = std::filesystem;

namespace {

int call(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sportscaster_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(call({}) == cli::kExitUsage);
  CHECK(call({"dance"}) == cli::kExitUsage);
  CHECK(call({"pair", "--bogus"}) == cli::kExitUsage);
  CHECK(call({"pair", "--manifest", "x"}) == cli::kExitUsage);  // no --out
  auto dir = scratch("usage");
  CHECK(call({"train", "--manifest", "m", "--out", dir.string(), "--strategy", "wasp"}) == cli::kExitUsage);
  CHECK(call({"simulate", "--out", dir.string(), "--superfluous-rate", "1.5"}) == cli::kExitUsage);
  CHECK(call({"--help"}) == cli::kExitOk);
}

TEST_CASE("data errors exit with 2") {
  auto dir = scratch("data");
  CHECK(call({"pair", "--manifest", (dir / "missing.tsv").string(), "--out", dir.string()}) == cli::kExitData);
  std::ofstream(dir / "manifest.tsv") << "g\te.tsv\tc.tsv\t-\n";
  std::ofstream(dir / "e.tsv") << "10\tkick ( pink99 )\n";
  std::ofstream(dir / "c.tsv") << "20\ten\tpink1 shoots\n";
  std::string text;
  CHECK(call({"pair", "--manifest", (dir / "manifest.tsv").string(), "--out", dir.string()}, &text) == cli::kExitData);
  CHECK(text.find("e.tsv:1") != std::string::npos);
}

TEST_CASE("config file values yield to command-line flags") {
  auto dir = scratch("config");
  std::ofstream(dir / "sim.cfg") << "# test\ngames = 3\nseed = 5\nduration_ms = 60000\n";
  REQUIRE(call({"simulate", "--config", (dir / "sim.cfg").string(), "--games", "2", "--out", (dir / "c").string()}) ==
          cli::kExitOk);
  std::string echo = slurp(dir / "c" / "run_config.txt");
  CHECK(echo.find("games = 2") != std::string::npos);
  CHECK(echo.find("seed = 5") != std::string::npos);
  CHECK(echo.find(dir.string()) == std::string::npos);
  CHECK(fs::exists(dir / "c" / "game2.events.tsv"));
  CHECK(!fs::exists(dir / "c" / "game3.events.tsv"));

  std::ofstream(dir / "pair.cfg") << "nonsense = 1\n";
  CHECK(call({"pair", "--config", (dir / "pair.cfg").string(), "--manifest", (dir / "c" / "manifest.tsv").string(),
              "--out", (dir / "p").string()}) == cli::kExitUsage);
}

TEST_CASE("pipeline through evaluate writes TSV and JSON reports") {
  auto dir = scratch("pipeline");
  auto c = (dir / "c").string(), t = (dir / "t").string();
  REQUIRE(call({"simulate", "--out", c, "--seed", "3", "--games", "2", "--profile", "sharp"}) == 0);
  auto manifest = (dir / "c" / "manifest.tsv").string();
  REQUIRE(call({"pair", "--manifest", manifest, "--out", (dir / "p").string()}) == 0);
  REQUIRE(call({"train", "--manifest", manifest, "--out", t, "--strategy", "nist_igsl"}) == 0);
  REQUIRE(call({"evaluate", "--manifest", manifest, "--out", (dir / "e").string(), "--model", t + "/model.txt",
                "--matching", t + "/matching.tsv", "--strategic", t + "/strategic.tsv"}) == 0);
  std::string tsv = slurp(dir / "e" / "report.tsv");
  CHECK(tsv.rfind(std::string(report::kTsvHeader), 0) == 0);
  CHECK(tsv.find("\nmatching\t") != std::string::npos);
  CHECK(tsv.find("\ngeneration\t") != std::string::npos);
  REQUIRE(call({"evaluate", "--manifest", manifest, "--out", (dir / "j").string(), "--model", t + "/model.txt",
                "--json"}) == 0);
  std::string json = slurp(dir / "j" / "report.jsonl");
  CHECK(json.find("\"task\":\"parsing\"") != std::string::npos);

  std::ofstream(dir / "mrs.txt") << "pass ( pink1 , pink2 )\nkick ( pink3 )\n";
  REQUIRE(call({"generate", "--model", t + "/model.txt", "--input", (dir / "mrs.txt").string(), "--out",
                (dir / "g").string(), "--topk", "2"}) == 0);
  CHECK(slurp(dir / "g" / "generations.tsv").find("pink1 passes to pink2") != std::string::npos);
  std::ofstream(dir / "bad.txt") << "pass ( pink1 )\n";
  CHECK(call({"generate", "--model", t + "/model.txt", "--input", (dir / "bad.txt").string(), "--out",
              (dir / "g2").string()}) == cli::kExitData);

  std::ofstream(dir / "sents.txt") << "pink1 passes to pink2\n";
  REQUIRE(call({"parse", "--model", t + "/model.txt", "--input", (dir / "sents.txt").string(), "--out",
                (dir / "q").string()}) == 0);
  CHECK(slurp(dir / "q" / "parses.tsv").find("pass ( pink1 , pink2 )") != std::string::npos);
  REQUIRE(call({"sportscast", "--manifest", manifest, "--model", t + "/model.txt", "--strategic",
                t + "/strategic.tsv", "--out", (dir / "s").string()}) == 0);
  CHECK(fs::exists(dir / "s" / "game1.transcript.tsv"));
  REQUIRE(call({"igsl", "--manifest", manifest, "--out", (dir / "i").string()}) == 0);
  CHECK(fs::exists(dir / "i" / "strategic.tsv"));
}
