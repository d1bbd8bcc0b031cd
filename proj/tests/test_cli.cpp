// End-to-end tests that drive the installed command line binary as a child
// process and assert on exit codes, log output and the files it writes.

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "sessrec/hyperopt.hpp"
#include "support/temp.hpp"

using namespace sessrec;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path capture = scratch / "capture.log";
  const std::string command =
      std::string(SESSREC_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.output = testsupport::read_file(capture);
  return result;
}

// Deterministic toy log: six users with four sessions each, four events per
// session, items rotating through a small shared pool so every role stays in
// vocabulary after the user-wise split.
std::string toy_events_csv() {
  std::string csv = "user_id,item_id,timestamp\n";
  for (int user = 0; user < 6; ++user) {
    for (int session = 0; session < 4; ++session) {
      for (int event = 0; event < 4; ++event) {
        const long long time =
            1'600'000'000LL + user * 100'000LL + session * 10'000LL + event * 10LL;
        csv += std::to_string(user + 1) + "," +
               std::to_string((user + session + event) % 8 + 1) + "," +
               std::to_string(time) + "\n";
      }
    }
  }
  return csv;
}

std::string toy_config_json(const fs::path& events, const fs::path& out) {
  return std::string("{\n")
      + "  \"dataset\": {\"name\": \"toy\", \"path\": \"" + events.string() + "\"},\n"
      + "  \"preprocess\": {\"inactivity_gap_s\": 1800, \"min_item_support\": 1,\n"
      + "                   \"min_session_length\": 2, \"min_user_sessions\": 3,\n"
      + "                   \"num_slices\": 1},\n"
      + "  \"algorithms\": [{\"name\": \"sr\", \"trials\": 2},\n"
      + "                   {\"name\": \"vsknn\", \"trials\": 2}],\n"
      + "  \"metrics\": {\"cutoffs\": [5, 20]},\n"
      + "  \"tuning\": {\"trials\": 2, \"post_hoc_trials\": 2, \"objective_cutoff\": 20},\n"
      + "  \"seed\": 7,\n"
      + "  \"threads\": 1,\n"
      + "  \"out\": \"" + out.string() + "\"\n"
      + "}\n";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
  testsupport::TempDir dir;
  CHECK(run_cli("--help", dir.path()).exit_code == 0);
  CHECK(run_cli("--version", dir.path()).exit_code == 0);
  // A missing subcommand is a usage error.
  CHECK(run_cli("", dir.path()).exit_code == 1);
  CHECK(run_cli("preprocess --config /nonexistent.json", dir.path()).exit_code == 1);
}

TEST_CASE("the full pipeline runs and its artifacts line up") {
  testsupport::TempDir dir;
  const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
  const fs::path out = dir.path() / "results";
  const fs::path config =
      testsupport::write_file(dir.path() / "run.json", toy_config_json(events, out));
  const std::string base = "--config " + config.string();

  const CliResult pre = run_cli("preprocess " + base, dir.path());
  REQUIRE(pre.exit_code == 0);
  CHECK(contains(pre.output, "wrote 1 slices under"));
  const fs::path dataset = out / "toy";
  CHECK(fs::exists(dataset / "manifest.json"));
  CHECK(fs::exists(dataset / "users.csv"));
  CHECK(fs::exists(dataset / "items.csv"));
  CHECK(fs::exists(dataset / "slice_0" / "train.csv"));
  CHECK(fs::exists(dataset / "slice_0" / "validation.csv"));
  CHECK(fs::exists(dataset / "slice_0" / "test.csv"));

  const CliResult tune = run_cli("tune " + base, dir.path());
  REQUIRE(tune.exit_code == 0);
  CHECK(contains(tune.output, "tuning on slice 0"));
  CHECK(contains(tune.output, "best MRR@20"));
  const fs::path sr_search = dataset / "slice_0" / "sr" / "search.json";
  REQUIRE(fs::exists(sr_search));
  REQUIRE(fs::exists(dataset / "slice_0" / "vsknn" / "search.json"));
  const SearchResult sr_result = search_result_from_json(testsupport::read_file(sr_search));
  CHECK(sr_result.trials.size() == 2);  // sr has no post-hoc phase
  for (const Trial& trial : sr_result.trials) CHECK(trial.params.count("steps") == 1);

  const CliResult again = run_cli("tune " + base + " --resume", dir.path());
  REQUIRE(again.exit_code == 0);
  CHECK(contains(again.output, "sr: already tuned (2 trials), skipping"));
  CHECK(contains(again.output, "vsknn: already tuned (2 trials), skipping"));

  const CliResult eval = run_cli("eval " + base, dir.path());
  REQUIRE(eval.exit_code == 0);
  CHECK(contains(eval.output, "using tuned parameters from"));
  CHECK(fs::exists(dataset / "slice_0" / "sr" / "report.json"));
  CHECK(fs::exists(dataset / "slice_0" / "sr" / "report.csv"));
  CHECK(fs::exists(dataset / "slice_0" / "vsknn" / "report.json"));

  const CliResult report = run_cli("report " + base, dir.path());
  REQUIRE(report.exit_code == 0);
  CHECK(contains(report.output, "ordered by MAP@20"));
  CHECK(fs::exists(dataset / "summary.csv"));
  CHECK(fs::exists(dataset / "summary.txt"));
  const std::string summary = testsupport::read_file(dataset / "summary.csv");
  CHECK(contains(summary, "algorithm,slices,cutoff,"));
  CHECK(contains(summary, "sr,1,20,"));
  CHECK(contains(summary, "vsknn,1,5,"));

  // A deleted per-slice report downgrades the row instead of failing the run.
  fs::remove(dataset / "slice_0" / "vsknn" / "report.json");
  const CliResult partial = run_cli("report " + base, dir.path());
  REQUIRE(partial.exit_code == 0);
  CHECK(contains(partial.output, "is missing; row is incomplete"));
  CHECK(!contains(testsupport::read_file(dataset / "summary.txt"), "vsknn"));
}

TEST_CASE("identical seeds give byte-identical artifacts across runs") {
  testsupport::TempDir dir;
  const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
  const fs::path config = testsupport::write_file(
      dir.path() / "run.json", toy_config_json(events, dir.path() / "unused"));
  const fs::path out_a = dir.path() / "a";
  const fs::path out_b = dir.path() / "b";

  for (const fs::path& out : {out_a, out_b}) {
    const std::string base = "--config " + config.string() + " --out " + out.string();
    REQUIRE(run_cli("preprocess " + base, dir.path()).exit_code == 0);
    REQUIRE(run_cli("tune " + base, dir.path()).exit_code == 0);
    REQUIRE(run_cli("eval " + base, dir.path()).exit_code == 0);
    REQUIRE(run_cli("report " + base, dir.path()).exit_code == 0);
  }

  for (const char* file : {"manifest.json", "slice_0/train.csv", "slice_0/sr/search.json",
                           "slice_0/vsknn/search.json", "slice_0/sr/report.json",
                           "summary.csv"}) {
    CHECK(testsupport::read_file(out_a / "toy" / file) ==
          testsupport::read_file(out_b / "toy" / file));
  }

  // A different seed changes the search trajectory.
  const fs::path out_c = dir.path() / "c";
  const std::string base_c =
      "--config " + config.string() + " --out " + out_c.string() + " --seed 8";
  REQUIRE(run_cli("preprocess " + base_c, dir.path()).exit_code == 0);
  REQUIRE(run_cli("tune " + base_c, dir.path()).exit_code == 0);
  CHECK(testsupport::read_file(out_a / "toy" / "slice_0" / "sr" / "search.json") !=
        testsupport::read_file(out_c / "toy" / "slice_0" / "sr" / "search.json"));
}

TEST_CASE("configuration and data faults exit with code 1") {
  testsupport::TempDir dir;
  const fs::path out = dir.path() / "results";

  SUBCASE("a column missing from the header names the column") {
    const fs::path events = testsupport::write_file(dir.path() / "events.csv",
                                                    "visitor,item_id,timestamp\n1,2,100\n");
    const fs::path config =
        testsupport::write_file(dir.path() / "run.json", toy_config_json(events, out));
    const CliResult result = run_cli("preprocess --config " + config.string(), dir.path());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.output, "user_id"));
  }

  SUBCASE("an unknown config key is rejected") {
    const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
    std::string text = toy_config_json(events, out);
    text.insert(text.rfind('}'), ", \"extra\": 1\n");
    const fs::path config = testsupport::write_file(dir.path() / "run.json", text);
    const CliResult result = run_cli("preprocess --config " + config.string(), dir.path());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.output, "extra"));
  }

  SUBCASE("an unknown algorithm name is rejected") {
    const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
    std::string text = toy_config_json(events, out);
    const std::string needle = "\"name\": \"sr\"";
    text.replace(text.find(needle), needle.size(), "\"name\": \"mystery\"");
    const fs::path config = testsupport::write_file(dir.path() / "run.json", text);
    REQUIRE(run_cli("preprocess --config " + config.string(), dir.path()).exit_code == 0);
    const CliResult result = run_cli("tune --config " + config.string(), dir.path());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.output, "mystery"));
  }

  SUBCASE("tune and report refuse to run before preprocess") {
    const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
    const fs::path config =
        testsupport::write_file(dir.path() / "run.json", toy_config_json(events, out));
    const CliResult tune = run_cli("tune --config " + config.string(), dir.path());
    CHECK(tune.exit_code == 1);
    CHECK(contains(tune.output, "run preprocess first"));
    const CliResult report = run_cli("report --config " + config.string(), dir.path());
    CHECK(report.exit_code == 1);
  }

  SUBCASE("an empty algorithm list is a configuration error") {
    const fs::path events = testsupport::write_file(dir.path() / "events.csv", toy_events_csv());
    std::string text = toy_config_json(events, out);
    const std::size_t start = text.find("\"algorithms\"");
    const std::size_t end = text.find(']', start);
    text.replace(start, end - start + 1, "\"algorithms\": []");
    const fs::path config = testsupport::write_file(dir.path() / "run.json", text);
    REQUIRE(run_cli("preprocess --config " + config.string(), dir.path()).exit_code == 0);
    const CliResult result = run_cli("eval --config " + config.string(), dir.path());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.output, "no algorithms"));
  }
}
