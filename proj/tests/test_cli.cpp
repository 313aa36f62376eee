#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "advqa/cli.hpp"
#include "advqa/corpus.hpp"
#include "advqa/synthetic.hpp"

using namespace advqa;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "advqa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("advqa_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kFixtures = ADVQA_FIXTURES;

}  // namespace

TEST_CASE("evaluate prints em, f1, n") {
  auto r = run({"evaluate", "--dataset", kFixtures + "/squad_mini.json", "--predictions",
                kFixtures + "/predictions_mini.json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["n"] == 12);
  CHECK(j["em"].get<double>() == doctest::Approx(700.0 / 12));
  CHECK(j.size() == 3);
}

TEST_CASE("usage and data errors") {
  CHECK(run({}).code == cli::kExitUsage);
  auto bad = run({"evaluate", "--dataset", "x", "--predictions", "y", "--bogus"});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(run({"nonsense"}).code == cli::kExitUsage);
  auto missing = run({"evaluate", "--dataset", "/no/such.json", "--predictions", "/no/p.json"});
  CHECK(missing.code == cli::kExitData);
  CHECK(missing.err.find("Io") != std::string::npos);
  CHECK(run({"mix", "--clean", "a", "--adversarial", "b", "--out", "c", "--ratio", "70-20"}).code ==
        cli::kExitUsage);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("analyze-errors then report") {
  TempDir tmp;
  auto a = run({"analyze-errors", "--dataset", kFixtures + "/squad_mini.json", "--predictions",
                kFixtures + "/predictions_mini.json", "--out", tmp / "analysis.json", "--csv-dir", tmp / "tables"});
  REQUIRE(a.code == 0);
  CHECK(fs::exists(tmp / "tables/question_type.csv"));
  CHECK(fs::exists(tmp / "tables/pattern_distribution.csv"));
  auto md = run({"report", "--from", tmp / "analysis.json", "--format", "markdown"});
  REQUIRE(md.code == 0);
  CHECK(md.out.find("Type | Total | Correct | Accuracy (%)") != std::string::npos);
  auto md2 = run({"report", "--from", tmp / "analysis.json", "--format", "markdown"});
  CHECK(md2.out == md.out);
  auto csv = run({"report", "--from", tmp / "analysis.json", "--format", "csv", "--figure", tmp / "fig.csv"});
  CHECK(csv.code == 0);
  CHECK(read_file(tmp / "fig.csv").starts_with("pattern,count,percent\r\n"));
  auto xml = run({"report", "--from", tmp / "analysis.json", "--format", "xml"});
  CHECK(xml.code == cli::kExitData);
  CHECK(xml.err.find("UnsupportedFormat") != std::string::npos);
}

TEST_CASE("augment, mine, mix pipeline") {
  TempDir tmp;
  write_file(tmp / "clean.jsonl", write_augmented(synthetic::entity_corpus(200, 1)));
  write_file(tmp / "attacks.conf", "attacks = paraphrase, numeric_attack\nrate = 0.5\nseed = 3\n");
  auto aug = run({"augment", "--input", tmp / "clean.jsonl", "--out", tmp / "aug.jsonl", "--config",
                  tmp / "attacks.conf"});
  REQUIRE(aug.code == 0);
  auto rep = nlohmann::json::parse(aug.out);
  CHECK(rep["attempted"] == 100);
  auto again = run({"augment", "--input", tmp / "clean.jsonl", "--out", tmp / "aug2.jsonl", "--config",
                    tmp / "attacks.conf"});
  CHECK(read_file(tmp / "aug.jsonl") == read_file(tmp / "aug2.jsonl"));

  auto pn = run({"pairs-negation", "--input", tmp / "clean.jsonl", "--out", tmp / "pairs.jsonl", "--seed", "1"});
  CHECK(pn.code == 0);

  auto mn = run({"mine-negatives", "--input", tmp / "clean.jsonl", "--out", tmp / "mined.jsonl", "--negatives",
                 tmp / "negs.json"});
  REQUIRE(mn.code == 0);
  CHECK(nlohmann::json::parse(mn.out)["n_examples"] == 200);

  write_file(tmp / "adv.jsonl", write_augmented(synthetic::entity_corpus(200, 2, "adv", 1.0)));
  auto mx = run({"mix", "--clean", tmp / "clean.jsonl", "--adversarial", tmp / "adv.jsonl", "--ratio", "80-20",
                 "--total", "100", "--seed", "5", "--out", tmp / "mix.jsonl"});
  REQUIRE(mx.code == 0);
  auto stats = nlohmann::json::parse(mx.out);
  CHECK(stats["n_clean"] == 80);
  CHECK(stats["n_adversarial"] == 20);
  auto sw = run({"mix", "--clean", tmp / "clean.jsonl", "--adversarial", tmp / "adv.jsonl", "--total", "100",
                 "--sweep", "--out", tmp / "sweep"});
  CHECK(sw.code == 0);
  CHECK(fs::exists(tmp / "sweep/mix_90-10.jsonl"));
}

TEST_CASE("seed falls back to ADVQA_SEED") {
  TempDir tmp;
  write_file(tmp / "c.jsonl", write_augmented(synthetic::entity_corpus(50, 1)));
  write_file(tmp / "a.jsonl", write_augmented(synthetic::entity_corpus(50, 2, "adv", 1.0)));
  auto mix_with = [&](std::vector<std::string> extra, const std::string& out) {
    std::vector<std::string> args = {"mix", "--clean", tmp / "c.jsonl", "--adversarial", tmp / "a.jsonl",
                                     "--total", "40", "--out", tmp / out};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(run(args).code == 0);
    return read_file(tmp / out);
  };
  ::setenv("ADVQA_SEED", "17", 1);
  auto env = mix_with({}, "env.jsonl");
  ::unsetenv("ADVQA_SEED");
  CHECK(env == mix_with({"--seed", "17"}, "flag.jsonl"));
  CHECK(env != mix_with({}, "zero.jsonl"));
  CHECK(mix_with({}, "zero2.jsonl") == mix_with({"--seed", "0"}, "zero3.jsonl"));
  ::setenv("ADVQA_SEED", "not-a-number", 1);
  CHECK(run({"loss-check", "--instances", "2"}).code == cli::kExitUsage);
  ::unsetenv("ADVQA_SEED");
}

TEST_CASE("loss-check and toy-train") {
  auto lc = run({"loss-check", "--instances", "20"});
  CHECK(lc.code == 0);
  CHECK(lc.out.find("FAIL") == std::string::npos);
  CHECK(lc.out.find("PASS") != std::string::npos);
  TempDir tmp;
  auto tt = run({"toy-train", "--alpha", "0.5", "--epochs", "2", "--n-train", "60", "--n-eval", "20", "--curve",
                 tmp / "curve.csv"});
  REQUIRE(tt.code == 0);
  auto j = nlohmann::json::parse(tt.out);
  CHECK(j["alpha"] == 0.5);
  CHECK(read_file(tmp / "curve.csv").starts_with("epoch,loss\r\n0,"));
}
