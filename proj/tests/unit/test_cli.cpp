#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "atr/synthetic.hpp"
#include "generators.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run atr_cli(const std::string& args, const gen::TempDir& dir) {
  const auto out = dir / "stdout.txt";
  const std::string cmd =
      std::string(ATR_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, gen::slurp(out)};
}

struct Fixture {
  gen::TempDir dir;
  std::string common;

  Fixture() {
    atr::SyntheticOptions o;
    o.documents = 20;
    o.tokens_per_document = 300;
    atr::write_synthetic_dataset(atr::make_synthetic_dataset(o), dir.path());
    std::ofstream(dir / "freq.json")
        << R"({"scorers":[{"method":"TF"},{"method":"CValue"},{"method":"Basic"}],"ranker":{"type":"voting"}})";
    common = "--corpus " + (dir / "corpus.tsv").string() + " --cache-dir " + (dir / "cache").string() + " -q";
  }
};

}  // namespace

TEST_CASE("successful commands exit 0") {
  Fixture f;
  const auto cfg = " --config " + (f.dir / "freq.json").string() + " ";
  const auto cands = atr_cli("candidates" + cfg + f.common, f.dir);
  CHECK(cands.code == 0);
  CHECK(cands.out.find('\t') != std::string::npos);

  const auto rank = atr_cli("rank" + cfg + f.common, f.dir);
  CHECK(rank.code == 0);
  const auto again = atr_cli("rank --threads 1" + cfg + f.common, f.dir);
  CHECK(again.out == rank.out);
  const auto fresh = atr_cli("rank --no-cache --threads 4" + cfg + f.common, f.dir);
  CHECK(fresh.out == rank.out);

  const auto eval = atr_cli("evaluate" + cfg + f.common + " --gold " + (f.dir / "gold.txt").string(), f.dir);
  CHECK(eval.code == 0);
  CHECK(eval.out.rfind("K\t", 0) == 0);
  CHECK(eval.out.find("AvP\t") != std::string::npos);

  CHECK(atr_cli("score" + cfg + f.common + " --out " + (f.dir / "scores").string(), f.dir).code == 0);
  CHECK(std::filesystem::exists(f.dir / "scores" / "CValue.tsv"));
  CHECK(atr_cli("--help", f.dir).code == 0);
}

TEST_CASE("usage and configuration errors exit 1") {
  Fixture f;
  CHECK(atr_cli("", f.dir).code == 1);
  CHECK(atr_cli("frobnicate", f.dir).code == 1);
  CHECK(atr_cli("rank --bogus-flag", f.dir).code == 1);
  {
    std::ofstream(f.dir / "typo.json") << R"({"scorers":[{"method":"Basic","alpa":1}]})";
  }
  CHECK(atr_cli("rank --config " + (f.dir / "typo.json").string() + " " + f.common, f.dir).code == 1);
  // The default config needs a reference corpus; the flag is missing.
  CHECK(atr_cli("rank " + f.common, f.dir).code == 1);
  CHECK(atr_cli("score --config " + (f.dir / "freq.json").string() + " " + f.common, f.dir).code == 1);
}

TEST_CASE("data errors exit 2") {
  Fixture f;
  const auto cfg = " --config " + (f.dir / "freq.json").string() + " ";
  CHECK(atr_cli("rank" + cfg + "--corpus " + (f.dir / "missing.tsv").string(), f.dir).code == 2);
  {
    std::ofstream(f.dir / "broken.tsv") << "#doc a\nonly-one-field\n";
  }
  CHECK(atr_cli("rank --no-cache" + cfg + "--corpus " + (f.dir / "broken.tsv").string(), f.dir).code == 2);
  CHECK(atr_cli("evaluate" + cfg + f.common + " --gold " + (f.dir / "nogold.txt").string(), f.dir).code == 2);
}
