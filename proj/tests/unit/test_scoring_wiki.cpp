#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "atr/error.hpp"
#include "atr/scoring_wiki.hpp"
#include "checks.hpp"
#include "generators.hpp"

using namespace atr;

namespace {

LinkStatsTable links(const std::string& text) {
  std::istringstream in(text);
  return parse_link_stats(in, "links.tsv");
}

EmbeddingModel embeddings(const std::string& text) {
  std::istringstream in(text);
  return parse_embeddings(in, "vectors.txt");
}

std::vector<float> unit(double cos_to_x) {
  return {static_cast<float>(cos_to_x), static_cast<float>(std::sqrt(1.0 - cos_to_x * cos_to_x))};
}

// One document, 20 filler tokens, then machine_learning three times.
AnnotatedCorpus machine_learning_doc(std::size_t lead) {
  Document doc;
  doc.id = "a";
  doc.sentences.push_back(Sentence(lead, Token{"the", "the", "DT"}));
  for (int i = 0; i < 3; ++i) {
    doc.sentences.push_back({{"machine", "machine", "NN"}, {"learning", "learning", "NN"}, {"work", "work", "VB"}});
  }
  doc.sentences.push_back({{"gene", "gene", "NN"}, {"work", "work", "VB"}});
  return AnnotatedCorpus({doc});
}

}  // namespace

TEST_CASE("link statistics parsing") {
  const auto t = links("neural_network\t5\t100\n");
  REQUIRE(t.entries.contains("neural_network"));
  CHECK(t.entries.at("neural_network").hyperlinks == 5);
  CHECK(t.entries.at("neural_network").total == 100);
  CHECK_THROWS_AS(links("cell\t5\t4\n"), ParseError);
  CHECK_THROWS_AS(links("cell\tfive\t10\n"), ParseError);
  CHECK_THROWS_AS(links("cell\t5\n"), ParseError);
  CHECK_THROWS_AS(links("cell\t1\t5\ncell\t1\t5\n"), ParseError);
  try {
    links("cell\t1\t5\ngene\t9\t5\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("link statistics round-trip") {
  LinkStatsTable t;
  t.entries = {{"cell", {3, 10}}, {"gene_expression", {0, 7}}};
  gen::TempDir dir;
  {
    std::ofstream out(dir / "links.tsv");
    write_link_stats(out, t);
  }
  const auto back = load_link_stats(dir / "links.tsv");
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries.at("cell").hyperlinks == 3);
  CHECK(back.entries.at("gene_expression").total == 7);
  CHECK_THROWS_AS(load_link_stats(dir / "missing.tsv"), IoError);
}

TEST_CASE("embedding parsing") {
  const auto e = embeddings("2 3\ncell 1 0 0\nneural_network 0 1 0.5\n");
  CHECK(e.dimension() == 3);
  CHECK(e.size() == 2);
  REQUIRE(e.contains("neural_network"));
  CHECK(e.vector("neural_network")[2] == 0.5f);
  CHECK(e.vector("missing").empty());

  const auto empty = embeddings("0 3\n");
  CHECK(empty.size() == 0);
  CHECK_FALSE(empty.contains("cell"));

  CHECK_THROWS_AS(embeddings("1 3\ncell 1 0\n"), ParseError);
  CHECK_THROWS_AS(embeddings("1 2\ncell 1 x\n"), ParseError);
  CHECK_THROWS_AS(embeddings("2 2\ncell 1 0\n"), ParseError);
  CHECK_THROWS_AS(embeddings("1 2\ncell 1 0\ncell 0 1\n"), ParseError);
  CHECK_THROWS_AS(embeddings("cell 1 0\n"), ParseError);
}

TEST_CASE("embedding round-trip") {
  gen::Rng rng(4);
  const auto set = gen::random_candidate_set(rng, gen::random_corpus(rng), 10);
  const auto e = gen::random_embeddings(rng, set, 4);
  gen::TempDir dir;
  {
    std::ofstream out(dir / "vectors.txt");
    write_embeddings(out, e);
  }
  const auto back = load_embeddings(dir / "vectors.txt");
  REQUIRE(back.tokens() == e.tokens());
  for (const auto& t : e.tokens()) {
    const auto a = e.vector(t);
    const auto b = back.vector(t);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("cosine") {
  const std::vector<float> x{1, 0, 0}, y{0, 2, 0}, z{0, 0, 0}, v{0.3f, -1.2f, 4.0f};
  CHECK(cosine(x, y) == 0.0);
  CHECK(cosine(x, z) == 0.0);
  CHECK(cosine(v, v) == doctest::Approx(1.0));
  CHECK(cosine(x, v) == doctest::Approx(cosine(v, x)));
}

TEST_CASE("wiki presence") {
  const auto set = gen::hand_set({{"cell", {{"a", 2}}}, {"gene", {{"a", 2}}}, {"wall", {{"a", 2}}}}, 1);
  const auto t = links("cell\t5\t100\ngene\t0\t10\n");
  const auto s = score_wiki_presence(set, t);
  CHECK(s.method == "WikiPresence");
  CHECK(s.at("cell") == 1.0);
  CHECK(s.at("gene") == 0.0);
  CHECK(s.at("wall") == 0.0);
}

TEST_CASE("link probability worked values") {
  const auto set = gen::hand_set({{"cell", {{"a", 2}}}, {"gene", {{"a", 2}}}, {"wall", {{"a", 2}}}}, 1);
  auto t = links("cell\t5\t100\ngene\t1\t100\n");
  const auto s = score_link_probability(set, t);
  CHECK(s.at("cell") == doctest::Approx(0.05));
  CHECK(s.at("gene") == 0.0);
  CHECK(s.at("wall") == 0.0);
  t.threshold = 0.01;
  CHECK(score_link_probability(set, t).at("gene") == doctest::Approx(0.01));
}

TEST_CASE("link scorers agree with the oracles; lowering the threshold keeps nonzero scores") {
  gen::Rng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const auto set = gen::random_candidate_set(rng, gen::random_corpus(rng, {3, 4, 12, 10}), 25);
    if (set.empty()) continue;
    auto t = gen::random_link_stats(rng, set);
    const auto lp = score_link_probability(set, t);
    check_scores(score_wiki_presence(set, t), oracle::wiki_presence(set, t));
    check_scores(lp, oracle::link_probability(set, t));
    for (const auto& [name, s] : lp.scores) CHECK((s == 0.0 || (s >= t.threshold && s <= 1.0)));
    t.threshold *= gen::uniform(rng);
    const auto lower = score_link_probability(set, t);
    for (const auto& [name, s] : lp.scores) {
      if (s != 0.0) CHECK(lower.at(name) == s);
    }
  }
}

TEST_CASE("key concept eligibility") {
  auto cfg = KeyConceptConfig{};
  const auto e = embeddings("2 2\nmachine_learning 1 0\ngene 0 1\n");
  auto min1 = CandidateFilterConfig::defaults();
  min1.min_term_frequency = 1;

  const auto early = machine_learning_doc(10);
  const auto set = collect_candidates(early, min1);
  const auto keys = extract_key_concepts(early, set, e, cfg);
  // gene occurs once; machine and learning are not in the vocabulary.
  CHECK(keys == std::vector<std::pair<std::string, int>>{{"machine_learning", 1}});
  CHECK(keys == oracle::key_concepts(early, set, e, cfg));

  const auto late = machine_learning_doc(900);
  const auto late_set = collect_candidates(late, min1);
  CHECK(extract_key_concepts(late, late_set, e, cfg).empty());
}

TEST_CASE("key concepts are counted across documents") {
  gen::Rng rng(62);
  for (int trial = 0; trial < 60; ++trial) {
    const auto corpus = gen::random_corpus(rng, {1 + trial % 5, 6, 12, 6});
    const auto set = gen::random_candidate_set(rng, corpus, 30);
    const auto e = gen::random_embeddings(rng, set);
    KeyConceptConfig cfg;
    cfg.per_document = 1 + static_cast<int>(gen::below(rng, 4));
    cfg.total = 1 + static_cast<int>(gen::below(rng, 8));
    cfg.first_words_limit = 1 + static_cast<int>(gen::below(rng, 40));
    CHECK(extract_key_concepts(corpus, set, e, cfg) == oracle::key_concepts(corpus, set, e, cfg));
  }
}

TEST_CASE("key concept relatedness worked values") {
  EmbeddingModel e(2);
  e.add("target", {1, 0});
  e.add("k1", unit(0.9));
  e.add("k2", unit(0.7));
  e.add("k3", unit(0.1));
  const auto set = gen::hand_set({{"target", {{"a", 2}}}, {"stranger", {{"a", 2}}}}, 1);
  const std::vector<std::pair<std::string, int>> keys{{"k1", 3}, {"k2", 2}, {"k3", 1}};
  KeyConceptConfig cfg;
  cfg.neighbors = 2;
  auto s = score_key_concept_relatedness(set, e, keys, cfg);
  CHECK(s.method == "KeyConceptRelatedness");
  CHECK(s.at("target") == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(s.at("stranger") == 0.0);
  cfg.neighbors = 1;
  CHECK(score_key_concept_relatedness(set, e, keys, cfg).at("target") == doctest::Approx(0.9).epsilon(1e-6));
  cfg.neighbors = 10;
  CHECK(score_key_concept_relatedness(set, e, keys, cfg).at("target") == doctest::Approx(1.7 / 3).epsilon(1e-6));
  const auto none = score_key_concept_relatedness(set, e, {}, cfg);
  CHECK(none.at("target") == 0.0);
}

TEST_CASE("key concept relatedness agrees with the oracle and stays in [-1, 1]") {
  gen::Rng rng(63);
  for (int trial = 0; trial < 60; ++trial) {
    const auto corpus = gen::random_corpus(rng, {3, 6, 12, 8});
    const auto set = gen::random_candidate_set(rng, corpus, 30);
    if (set.empty()) continue;
    const auto e = gen::random_embeddings(rng, set);
    KeyConceptConfig cfg;
    cfg.neighbors = 1 + static_cast<int>(gen::below(rng, 5));
    cfg.first_words_limit = 50;
    const auto keys = extract_key_concepts(corpus, set, e, cfg);
    const auto table = score_key_concept_relatedness(set, e, keys, cfg);
    check_scores(table, oracle::key_concept_relatedness(set, e, keys, cfg.neighbors));
    for (const auto& [name, s] : table.scores) {
      CHECK(s >= -1.0 - 1e-9);
      CHECK(s <= 1.0 + 1e-9);
    }
  }
}
