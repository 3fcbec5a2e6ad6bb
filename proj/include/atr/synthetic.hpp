#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "atr/corpus.hpp"
#include "atr/scoring_reference.hpp"
#include "atr/scoring_wiki.hpp"

namespace atr {

/// Pseudo-word domain corpus with planted multiword terms, and matching
/// resources: reference frequencies that favour the general words, link
/// statistics that favour the planted terms, and embeddings with one cluster
/// per vocabulary. Fully determined by the options.
struct SyntheticOptions {
  int documents = 100;
  int tokens_per_document = 500;
  int domain_terms = 60;
  int general_words = 120;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  AnnotatedCorpus corpus;
  ReferenceTable reference;
  LinkStatsTable link_stats;
  EmbeddingModel embeddings;
  std::vector<std::string> gold;  // canonical planted terms
};

SyntheticDataset make_synthetic_dataset(const SyntheticOptions& options = {});

/// Writes corpus.tsv, reference.tsv, links.tsv, embeddings.txt and gold.txt.
void write_synthetic_dataset(const SyntheticDataset& data, const std::filesystem::path& dir);

}  // namespace atr
