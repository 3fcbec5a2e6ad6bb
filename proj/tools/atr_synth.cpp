// Writes a synthetic corpus with matching resources and gold terms.

#include <CLI11.hpp>

#include <iostream>

#include "atr/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic term-recognition dataset"};
  atr::SyntheticOptions opt;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--documents", opt.documents, "Number of documents");
  app.add_option("--tokens", opt.tokens_per_document, "Approximate tokens per document");
  app.add_option("--terms", opt.domain_terms, "Number of planted terms");
  app.add_option("--seed", opt.seed, "Random seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    atr::write_synthetic_dataset(atr::make_synthetic_dataset(opt), out);
  } catch (const std::exception& e) {
    std::cerr << "atr-synth: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
