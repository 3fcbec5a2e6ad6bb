#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace atr {

struct Token {
  std::string surface;
  std::string lemma;  // lowercase, non-empty, no whitespace
  std::string pos;    // Penn-style tag

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

struct Document {
  std::string id;
  std::vector<Sentence> sentences;

  std::size_t token_count() const;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Immutable after construction. Documents are kept in ascending id order.
class AnnotatedCorpus {
 public:
  AnnotatedCorpus() = default;
  /// Sorts documents by id; throws atr::Error on duplicate ids.
  explicit AnnotatedCorpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t document_count() const { return documents_.size(); }
  std::size_t total_word_count() const { return total_word_count_; }
  bool empty() const { return total_word_count_ == 0; }

  friend bool operator==(const AnnotatedCorpus&, const AnnotatedCorpus&) = default;

 private:
  std::vector<Document> documents_;
  std::size_t total_word_count_ = 0;
};

/// Reads the tab-separated annotated format:
///   #doc <id>
///   surface<TAB>lemma<TAB>pos
///   <blank line ends a sentence>
/// Throws ParseError (with line number) on malformed lines and
/// EmptyCorpusError when the file holds no tokens.
AnnotatedCorpus load_annotated_corpus(const std::filesystem::path& path);
AnnotatedCorpus parse_annotated_corpus(std::istream& in, const std::string& source = "<stream>");

void write_annotated_corpus(std::ostream& out, const AnnotatedCorpus& corpus);
void write_annotated_corpus(const std::filesystem::path& path, const AnnotatedCorpus& corpus);

/// Every *.txt file in `dir` becomes one document (id = file name) run through
/// tokenize_and_tag. Files are tagged in parallel.
AnnotatedCorpus load_plain_corpus(const std::filesystem::path& dir);

/// Built-in fallback tokenizer, lemmatizer and lexicon tagger.
Document tokenize_and_tag(std::string_view text, std::string id = {});

/// Noun-style lemma of a lowercase word ("networks" -> "network"). Exposed for
/// lemmatizing gold-standard files with the same rules as the tagger.
std::string lemmatize_noun(std::string_view lowercase_word);

/// Loads either format: a directory is read as plain text, a file as annotated.
AnnotatedCorpus load_corpus(const std::filesystem::path& path);

}  // namespace atr
