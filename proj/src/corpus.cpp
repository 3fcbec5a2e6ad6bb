#include "atr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "atr/error.hpp"
#include "atr/parallel.hpp"
#include "atr/text.hpp"
#include "embedded_data.hpp"

namespace atr {

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

AnnotatedCorpus::AnnotatedCorpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < documents_.size(); ++i) {
    if (documents_[i].id == documents_[i - 1].id) {
      throw Error("duplicate document id '" + documents_[i].id + "'");
    }
  }
  for (const auto& d : documents_) total_word_count_ += d.token_count();
}

// --- annotated format -------------------------------------------------------

AnnotatedCorpus parse_annotated_corpus(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  Sentence sentence;
  std::string line;
  std::size_t line_no = 0;

  const auto flush_sentence = [&] {
    if (sentence.empty()) return;
    docs.back().sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#doc", 0) == 0 && (line.size() == 4 || line[4] == ' ' || line[4] == '\t')) {
      if (!docs.empty()) flush_sentence();
      const auto id = text::trim(std::string_view(line).substr(4));
      if (id.empty()) throw ParseError(source, line_no, "document marker without an id");
      docs.push_back(Document{std::string(id), {}});
      continue;
    }
    if (text::trim(line).empty()) {
      if (!docs.empty()) flush_sentence();
      continue;
    }
    const auto fields = text::split(line, '\t');
    if (fields.size() < 3) {
      throw ParseError(source, line_no,
                       "expected surface<TAB>lemma<TAB>pos, got " + std::to_string(fields.size()) +
                           " field(s)");
    }
    if (docs.empty()) throw ParseError(source, line_no, "token before the first #doc marker");
    if (fields[1].empty() || fields[2].empty()) {
      throw ParseError(source, line_no, "empty lemma or part-of-speech tag");
    }
    if (text::has_whitespace(fields[1])) throw ParseError(source, line_no, "lemma contains whitespace");
    sentence.push_back(
        Token{std::string(fields[0]), text::ascii_lower(fields[1]), std::string(text::trim(fields[2]))});
  }
  if (!docs.empty()) flush_sentence();

  std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].id == docs[i - 1].id) {
      throw ParseError(source, 0, "duplicate document id '" + docs[i].id + "'");
    }
  }
  AnnotatedCorpus corpus(std::move(docs));
  if (corpus.empty()) throw EmptyCorpusError();
  return corpus;
}

AnnotatedCorpus load_annotated_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read corpus file " + path.string());
  return parse_annotated_corpus(in, path.string());
}

void write_annotated_corpus(std::ostream& out, const AnnotatedCorpus& corpus) {
  for (const auto& doc : corpus.documents()) {
    out << "#doc " << doc.id << '\n';
    for (const auto& sentence : doc.sentences) {
      for (const auto& t : sentence) out << t.surface << '\t' << t.lemma << '\t' << t.pos << '\n';
      out << '\n';
    }
  }
}

void write_annotated_corpus(const std::filesystem::path& path, const AnnotatedCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_annotated_corpus(out, corpus);
}

// --- fallback tagger --------------------------------------------------------

namespace {

struct LexEntry {
  std::string tag;
  std::string lemma;  // empty: derive from the surface
};

class Lexicon {
 public:
  static const Lexicon& instance() {
    static const Lexicon lex;
    return lex;
  }

  const LexEntry* find(const std::string& word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool is_verb(const std::string& word) const {
    const auto* e = find(word);
    return e && e->tag == "VB";
  }

 private:
  Lexicon() {
    for (auto line : text::split(data::lexicon(), '\n')) {
      line = text::trim(line);
      if (line.empty()) continue;
      const auto f = text::split(line, '\t');
      entries_.emplace(std::string(f[0]),
                       LexEntry{std::string(f[1]), f.size() > 2 ? std::string(f[2]) : std::string()});
    }
  }

  std::unordered_map<std::string, LexEntry> entries_;
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

bool is_numeric(std::string_view w) {
  if (w.empty() || !is_digit(w.front())) return false;
  return std::all_of(w.begin(), w.end(), [](char c) { return is_digit(c) || c == '.' || c == ','; });
}

std::string punctuation_tag(std::string_view p) {
  if (p == "." || p == "?" || p == "!") return ".";
  if (p == ",") return ",";
  if (p == ":" || p == ";") return ":";
  if (p == "(" || p == "[" || p == "{") return "-LRB-";
  if (p == ")" || p == "]" || p == "}") return "-RRB-";
  if (p == "\"" || p == "'" || p == "`") return "''";
  if (p == "$") return "$";
  if (p == "#") return "#";
  return "SYM";
}

struct RawToken {
  std::string surface;
  bool word = false;
  bool space_after = true;
};

std::vector<RawToken> split_tokens(std::string_view text) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    RawToken tok;
    if (is_word_byte(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < n) {
        const char d = text[j];
        if (is_word_byte(static_cast<unsigned char>(d))) {
          ++j;
          continue;
        }
        // Hyphen/apostrophe inside a word, decimal point inside a number.
        const bool joiner = (d == '-' || d == '\'') ||
                            (d == '.' && is_digit(text[j - 1]) && j + 1 < n && is_digit(text[j + 1]));
        if (joiner && j + 1 < n && is_word_byte(static_cast<unsigned char>(text[j + 1]))) {
          j += 2;
          continue;
        }
        break;
      }
      tok.surface = std::string(text.substr(i, j - i));
      tok.word = true;
      i = j;
    } else {
      tok.surface = std::string(1, c);
      ++i;
    }
    tok.space_after = i >= n || is_space(text[i]);
    out.push_back(std::move(tok));
  }
  return out;
}

// Lemma and tag for a word token; `initial` marks the first token of a sentence.
Token tag_word(const std::string& surface, bool initial) {
  const auto& lex = Lexicon::instance();
  const std::string lower = text::ascii_lower(surface);

  if (is_numeric(lower)) return {surface, lower, "CD"};
  if (const auto* e = lex.find(lower)) {
    std::string lemma = e->lemma;
    if (lemma.empty()) lemma = e->tag == "NNS" ? lemmatize_noun(lower) : lower;
    return {surface, lemma, e->tag};
  }
  if (!initial && surface[0] >= 'A' && surface[0] <= 'Z') return {surface, lower, "NNP"};

  // Verb inflections are stripped only when the stem is a known verb.
  const auto verb_stem = [&](std::string_view stem) -> std::string {
    const std::string s(stem);
    if (lex.is_verb(s)) return s;
    if (lex.is_verb(s + "e")) return s + "e";
    if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] && lex.is_verb(s.substr(0, s.size() - 1))) {
      return s.substr(0, s.size() - 1);
    }
    return {};
  };
  if (ends_with(lower, "ing") && lower.size() >= 5) {
    if (auto stem = verb_stem(std::string_view(lower).substr(0, lower.size() - 3)); !stem.empty()) {
      return {surface, stem, "VBG"};
    }
    return {surface, lower, "NN"};
  }
  if (ends_with(lower, "ed") && lower.size() >= 4) {
    if (auto stem = verb_stem(std::string_view(lower).substr(0, lower.size() - 2)); !stem.empty()) {
      return {surface, stem, "VBN"};
    }
    return {surface, lower, "VBN"};
  }
  if (ends_with(lower, "s") && lower.size() >= 4 && !ends_with(lower, "ss") && !ends_with(lower, "us") &&
      !ends_with(lower, "is")) {
    const std::string stem = lemmatize_noun(lower);
    if (lex.is_verb(stem)) return {surface, stem, "VBZ"};
    return {surface, stem, "NNS"};
  }
  if (ends_with(lower, "ly") && lower.size() >= 5) return {surface, lower, "RB"};
  for (std::string_view suffix : {"al", "ous", "ive", "ic", "able", "ible", "ful", "less", "ar", "ary"}) {
    if (lower.size() > suffix.size() + 2 && ends_with(lower, suffix)) return {surface, lower, "JJ"};
  }
  return {surface, lower, "NN"};
}

}  // namespace

std::string lemmatize_noun(std::string_view w) {
  std::string s(w);
  if (ends_with(s, "sses")) return s.substr(0, s.size() - 2);
  if (ends_with(s, "ies") && s.size() > 4) return s.substr(0, s.size() - 3) + "y";
  if (ends_with(s, "ss") || ends_with(s, "us") || ends_with(s, "is")) return s;
  if (ends_with(s, "es") && s.size() > 3) return s.substr(0, s.size() - 1);
  if (ends_with(s, "s") && s.size() > 3) return s.substr(0, s.size() - 1);
  return s;
}

Document tokenize_and_tag(std::string_view text, std::string id) {
  Document doc{std::move(id), {}};
  Sentence sentence;
  for (auto& raw : split_tokens(text)) {
    if (raw.word) {
      sentence.push_back(tag_word(raw.surface, sentence.empty()));
    } else {
      const std::string tag = punctuation_tag(raw.surface);
      sentence.push_back(Token{raw.surface, raw.surface, tag});
      const bool terminal = raw.surface == "." || raw.surface == "?" || raw.surface == "!";
      if (terminal && raw.space_after) {
        doc.sentences.push_back(std::move(sentence));
        sentence.clear();
      }
    }
  }
  if (!sentence.empty()) doc.sentences.push_back(std::move(sentence));
  return doc;
}

AnnotatedCorpus load_plain_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  if (files.empty()) throw EmptyCorpusError();

  std::vector<std::string> contents(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::ifstream in(files[i], std::ios::binary);
    if (!in) throw IoError("cannot read " + files[i].string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + files[i].string());
    contents[i] = ss.str();
  }

  std::vector<Document> docs(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    docs[i] = tokenize_and_tag(contents[i], files[i].filename().string());
  });
  AnnotatedCorpus corpus(std::move(docs));
  if (corpus.empty()) throw EmptyCorpusError();
  return corpus;
}

AnnotatedCorpus load_corpus(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_plain_corpus(path);
  return load_annotated_corpus(path);
}

}  // namespace atr
