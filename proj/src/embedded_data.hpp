#pragma once

#include <string_view>

namespace atr::data {

/// "word<TAB>tag[<TAB>lemma]" lines; generated from data/lexicon.tsv.
std::string_view lexicon();

/// SMART stop list, one word per line; generated from data/smart_stopwords.txt.
std::string_view smart_stop_words();

}  // namespace atr::data
