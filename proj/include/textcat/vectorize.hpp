#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "textcat/corpus.hpp"
#include "textcat/lexlearn.hpp"

namespace textcat {

enum class Weighting { binary, frequency, idf };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

/// How a word form maps onto learned features.
enum class MatchPolicy {
  /// Longest contained feature; ties by earliest position, then lexicographic.
  longest,
  /// Every contained feature, ordered by position.
  all,
};

std::string_view to_string(MatchPolicy m);
MatchPolicy parse_match_policy(std::string_view name);

struct FeatureVector {
  std::vector<double> values;
  Weighting weighting = Weighting::binary;

  std::size_t size() const noexcept { return values.size(); }
};

/// Feature strings contained in a single word form. Trigram dictionaries
/// yield the form's padded trigrams that are in the dictionary.
std::vector<std::string> match_features(std::string_view form, const FeatureDictionary& feats,
                                        MatchPolicy policy = MatchPolicy::longest);

/// Tokenizes `text`, drops stop words, replaces each remaining word form by
/// its features and deletes forms without any.
std::vector<std::string> to_feature_text(std::string_view text, const StopWordDictionary& stop,
                                         const FeatureDictionary& feats,
                                         MatchPolicy policy = MatchPolicy::longest);

FeatureVector to_vector(const std::vector<std::string>& feature_text, const FeatureDictionary& feats,
                        Weighting weighting = Weighting::binary);

/// Per-feature count of documents whose feature text contains it.
std::vector<std::uint64_t> document_frequencies(const std::vector<std::vector<std::string>>& feature_texts,
                                                const FeatureDictionary& feats);

/// Boundary-padded character trigrams of one word form, in order.
std::vector<std::string> word_trigrams(std::string_view form);

/// The `m` most frequent padded trigrams over all non-stop word forms.
/// Returns fewer (and sets `*short_by`) when the corpus has fewer distinct
/// trigrams.
FeatureDictionary trigram_features(const LabeledCorpus& corpus, const StopWordDictionary& stop,
                                   std::size_t m, std::size_t* short_by = nullptr);

/// Writes each line of `text` followed by `>> feature feature ...`.
void write_feature_text_dump(std::ostream& os, std::string_view text, const StopWordDictionary& stop,
                             const FeatureDictionary& feats, MatchPolicy policy = MatchPolicy::longest);

/// `doc_id<TAB>label<TAB>coordinates` line.
void write_vector_dump_line(std::ostream& os, std::string_view doc_id, std::string_view label,
                            const FeatureVector& v);

}  // namespace textcat
