#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textcat/corpus.hpp"

namespace textcat {

class KeyValueConfig;

/// Language profile for the minimal-form rule.
struct LinguisticParams {
  std::set<char32_t> vowels;
  /// Multi-character strings counted as a single character.
  std::set<std::string> consonant_clusters;
  std::size_t min_chars = 3;
  /// Joining elements between compound parts (German "s").
  std::set<std::string> formative_elements;
  std::size_t max_affix_len = 5;

  static LinguisticParams german();
  static LinguisticParams english();

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
  bool is_vowel(char32_t cp) const { return vowels.count(cp) != 0; }
};

/// Counted characters: each longest consonant cluster match counts as one.
std::size_t grapheme_length(std::string_view form, const LinguisticParams& params);

/// At least `min_chars` counted characters and at least one vowel.
bool is_valid_form(std::string_view form, const LinguisticParams& params);

struct StopWordDictionary {
  std::set<std::string, std::less<>> words;
  std::uint64_t threshold_used = 0;

  bool contains(std::string_view form) const { return words.find(form) != words.end(); }

  /// One word per line, sorted.
  void write(std::ostream& os) const;
  static StopWordDictionary read(std::istream& is);

  friend bool operator==(const StopWordDictionary&, const StopWordDictionary&) = default;
};

enum class FeatureKind { learned, trigram };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);

/// Ordered feature list; the index of a feature is its vector coordinate.
class FeatureDictionary {
 public:
  struct Entry {
    std::string feature;
    std::uint64_t frequency = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  FeatureDictionary() = default;
  FeatureDictionary(FeatureKind kind, std::vector<Entry> entries);

  FeatureKind kind() const noexcept { return kind_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& feature(std::size_t i) const { return entries_.at(i).feature; }

  /// Coordinate of `feature`, or nullopt.
  std::optional<std::size_t> index_of(std::string_view feature) const;

  /// Longest feature length in code points.
  std::size_t max_feature_length() const noexcept { return max_len_; }

  /// Training-corpus document frequencies, used by idf weighting.
  const std::vector<std::uint64_t>& document_frequencies() const noexcept { return doc_freq_; }
  std::uint64_t document_count() const noexcept { return n_docs_; }
  void set_document_frequencies(std::vector<std::uint64_t> df, std::uint64_t n_docs);

  /// `index<TAB>feature<TAB>frequency` lines.
  void write(std::ostream& os) const;
  static FeatureDictionary read(std::istream& is, FeatureKind kind = FeatureKind::learned);

  friend bool operator==(const FeatureDictionary& a, const FeatureDictionary& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_ && a.doc_freq_ == b.doc_freq_ &&
           a.n_docs_ == b.n_docs_;
  }

 private:
  FeatureKind kind_ = FeatureKind::learned;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_len_ = 0;
  std::vector<std::uint64_t> doc_freq_;
  std::uint64_t n_docs_ = 0;
};

struct AffixSet {
  std::map<std::string, std::uint64_t, std::less<>> prefixes;
  std::map<std::string, std::uint64_t, std::less<>> suffixes;

  bool empty() const noexcept { return prefixes.empty() && suffixes.empty(); }
};

struct LearnConfig {
  /// Absolute corpus count; see stop_fraction for the relative mode.
  std::uint64_t stop_threshold = 100;
  /// When > 0, overrides stop_threshold with ceil(stop_fraction * total tokens).
  double stop_fraction = 0.0;
  std::uint64_t affix_threshold = 50;
  std::uint64_t feature_threshold = 3;
  /// Shortest discovered affix, in code points.
  std::size_t min_affix_len = 2;
  /// Keep at most this many discovered candidates per side (0 = unlimited).
  std::size_t affix_top = 30;
  std::set<std::string> include_prefixes;
  std::set<std::string> include_suffixes;
  /// Never used as affixes, even when frequent.
  std::set<std::string> exclude_affixes;
  LinguisticParams params = LinguisticParams::german();

  void validate() const;
  static LearnConfig from(const KeyValueConfig& kv);
  void write(KeyValueConfig& kv) const;
};

StopWordDictionary find_stop_words(const WordFormList& list, std::uint64_t threshold);

/// Removes every stop word from `list`.
WordFormList remove_stop_words(const WordFormList& list, const StopWordDictionary& stop);

AffixSet find_affixes(const WordFormList& list, const LearnConfig& config);

/// One applied split of `whole` into `part` (a list member) and `rest`.
struct SplitEvent {
  std::string whole;
  std::string part;
  std::string rest;
  std::uint64_t whole_freq = 0;
  std::uint64_t part_freq_before = 0;
  std::uint64_t rest_freq_before = 0;
  std::uint64_t part_freq_after = 0;
  std::uint64_t rest_freq_after = 0;
};

struct SplitStats {
  std::size_t splits = 0;
  std::size_t passes = 0;
  /// Candidate substring tests per pass.
  std::vector<std::uint64_t> comparisons;
  /// Largest list size seen during each pass.
  std::vector<std::size_t> pass_list_size;
};

using SplitObserver = std::function<void(const SplitEvent&)>;

/// Splits complex forms into a list member and a remainder until no split
/// applies. Forms are visited by descending counted length, then
/// lexicographically; a prefix match is preferred over a suffix match and the
/// longest member wins.
WordFormList split_iteratively(const WordFormList& list, const LinguisticParams& params,
                               SplitStats* stats = nullptr,
                               const SplitObserver& observer = {});

/// Shortens each form by the longest listed suffix, then prefix, while the
/// remainder stays valid. Forms that collide are merged.
WordFormList strip_affixes(const WordFormList& list, const AffixSet& affixes,
                           const LinguisticParams& params);

/// Merges F+e and e+F into F when both are listed, e a formative element.
WordFormList merge_formative_variants(const WordFormList& list, const LinguisticParams& params);

/// Forms with frequency >= threshold that satisfy the minimal-form rule.
/// `stop` entries are never selected.
FeatureDictionary select_features(const WordFormList& list, std::uint64_t threshold,
                                  const LinguisticParams& params,
                                  const StopWordDictionary* stop = nullptr);

struct LearnReport {
  std::size_t tokens = 0;
  std::size_t wordforms = 0;
  std::size_t stop_words = 0;
  std::size_t after_stop_removal = 0;
  std::size_t prefixes = 0;
  std::size_t suffixes = 0;
  std::size_t after_split = 0;
  std::size_t after_strip = 0;
  std::size_t after_merge = 0;
  std::size_t features = 0;
  SplitStats split;

  void write(std::ostream& os) const;
};

struct LearnedDictionaries {
  StopWordDictionary stop;
  FeatureDictionary features;
  AffixSet affixes;
  WordFormList final_forms;
  LearnReport report;
};

/// Runs the full dictionary learning chain over the training corpus.
LearnedDictionaries learn_dictionaries(const LabeledCorpus& corpus, const LearnConfig& config);

}  // namespace textcat
