#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace textcat {

struct Document {
  std::string id;
  std::string text;
  std::size_t label = 0;
};

/// Ordered set of labeled documents over K named classes.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  LabeledCorpus(std::vector<Document> documents, std::vector<std::string> class_names);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t size() const noexcept { return documents_.size(); }
  std::size_t num_classes() const noexcept { return class_names_.size(); }

  /// Index of `name` in class_names(), or num_classes() if absent.
  std::size_t class_index(std::string_view name) const;

  /// Documents per class label.
  std::vector<std::size_t> class_counts() const;

 private:
  std::vector<Document> documents_;
  std::vector<std::string> class_names_;
};

/// Loads `root/<class>/<doc>.txt` trees or a `path<TAB>class` manifest.
/// Manifest paths are resolved relative to the manifest's directory.
LabeledCorpus load_corpus(const std::filesystem::path& root);

/// Reorders the documents of `corpus` deterministically from `seed` and cuts
/// them into (train, test) with `train_ratio` of each class going to train.
std::pair<LabeledCorpus, LabeledCorpus> split_corpus(const LabeledCorpus& corpus,
                                                     double train_ratio,
                                                     std::uint64_t seed);

/// The characters removed from word forms.
inline constexpr std::u32string_view kPunctuation =
    U".,;:!?\"'()[]{}/\\-–—";

bool is_punctuation(char32_t cp) noexcept;

/// Space, tab, newline, carriage return.
bool is_blank(char32_t cp) noexcept;

/// Splits `text` into lowercase word forms: whitespace separated, punctuation
/// deleted in place, empty tokens dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Word form frequency list.
class WordFormList {
 public:
  using Map = std::map<std::string, std::uint64_t, std::less<>>;

  WordFormList() = default;
  explicit WordFormList(Map entries);

  const Map& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(std::string_view form) const { return entries_.find(form) != entries_.end(); }
  std::uint64_t frequency(std::string_view form) const;
  std::uint64_t total() const;

  /// Adds `count` occurrences of `form`; count 0 is ignored.
  void add(std::string_view form, std::uint64_t count = 1);
  /// Removes `form` and returns its frequency (0 if absent).
  std::uint64_t remove(std::string_view form);

  /// Entries ordered by descending frequency, ties lexicographic.
  std::vector<std::pair<std::string, std::uint64_t>> by_frequency() const;

  /// One `form<TAB>frequency` line per entry, in by_frequency() order.
  void write(std::ostream& os) const;
  static WordFormList read(std::istream& is);

  friend bool operator==(const WordFormList&, const WordFormList&) = default;

 private:
  Map entries_;
};

WordFormList build_wordform_list(const LabeledCorpus& corpus);

}  // namespace textcat
