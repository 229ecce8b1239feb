#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textcat/config.hpp"
#include "textcat/corpus.hpp"
#include "textcat/lexlearn.hpp"
#include "textcat/polyclassify.hpp"
#include "textcat/reduce.hpp"
#include "textcat/vectorize.hpp"

namespace textcat {

/// Everything `train` needs besides the corpus.
struct TrainConfig {
  LearnConfig learn;
  FeatureKind features = FeatureKind::learned;
  std::size_t trigram_count = 2500;
  Weighting weighting = Weighting::binary;
  MatchPolicy match = MatchPolicy::longest;
  ReductionMethod reduction = ReductionMethod::pca;
  /// Only used by the svd method.
  bool svd_center = false;
  std::size_t lprime = 50;
  int order = 1;
  std::optional<double> ridge;

  void validate() const;
  static TrainConfig from(const KeyValueConfig& kv);
  KeyValueConfig to_config() const;
};

/// Stop words and feature dictionary of the configured kind.
struct Dictionaries {
  StopWordDictionary stop;
  FeatureDictionary features;
  /// Learned features only.
  AffixSet affixes;
  LearnReport report;
  /// Trigram features only: how many fewer than requested the corpus had.
  std::size_t trigram_shortfall = 0;
};

Dictionaries build_dictionaries(const LabeledCorpus& corpus, const TrainConfig& config);

inline constexpr int kBundleFormatVersion = 1;

/// All learned sources needed to classify a text.
struct ModelBundle {
  int format_version = kBundleFormatVersion;
  KeyValueConfig config;
  StopWordDictionary stop;
  FeatureDictionary features;
  Weighting weighting = Weighting::binary;
  MatchPolicy match = MatchPolicy::longest;
  ProjectionModel projection;
  ClassifierModel classifier;

  /// Checks the cross-component dimensions. Throws LoadError naming the
  /// inconsistent section.
  void validate() const;
};

struct TrainReport {
  LearnReport learn;
  std::size_t documents = 0;
  std::size_t classes = 0;
  std::size_t feature_count = 0;
  std::size_t lprime = 0;
  std::size_t trigram_shortfall = 0;
  std::vector<std::pair<std::size_t, double>> reconstruction_curve;
  FitReport fit;
  double training_error = 0.0;

  void write(std::ostream& os) const;
};

ModelBundle train(const LabeledCorpus& corpus, const TrainConfig& config, TrainReport* report = nullptr);

struct Classification {
  std::size_t index = 0;
  std::string name;
  std::vector<double> scores;
};

/// Feature text, vector, projection, scores and forced decision.
Classification classify(const ModelBundle& bundle, std::string_view text);

struct EvaluationReport {
  std::vector<std::string> class_names;
  std::size_t total = 0;
  std::size_t errors = 0;
  /// confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;

  double error_rate() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(errors) / static_cast<double>(total); }
  void write(std::ostream& os) const;
};

EvaluationReport evaluate(const ModelBundle& bundle, const LabeledCorpus& test);

/// Error rates over vector lengths (rows) and feature sets (columns).
struct SweepTable {
  std::vector<std::size_t> lprimes;
  std::vector<FeatureKind> feature_sets;
  /// cells[row][col]; nullopt when L′ exceeds what the data supports.
  std::vector<std::vector<std::optional<double>>> cells;
  /// Dictionary size per feature set.
  std::vector<std::size_t> feature_counts;

  void write(std::ostream& os) const;
};

SweepTable sweep(const LabeledCorpus& train_corpus, const LabeledCorpus& test_corpus, const TrainConfig& config,
                 const std::vector<std::size_t>& lprimes, const std::vector<FeatureKind>& feature_sets);

/// Error rate as printed in reports: one decimal and a percent sign.
std::string format_percent(double value);

void save_bundle(const ModelBundle& bundle, std::ostream& os);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(std::istream& is);
ModelBundle load_bundle(const std::filesystem::path& path);

}  // namespace textcat
