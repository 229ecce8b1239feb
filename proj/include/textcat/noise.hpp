#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "textcat/corpus.hpp"

namespace textcat {

class KeyValueConfig;

/// Simulated recognition errors: systematic character substitutions and
/// spurious blanks inside words (segmentation errors).
struct NoiseModel {
  struct Substitution {
    char32_t replacement = 0;
    double probability = 0.0;
  };

  std::map<char32_t, Substitution> substitutions;
  /// Probability of inserting a blank after a character inside a word.
  double blank_probability = 0.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Confusions typical of OCR on German text, tuned to roughly 84% word
  /// accuracy on the synthetic fixture.
  static NoiseModel ocr_default(std::uint64_t seed = 0);

  /// Keys: `seed`, `blank_probability`, `substitutions = a>b:p, c>d:q`.
  static NoiseModel from(const KeyValueConfig& kv);
  static NoiseModel load(const std::filesystem::path& path);
};

struct CorruptionResult {
  std::string text;
  std::size_t characters = 0;
  std::size_t substituted = 0;
  std::size_t blanks_inserted = 0;
  std::size_t words = 0;
  std::size_t words_intact = 0;

  double character_accuracy() const {
    return characters == 0 ? 1.0 : 1.0 - static_cast<double>(substituted) / static_cast<double>(characters);
  }
  double word_accuracy() const {
    return words == 0 ? 1.0 : static_cast<double>(words_intact) / static_cast<double>(words);
  }
};

/// Applies `noise` to `text` with a generator seeded from noise.seed.
CorruptionResult corrupt(std::string_view text, const NoiseModel& noise);

struct CorpusCorruption {
  LabeledCorpus corpus;
  std::size_t characters = 0;
  std::size_t substituted = 0;
  std::size_t words = 0;
  std::size_t words_intact = 0;

  double character_accuracy() const {
    return characters == 0 ? 1.0 : 1.0 - static_cast<double>(substituted) / static_cast<double>(characters);
  }
  double word_accuracy() const {
    return words == 0 ? 1.0 : static_cast<double>(words_intact) / static_cast<double>(words);
  }
};

/// Corrupts every document; document i uses a seed derived from
/// (noise.seed, i).
CorpusCorruption corrupt_corpus(const LabeledCorpus& corpus, const NoiseModel& noise);

}  // namespace textcat
