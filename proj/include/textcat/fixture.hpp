#pragma once

#include <cstdint>
#include <filesystem>

#include "textcat/corpus.hpp"

namespace textcat {

/// Parameters of the synthetic German-like corpus: every class owns a
/// planted stem vocabulary, all classes share function words, neutral domain
/// words and a filler vocabulary. Stems combine into compounds (with and
/// without the joining "s") and take inflectional suffixes.
struct FixtureSpec {
  std::size_t classes = 3;
  std::size_t train_per_class = 100;
  std::size_t test_per_class = 30;
  std::size_t class_stems = 60;
  std::size_t shared_stems = 120;
  std::size_t min_words = 40;
  std::size_t max_words = 70;
  /// Token mix; the remainder is shared filler.
  double function_share = 0.35;
  double neutral_share = 0.12;
  double class_share = 0.25;
  /// Chance that a class token is borrowed from another class.
  double crossover = 0.15;
  std::uint64_t seed = 42;
};

struct Fixture {
  LabeledCorpus train;
  LabeledCorpus test;
};

Fixture generate_fixture(const FixtureSpec& spec);

/// Writes `dir/train/<class>/<doc>.txt` and `dir/test/<class>/<doc>.txt`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace textcat
