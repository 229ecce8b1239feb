#include "textcat/noise.hpp"

#include "textcat/config.hpp"
#include "textcat/error.hpp"
#include "textcat/random.hpp"
#include "textcat/utf8.hpp"

namespace textcat {

void NoiseModel::validate() const {
  auto check = [](double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(what + " probability must lie in [0, 1]");
  };
  check(blank_probability, "blank insertion");
  for (const auto& [from, sub] : substitutions) check(sub.probability, "substitution '" + utf8::encode(from) + "'");
}

NoiseModel NoiseModel::ocr_default(std::uint64_t seed) {
  NoiseModel noise;
  noise.seed = seed;
  noise.blank_probability = 0.006;
  noise.substitutions = {
      {U'e', {U'o', 0.04}},  {U'i', {U'l', 0.04}},  {U'n', {U'u', 0.03}},  {U'u', {U'n', 0.03}},
      {U'c', {U'e', 0.04}},  {U'h', {U'b', 0.03}},  {U'a', {U'o', 0.015}}, {U'r', {U'n', 0.015}},
      {U't', {U'f', 0.015}}, {U'm', {U'n', 0.015}},
  };
  return noise;
}

NoiseModel NoiseModel::from(const KeyValueConfig& kv) {
  NoiseModel noise;
  noise.seed = kv.get_uint("seed", 0);
  noise.blank_probability = kv.get_double("blank_probability", 0.0);
  for (const auto& item : kv.get_list("substitutions", {})) {
    // a>b:p
    const auto gt = item.find('>');
    const auto colon = item.rfind(':');
    if (gt == std::string::npos || colon == std::string::npos || colon < gt) {
      throw ConfigError("substitution '" + item + "' is not of the form a>b:p");
    }
    const auto from = utf8::decode(trim(item.substr(0, gt)));
    const auto to = utf8::decode(trim(item.substr(gt + 1, colon - gt - 1)));
    if (from.size() != 1 || to.size() != 1) {
      throw ConfigError("substitution '" + item + "' must map one character to one character");
    }
    double p = 0.0;
    try {
      p = std::stod(item.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("substitution '" + item + "' has a bad probability");
    }
    noise.substitutions[from.front()] = {to.front(), p};
  }
  noise.validate();
  return noise;
}

NoiseModel NoiseModel::load(const std::filesystem::path& path) { return from(KeyValueConfig::load(path)); }

CorruptionResult corrupt(std::string_view text, const NoiseModel& noise) {
  noise.validate();
  Rng rng(noise.seed);
  CorruptionResult result;
  const auto cps = utf8::decode(text);
  std::u32string out;
  out.reserve(cps.size() + cps.size() / 8);
  bool in_word = false;
  bool word_intact = true;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_blank(cp)) {
      if (in_word) {
        ++result.words;
        if (word_intact) ++result.words_intact;
      }
      in_word = false;
      out.push_back(cp);
      continue;
    }
    if (!in_word) {
      in_word = true;
      word_intact = true;
    }
    ++result.characters;
    char32_t emitted = cp;
    if (const auto it = noise.substitutions.find(cp); it != noise.substitutions.end()) {
      if (rng.bernoulli(it->second.probability)) {
        emitted = it->second.replacement;
        if (emitted != cp) {
          ++result.substituted;
          word_intact = false;
        }
      }
    }
    out.push_back(emitted);
    const bool next_in_word = i + 1 < cps.size() && !is_blank(cps[i + 1]);
    if (next_in_word && noise.blank_probability > 0.0 && rng.bernoulli(noise.blank_probability)) {
      out.push_back(U' ');
      ++result.blanks_inserted;
      word_intact = false;
    }
  }
  if (in_word) {
    ++result.words;
    if (word_intact) ++result.words_intact;
  }
  result.text = utf8::encode(out);
  return result;
}

CorpusCorruption corrupt_corpus(const LabeledCorpus& corpus, const NoiseModel& noise) {
  CorpusCorruption out;
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& doc = corpus.documents()[i];
    NoiseModel per_doc = noise;
    // SplitMix64 finalizer decorrelates neighbouring document seeds.
    std::uint64_t z = noise.seed + 0x9E3779B97F4A7C15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    per_doc.seed = z ^ (z >> 31);
    auto r = corrupt(doc.text, per_doc);
    out.characters += r.characters;
    out.substituted += r.substituted;
    out.words += r.words;
    out.words_intact += r.words_intact;
    docs.push_back({doc.id, std::move(r.text), doc.label});
  }
  out.corpus = LabeledCorpus(std::move(docs), corpus.class_names());
  return out;
}

}  // namespace textcat
