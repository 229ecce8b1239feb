#include "textcat/fixture.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "textcat/error.hpp"
#include "textcat/random.hpp"
#include "textcat/utf8.hpp"

namespace textcat {

namespace fs = std::filesystem;

namespace {

constexpr std::array kFunctionWords = {
    "der", "die", "und", "in", "den", "von", "zu", "das", "mit", "sich", "des", "auf", "für",
    "ist", "im", "dem", "nicht", "ein", "eine", "als", "auch", "es", "an", "werden", "aus",
    "bei", "wird", "durch", "nach", "sowie", "über", "zur", "zum", "diese", "oder",
};

constexpr std::array kNeutralWords = {
    "arbeit",    "bericht",   "beschreiben", "ergebnis", "untersuchung", "verfahren",
    "methode",   "system",    "anwendung",   "beitrag",  "darstellung",  "grundlage",
    "vorgestellt", "gezeigt", "entwicklung", "ansatz",
};

constexpr std::array kClassNames = {
    "festkoerperphysik", "nachrichtentechnik", "werkstoffkunde",
    "informationsverarbeitung", "optoelektronik", "mustererkennung",
};

constexpr std::array kOnsets = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t",
                                "w", "z", "sch", "st", "br", "tr", "kl", "gr", "pf", "h"};
constexpr std::array kNuclei = {"a", "e", "i", "o", "u", "ei", "au", "ä", "ö", "ü"};
constexpr std::array kCodas = {"", "", "", "n", "r", "l", "m", "t", "ck", "ng", "nd", "lt"};
constexpr std::array kInflections = {"", "", "", "en", "ung", "er", "e", "ungen", "lich"};

class Vocabulary {
 public:
  explicit Vocabulary(Rng& rng) : rng_(rng) {}

  std::string fresh_stem() {
    for (;;) {
      std::string stem;
      const std::size_t syllables = rng_.below(4) == 0 ? 3 : 2;
      for (std::size_t s = 0; s < syllables; ++s) {
        stem += kOnsets[rng_.below(kOnsets.size())];
        stem += kNuclei[rng_.below(kNuclei.size())];
        if (s + 1 == syllables || rng_.below(3) == 0) stem += kCodas[rng_.below(kCodas.size())];
      }
      if (used_.insert(stem).second) return stem;
    }
  }

  std::vector<std::string> pool(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fresh_stem());
    return out;
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

template <class Seq>
const auto& pick(Rng& rng, const Seq& seq) {
  return seq[rng.below(seq.size())];
}

// Zipf-like rank choice over `n` items.
std::size_t zipf(Rng& rng, std::size_t n) {
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) total += 1.0 / static_cast<double>(r + 1);
  double u = rng.uniform() * total;
  for (std::size_t r = 0; r < n; ++r) {
    u -= 1.0 / static_cast<double>(r + 1);
    if (u <= 0.0) return r;
  }
  return n - 1;
}

std::string content_word(Rng& rng, const std::vector<std::string>& pool,
                         const std::vector<std::string>& partners) {
  const double form = rng.uniform();
  std::string word = pick(rng, pool);
  if (form < 0.3) {
    // Compound with a second stem, sometimes joined by the formative "s".
    if (rng.below(3) == 0) word += "s";
    word += pick(rng, partners);
  }
  if (form >= 0.15) word += pick(rng, kInflections);
  return word;
}

std::string capitalize(const std::string& word) {
  auto cps = utf8::decode(word);
  if (!cps.empty() && cps[0] < 0x80) cps[0] = static_cast<char32_t>(std::toupper(static_cast<int>(cps[0])));
  return utf8::encode(cps);
}

std::string make_document(Rng& rng, const FixtureSpec& spec, std::size_t label,
                          const std::vector<std::vector<std::string>>& class_pools,
                          const std::vector<std::string>& shared) {
  const std::size_t words = spec.min_words + rng.below(spec.max_words - spec.min_words + 1);
  std::string text;
  std::size_t sentence_pos = 0;
  std::size_t sentence_len = 6 + rng.below(7);
  for (std::size_t w = 0; w < words; ++w) {
    const double u = rng.uniform();
    std::string word;
    bool noun = false;
    if (u < spec.function_share) {
      word = kFunctionWords[zipf(rng, kFunctionWords.size())];
    } else if (u < spec.function_share + spec.neutral_share) {
      word = pick(rng, kNeutralWords);
      noun = true;
    } else if (u < spec.function_share + spec.neutral_share + spec.class_share) {
      std::size_t source = label;
      if (spec.classes > 1 && rng.uniform() < spec.crossover) {
        source = (label + 1 + rng.below(spec.classes - 1)) % spec.classes;
      }
      word = content_word(rng, class_pools[source], class_pools[source]);
      noun = true;
    } else {
      word = content_word(rng, shared, shared);
      noun = true;
    }
    if (sentence_pos == 0 || (noun && rng.below(2) == 0)) word = capitalize(word);
    if (!text.empty()) text += (sentence_pos == 0 && rng.below(4) == 0) ? "\n" : " ";
    text += word;
    ++sentence_pos;
    if (sentence_pos == sentence_len || w + 1 == words) {
      text += ".";
      sentence_pos = 0;
      sentence_len = 6 + rng.below(7);
    } else if (rng.below(12) == 0) {
      text += ",";
    }
  }
  text += "\n";
  return text;
}

}  // namespace

Fixture generate_fixture(const FixtureSpec& spec) {
  if (spec.classes < 1) throw ConfigError("fixture needs at least one class");
  if (spec.train_per_class < 1) throw ConfigError("fixture needs training documents");
  if (spec.min_words < 1 || spec.max_words < spec.min_words) throw ConfigError("bad fixture document length");
  Rng rng(spec.seed);
  Vocabulary vocab(rng);
  std::vector<std::vector<std::string>> class_pools;
  for (std::size_t c = 0; c < spec.classes; ++c) class_pools.push_back(vocab.pool(spec.class_stems));
  const auto shared = vocab.pool(spec.shared_stems);

  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    names.push_back(c < kClassNames.size() ? kClassNames[c] : "klasse" + std::to_string(c));
  }

  auto build = [&](std::size_t per_class, const char* prefix) {
    std::vector<Document> docs;
    for (std::size_t c = 0; c < spec.classes; ++c) {
      for (std::size_t d = 0; d < per_class; ++d) {
        char id[32];
        std::snprintf(id, sizeof id, "%s%04zu", prefix, d);
        docs.push_back({names[c] + "/" + id, make_document(rng, spec, c, class_pools, shared), c});
      }
    }
    return docs;
  };
  auto train_docs = build(spec.train_per_class, "train");
  Fixture fixture{LabeledCorpus(std::move(train_docs), names), {}};
  if (spec.test_per_class > 0) fixture.test = LabeledCorpus(build(spec.test_per_class, "test"), names);
  return fixture;
}

void write_fixture(const Fixture& fixture, const fs::path& dir) {
  auto dump = [](const LabeledCorpus& corpus, const fs::path& root) {
    for (const auto& doc : corpus.documents()) {
      const fs::path file = root / (doc.id + ".txt");
      fs::create_directories(file.parent_path());
      std::ofstream out(file, std::ios::binary);
      if (!out) throw InputError("cannot write '" + file.string() + "'");
      out << doc.text;
    }
  };
  dump(fixture.train, dir / "train");
  if (fixture.test.size() > 0) dump(fixture.test, dir / "test");
}

}  // namespace textcat
