#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "textcat/error.hpp"
#include "textcat/random.hpp"
#include "textcat/vectorize.hpp"

using namespace textcat;
using Strings = std::vector<std::string>;

namespace {

FeatureDictionary dict(std::initializer_list<const char*> features) {
  std::vector<FeatureDictionary::Entry> entries;
  std::uint64_t f = 100;
  for (const char* s : features) entries.push_back({s, f--});
  return FeatureDictionary(FeatureKind::learned, std::move(entries));
}

StopWordDictionary stops(std::initializer_list<const char*> words) {
  StopWordDictionary s;
  for (const char* w : words) s.words.insert(w);
  return s;
}

}  // namespace

TEST_CASE("longest contained feature") {
  const auto feats = dict({"halb", "leiter", "technik", "halbleiter"});
  CHECK(match_features("halbleitertechnik", feats) == Strings{"halbleiter"});
  CHECK(match_features("leitertechnik", feats) == Strings{"technik"});
  CHECK(match_features("halbtier", dict({"ha", "lb", "al"})) == Strings{"ha"});
  CHECK(match_features("wasser", feats).empty());
  CHECK(match_features("halbleitertechnik", feats, MatchPolicy::all) ==
        Strings{"halb", "halbleiter", "leiter", "technik"});

  const auto small = dict({"halb", "leiter", "technik"});
  CHECK(match_features("halbleitertechnik", small) == Strings{"technik"});
}

TEST_CASE("longest match agrees with the brute-force matcher") {
  Rng rng(17);
  const std::u32string alphabet = U"abcäö";
  auto word = [&](std::size_t lo, std::size_t hi) {
    std::u32string s;
    const auto n = lo + rng.below(hi - lo + 1);
    for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    return utf8::encode(s);
  };
  for (int t = 0; t < 200; ++t) {
    std::set<std::string> fs;
    while (fs.size() < 8) fs.insert(word(1, 4));
    const Strings features(fs.begin(), fs.end());
    std::vector<FeatureDictionary::Entry> entries;
    for (const auto& f : features) entries.push_back({f, 5});
    const FeatureDictionary feats(FeatureKind::learned, entries);
    for (int w = 0; w < 20; ++w) {
      const auto form = word(1, 10);
      const auto expected = oracle::longest_feature(form, features);
      const auto got = match_features(form, feats);
      if (expected.empty()) {
        CHECK(got.empty());
      } else {
        CHECK(got == Strings{expected});
      }
      std::set<std::string> all_expected;
      for (const auto& f : features) {
        if (form.find(f) != std::string::npos) all_expected.insert(f);
      }
      const auto all = match_features(form, feats, MatchPolicy::all);
      CHECK(std::set<std::string>(all.begin(), all.end()) == all_expected);
      CHECK(all.size() == all_expected.size());
    }
  }
}

TEST_CASE("to_feature_text screens stop words and drops unmatched forms") {
  const auto feats = dict({"halb", "leiter", "technik"});
  const auto stop = stops({"die", "halbleiter"});
  CHECK(to_feature_text("Die Halbleiter-Technik, die Wasser.", stop, feats) == Strings{"technik"});
  CHECK(to_feature_text("die die", stop, feats).empty());
  CHECK(to_feature_text("Halbleiter", stops({}), feats) == Strings{"leiter"});
  CHECK(to_feature_text("", stop, feats).empty());
}

TEST_CASE("to_vector weightings") {
  const auto feats = dict({"haus", "tier", "bau"});
  CHECK(to_vector({}, feats).values == std::vector<double>{0, 0, 0});
  CHECK(to_vector({"haus", "haus"}, feats, Weighting::binary).values == std::vector<double>{1, 0, 0});
  CHECK(to_vector({"haus", "haus", "bau"}, feats, Weighting::frequency).values == std::vector<double>{2, 0, 1});
  CHECK_THROWS_AS(to_vector({"zelt"}, feats), InputError);
  CHECK_THROWS_AS(to_vector({"haus"}, feats, Weighting::idf), ConfigError);

  auto with_df = feats;
  with_df.set_document_frequencies({2, 4, 1}, 4);
  const auto v = to_vector({"haus", "haus", "tier", "bau"}, with_df, Weighting::idf);
  CHECK(v.values[0] == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(v.values[1] == 0.0);
  CHECK(v.values[2] == doctest::Approx(std::log(4.0)));
}

TEST_CASE("vector invariants on random texts") {
  const auto feats = dict({"haus", "tier", "bau", "werk", "stoff"});
  const auto stop = stops({"und", "der"});
  const Strings words = {"haus", "tierbau", "werkstoff", "und", "der", "zelt", "Hausbau", "stoffe"};
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += words[rng.below(words.size())] + " ";
    const auto ft = to_feature_text(text, stop, feats);
    const auto bin = to_vector(ft, feats, Weighting::binary);
    const auto freq = to_vector(ft, feats, Weighting::frequency);
    REQUIRE(bin.size() == feats.size());
    for (std::size_t i = 0; i < feats.size(); ++i) {
      CHECK(bin.values[i] == (freq.values[i] > 0 ? 1.0 : 0.0));
      if (bin.values[i] == 1.0) {
        bool contained = false;
        for (const auto& form : tokenize(text)) {
          contained |= !stop.contains(form) && form.find(feats.feature(i)) != std::string::npos;
        }
        CHECK(contained);
      }
    }
    CHECK(to_vector(to_feature_text(text + " und der", stop, feats), feats).values == bin.values);
    CHECK(to_vector(to_feature_text(text, stop, feats), feats).values == bin.values);
  }
}

TEST_CASE("document frequencies") {
  const auto feats = dict({"haus", "tier"});
  const std::vector<Strings> texts = {{"haus", "haus"}, {"tier"}, {"haus", "tier"}};
  CHECK(document_frequencies(texts, feats) == std::vector<std::uint64_t>{2, 2});
}

TEST_CASE("trigrams") {
  CHECK(word_trigrams("haus") == Strings{"_ha", "hau", "aus", "us_"});
  CHECK(word_trigrams("a") == Strings{"_a_"});
  CHECK(word_trigrams("tür") == oracle::trigrams("tür"));
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::u32string s;
    const auto n = 1 + rng.below(9);
    for (std::size_t i = 0; i < n; ++i) s.push_back(U"aäbß"[rng.below(4)]);
    CHECK(word_trigrams(utf8::encode(s)) == oracle::trigrams(utf8::encode(s)));
  }

  const LabeledCorpus corpus({{"d1", "Haus Haus und Maus", 0}, {"d2", "Laus", 1}}, {"a", "b"});
  std::size_t short_by = 0;
  const auto tri = trigram_features(corpus, stops({"und"}), 2, &short_by);
  CHECK(short_by == 0);
  REQUIRE(tri.size() == 2);
  CHECK(tri.feature(0) == "aus");
  CHECK(tri.feature(1) == "us_");
  CHECK(tri.kind() == FeatureKind::trigram);

  const auto all = trigram_features(corpus, stops({"und"}), 100, &short_by);
  CHECK(all.size() == 8);
  CHECK(short_by == 92);
  CHECK_FALSE(all.index_of("_un"));
  CHECK(match_features("haus", all) == Strings{"_ha", "hau", "aus", "us_"});
  CHECK_THROWS_AS(trigram_features(corpus, {}, 0), ConfigError);
}

TEST_CASE("debug dumps") {
  const auto feats = dict({"halb", "leiter", "technik"});
  std::ostringstream os;
  write_feature_text_dump(os, "Halbleiter und Technik\nnichts", stops({"und"}), feats);
  CHECK(os.str() == "Halbleiter und Technik\n>> leiter technik\nnichts\n>>\n");
  std::ostringstream vs;
  write_vector_dump_line(vs, "a/doc1", "a", to_vector({"halb"}, feats));
  CHECK(vs.str() == "a/doc1\ta\t1 0 0\n");
}

TEST_CASE("enum names") {
  CHECK(parse_weighting("idf") == Weighting::idf);
  CHECK(to_string(Weighting::frequency) == "frequency");
  CHECK(parse_match_policy("all") == MatchPolicy::all);
  CHECK_THROWS_AS(parse_weighting("tfidf"), ConfigError);
  CHECK_THROWS_AS(parse_match_policy("first"), ConfigError);
}
