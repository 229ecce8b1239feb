#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "textcat/corpus.hpp"
#include "textcat/error.hpp"
#include "textcat/random.hpp"
#include "textcat/utf8.hpp"

using namespace textcat;
using Tokens = std::vector<std::string>;

TEST_CASE("utf8 round trip and validation") {
  const std::string s = "Größe – Œuvre €";
  CHECK(utf8::valid(s));
  CHECK(utf8::encode(utf8::decode(s)) == s);
  CHECK(utf8::length("äöü") == 3);
  CHECK_FALSE(utf8::valid("\xC3"));
  CHECK_FALSE(utf8::valid("\xC0\xAF"));        // overlong
  CHECK_FALSE(utf8::valid("\xED\xA0\x80"));    // surrogate
  CHECK(utf8::boundaries("aä") == std::vector<std::size_t>{0, 1, 3});
  CHECK(utf8::to_lower("ÄÖÜ ÀÉ Ÿ Ł") == "äöü àé ÿ ł");
  CHECK(utf8::to_lower("×") == "×");
  CHECK(utf8::to_lower("ß") == "ß");
}

TEST_CASE("tokenize examples") {
  CHECK(tokenize("Die Arbeit, beschreibt.") == Tokens{"die", "arbeit", "beschreibt"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Halbleiter-Technik") == Tokens{"halbleitertechnik"});
  CHECK(tokenize("  a\tb\r\nc  ") == Tokens{"a", "b", "c"});
  CHECK(tokenize("(\"x\") -- ...") == Tokens{"x"});
  CHECK(tokenize("Über—Größe 1998") == Tokens{"übergröße", "1998"});
  CHECK(tokenize("a/b\\c [d] {e} f–g h!? i;j:k") == Tokens{"abc", "d", "e", "fg", "h", "ijk"});
}

TEST_CASE("tokenize properties on random text") {
  const std::u32string alphabet = U"aBcÄöß .,;:!?\"'()[]{}/\\-–—\t\n\rxyZ";
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::u32string text;
    const auto n = rng.below(40);
    for (std::uint64_t i = 0; i < n; ++i) text.push_back(alphabet[rng.below(alphabet.size())]);
    const auto tokens = tokenize(utf8::encode(text));
    std::string joined;
    for (const auto& t : tokens) {
      CHECK_FALSE(t.empty());
      for (char32_t cp : utf8::decode(t)) {
        CHECK_FALSE(is_blank(cp));
        CHECK_FALSE(is_punctuation(cp));
        CHECK(utf8::to_lower(cp) == cp);
      }
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    CHECK(tokenize(joined) == tokens);
  }
}

TEST_CASE("build_wordform_list counts tokens across documents") {
  const LabeledCorpus one({{"d1", "die die arbeit", 0}}, {"a"});
  const auto list = build_wordform_list(one);
  CHECK(list.size() == 2);
  CHECK(list.frequency("die") == 2);
  CHECK(list.frequency("arbeit") == 1);

  const LabeledCorpus two({{"d1", "haus", 0}, {"d2", "haus tier", 0}}, {"a"});
  const auto l2 = build_wordform_list(two);
  CHECK(l2.frequency("haus") == 2);
  CHECK(l2.frequency("tier") == 1);

  const LabeledCorpus ocr({{"d1", "dio Arbeit die dio", 0}}, {"a"});
  CHECK(build_wordform_list(ocr).frequency("dio") == 2);

  std::size_t tokens = 0;
  for (const auto& d : ocr.documents()) tokens += tokenize(d.text).size();
  CHECK(build_wordform_list(ocr).total() == tokens);
}

TEST_CASE("WordFormList serialization order and round trip") {
  WordFormList list;
  list.add("b", 3);
  list.add("a", 3);
  list.add("c", 5);
  list.add("z", 0);
  CHECK_FALSE(list.contains("z"));
  std::ostringstream os;
  list.write(os);
  CHECK(os.str() == "c\t5\na\t3\nb\t3\n");
  std::istringstream is(os.str());
  CHECK(WordFormList::read(is) == list);
  std::istringstream bad("a 3\n");
  CHECK_THROWS_AS(WordFormList::read(bad), InputError);
  CHECK(list.remove("a") == 3);
  CHECK(list.remove("a") == 0);
}

TEST_CASE("LabeledCorpus invariants") {
  CHECK_THROWS_AS(LabeledCorpus({}, {"a"}), InputError);
  CHECK_THROWS_AS(LabeledCorpus({{"d", "x", 0}}, {}), InputError);
  CHECK_THROWS_AS(LabeledCorpus({{"d", "x", 1}}, {"a"}), InputError);
  CHECK_THROWS_AS(LabeledCorpus({{"d", "x", 0}, {"d", "y", 0}}, {"a"}), InputError);
  const LabeledCorpus c({{"d1", "x", 1}, {"d2", "y", 0}, {"d3", "z", 1}}, {"a", "b"});
  CHECK(c.class_counts() == std::vector<std::size_t>{1, 2});
  CHECK(c.class_index("b") == 1);
  CHECK(c.class_index("q") == 2);
}

TEST_CASE("load_corpus from a directory tree") {
  testutil::TempDir dir("tree");
  testutil::write_file(dir.path() / "a" / "one.txt", "Erster Text.");
  testutil::write_file(dir.path() / "a" / "two.txt", "Zweiter Text.");
  testutil::write_file(dir.path() / "b" / "three.txt", "Dritter Text.");
  testutil::write_file(dir.path() / "b" / "notes.md", "ignored");
  const auto corpus = load_corpus(dir.path());
  CHECK(corpus.num_classes() == 2);
  CHECK(corpus.size() == 3);
  CHECK(corpus.class_names() == Tokens{"a", "b"});
  CHECK(corpus.documents()[0].id == "a/one");
  CHECK(corpus.documents()[0].text == "Erster Text.");
  CHECK(corpus.documents()[2].label == 1);
}

TEST_CASE("load_corpus errors") {
  testutil::TempDir dir("errors");
  CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
  CHECK_THROWS_AS(load_corpus(dir.path() / "missing"), InputError);
  testutil::write_file(dir.path() / "a" / "bad.txt", "ok \xFF\xFE");
  try {
    load_corpus(dir.path());
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
  }
}

TEST_CASE("load_corpus from a manifest with six classes") {
  testutil::TempDir dir("manifest");
  std::string manifest = "# six subject areas\n";
  for (int c = 0; c < 6; ++c) {
    const std::string rel = "docs/d" + std::to_string(c) + ".txt";
    testutil::write_file(dir.path() / rel, "text " + std::to_string(c));
    manifest += rel + "\tclass" + std::to_string(5 - c) + "\n";
  }
  testutil::write_file(dir.path() / "train.tsv", manifest);
  const auto corpus = load_corpus(dir.path() / "train.tsv");
  CHECK(corpus.num_classes() == 6);
  CHECK(corpus.size() == 6);
  CHECK(corpus.class_names().front() == "class5");
  CHECK(corpus.documents()[3].text == "text 3");

  testutil::write_file(dir.path() / "broken.tsv", "docs/d0.txt\n");
  CHECK_THROWS_AS(load_corpus(dir.path() / "broken.tsv"), InputError);
  testutil::write_file(dir.path() / "dangling.tsv", "docs/none.txt\tx\n");
  CHECK_THROWS_AS(load_corpus(dir.path() / "dangling.tsv"), InputError);
}

TEST_CASE("split_corpus is stratified and deterministic") {
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) docs.push_back({"a" + std::to_string(i), "x", 0});
  for (int i = 0; i < 10; ++i) docs.push_back({"b" + std::to_string(i), "y", 1});
  const LabeledCorpus corpus(docs, {"a", "b"});
  const auto [train, test] = split_corpus(corpus, 0.7, 99);
  CHECK(train.class_counts() == std::vector<std::size_t>{14, 7});
  CHECK(test.class_counts() == std::vector<std::size_t>{6, 3});
  const auto again = split_corpus(corpus, 0.7, 99);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(train.documents()[i].id == again.first.documents()[i].id);
  const auto other = split_corpus(corpus, 0.7, 100);
  bool differs = false;
  for (std::size_t i = 0; i < train.size(); ++i) differs |= train.documents()[i].id != other.first.documents()[i].id;
  CHECK(differs);
  CHECK_THROWS_AS(split_corpus(corpus, 1.0, 1), ConfigError);
}
