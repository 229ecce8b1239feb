#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "textcat/error.hpp"
#include "textcat/fixture.hpp"
#include "textcat/pipeline.hpp"

using namespace textcat;
namespace fs = std::filesystem;

namespace {

const Fixture& small_fixture() {
  static const Fixture fx = [] {
    FixtureSpec spec;
    spec.train_per_class = 40;
    spec.test_per_class = 10;
    spec.seed = 7;
    return generate_fixture(spec);
  }();
  return fx;
}

TrainConfig small_config() {
  TrainConfig config;
  config.learn.stop_threshold = 40;
  config.lprime = 20;
  return config;
}

std::string saved(const ModelBundle& bundle) {
  std::ostringstream os;
  save_bundle(bundle, os);
  return os.str();
}

ModelBundle reload(const std::string& text) {
  std::istringstream is(text);
  return load_bundle(is);
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("train and evaluate on a small fixture") {
  TrainReport report;
  const auto bundle = train(small_fixture().train, small_config(), &report);
  CHECK(report.documents == 120);
  CHECK(report.classes == 3);
  CHECK(report.lprime == 20);
  CHECK(report.feature_count == bundle.features.size());
  CHECK(bundle.projection.basis.cols() == 20);
  CHECK(bundle.classifier.num_classes() == 3);
  CHECK(report.training_error < 10.0);
  REQUIRE_FALSE(report.reconstruction_curve.empty());
  for (std::size_t i = 1; i < report.reconstruction_curve.size(); ++i) {
    CHECK(report.reconstruction_curve[i].second <= report.reconstruction_curve[i - 1].second + 1e-9);
  }

  const auto eval = evaluate(bundle, small_fixture().test);
  CHECK(eval.total == 30);
  std::size_t sum = 0;
  for (const auto& row : eval.confusion) {
    for (auto c : row) sum += c;
  }
  CHECK(sum == 30);
  CHECK(eval.error_rate() < 20.0);

  const auto& doc = small_fixture().test.documents().front();
  const auto c = classify(bundle, doc.text);
  CHECK(c.scores.size() == 3);
  CHECK(c.name == bundle.classifier.class_names[c.index]);

  std::ostringstream os;
  eval.write(os);
  CHECK(os.str().rfind("error rate\t", 0) == 0);
}

TEST_CASE("texts without features land on the projected zero vector") {
  const auto bundle = train(small_fixture().train, small_config());
  const auto empty = classify(bundle, "");
  const auto stops = classify(bundle, "der die und das");
  const auto unknown = classify(bundle, "xyz qqq");
  CHECK(empty.scores == stops.scores);
  CHECK(empty.scores == unknown.scores);
  CHECK(empty.index == stops.index);
}

TEST_CASE("training configuration errors") {
  auto config = small_config();
  config.lprime = 100000;
  CHECK_THROWS_AS(train(small_fixture().train, config), ConfigError);
  config = small_config();
  config.lprime = 0;
  CHECK_THROWS_AS(train(small_fixture().train, config), ConfigError);
  config = small_config();
  config.order = 4;
  CHECK_THROWS_AS(train(small_fixture().train, config), ConfigError);

  const auto kv = small_config().to_config();
  const auto back = TrainConfig::from(kv);
  CHECK(back.lprime == 20);
  CHECK(back.learn.stop_threshold == 40);
  CHECK(back.to_config().values() == kv.values());
}

TEST_CASE("evaluation rejects unknown labels") {
  const auto bundle = train(small_fixture().train, small_config());
  const LabeledCorpus other({{"x", "Text", 0}}, {"astronomie"});
  CHECK_THROWS_AS(evaluate(bundle, other), InputError);
}

TEST_CASE("bundle round trip") {
  for (auto kind : {FeatureKind::learned, FeatureKind::trigram}) {
    auto config = small_config();
    config.features = kind;
    config.trigram_count = 300;
    config.weighting = Weighting::idf;
    const auto bundle = train(small_fixture().train, config);
    const auto text = saved(bundle);
    const auto loaded = reload(text);
    CHECK(saved(loaded) == text);

    std::ostringstream a;
    std::ostringstream b;
    evaluate(bundle, small_fixture().test).write(a);
    evaluate(loaded, small_fixture().test).write(b);
    CHECK(a.str() == b.str());
  }

  testutil::TempDir dir("bundle");
  const auto bundle = train(small_fixture().train, small_config());
  save_bundle(bundle, dir.path() / "m.bundle");
  CHECK(saved(load_bundle(dir.path() / "m.bundle")) == saved(bundle));
  CHECK_THROWS_AS(load_bundle(dir.path() / "missing.bundle"), InputError);
}

TEST_CASE("corrupted bundles name the failing section") {
  const auto bundle = train(small_fixture().train, small_config());
  const auto text = saved(bundle);

  auto expect_section = [](const std::string& broken, const std::string& section) {
    try {
      reload(broken);
      FAIL("expected a load error");
    } catch (const LoadError& e) {
      CHECK(e.section() == section);
    }
  };

  const std::string l = "L = " + std::to_string(bundle.projection.basis.rows()) + "\n";
  expect_section(replace_line(text, l, "L = 3\n"), "projection");
  expect_section(replace_line(text, "version = 1\n", "version = 2\n"), "header");
  expect_section(text.substr(0, text.find("[classifier]") + 20), "classifier");
  expect_section(replace_line(text, "L_prime = 20\nX = ", "L_prime = 19\nX = "), "classifier");
  expect_section(replace_line(text, "[stopwords]", "[stopword]"), "stopwords");
  expect_section("", "header");
}

TEST_CASE("sweep table shape") {
  const auto& fx = small_fixture();
  auto config = small_config();
  config.trigram_count = 400;
  const std::vector<std::size_t> lps{5, 10, 200};
  const auto table = sweep(fx.train, fx.test, config, lps, {FeatureKind::trigram, FeatureKind::learned});
  CHECK(table.lprimes == lps);
  REQUIRE(table.cells.size() == 3);
  for (const auto& row : table.cells) CHECK(row.size() == 2);
  CHECK(table.cells[0][0].has_value());
  CHECK(table.cells[1][1].has_value());
  // 200 exceeds the 120 training documents.
  CHECK_FALSE(table.cells[2][0].has_value());
  CHECK_FALSE(table.cells[2][1].has_value());

  // A sweep cell equals training the full pipeline at that L'.
  config.lprime = 10;
  const auto direct = evaluate(train(fx.train, config), fx.test);
  CHECK(*table.cells[1][1] == doctest::Approx(direct.error_rate()));

  std::ostringstream os;
  table.write(os);
  const auto out = os.str();
  CHECK(out.find("vector length") != std::string::npos);
  CHECK(out.find("tri-gram features") != std::string::npos);
  CHECK(out.find("learned features") != std::string::npos);
  CHECK(out.find("n/a") != std::string::npos);
  CHECK(format_percent(17.26) == "17.3%");
  CHECK(format_percent(0.0) == "0.0%");
}

TEST_CASE("shipped fixture and golden dictionaries") {
  const fs::path root = TEXTCAT_TEST_FIXTURES;
  const auto fx = generate_fixture(FixtureSpec{});
  testutil::TempDir dir("fixture");
  write_fixture(fx, dir.path());
  for (const auto& entry : fs::recursive_directory_iterator(root / "synthetic")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "synthetic");
    CHECK(testutil::read_file(dir.path() / rel) == testutil::read_file(entry.path()));
  }

  const auto corpus = load_corpus(root / "synthetic" / "train");
  CHECK(corpus.size() == 300);
  const auto dicts = build_dictionaries(corpus, TrainConfig{});
  std::ostringstream stop;
  dicts.stop.write(stop);
  std::ostringstream features;
  dicts.features.write(features);
  std::ostringstream affixes;
  for (const auto& [a, f] : dicts.affixes.prefixes) affixes << "prefix\t" << a << '\t' << f << '\n';
  for (const auto& [a, f] : dicts.affixes.suffixes) affixes << "suffix\t" << a << '\t' << f << '\n';
  CHECK(stop.str() == testutil::read_file(root / "golden" / "stopwords.txt"));
  CHECK(features.str() == testutil::read_file(root / "golden" / "features.txt"));
  CHECK(affixes.str() == testutil::read_file(root / "golden" / "affixes.txt"));
}
