// textcat command line tool.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "textcat/config.hpp"
#include "textcat/corpus.hpp"
#include "textcat/error.hpp"
#include "textcat/noise.hpp"
#include "textcat/pipeline.hpp"

namespace fs = std::filesystem;
using namespace textcat;

namespace {

struct Options {
  std::string config;
  std::string corpus;
  std::string train_corpus;
  std::string model;
  std::string out;
  std::string lprime;
  std::string features;
  std::string weighting;
  std::string reduction;
  std::string split;
  std::string noise;
  int order = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> files;
};

KeyValueConfig settings(const Options& o) {
  KeyValueConfig kv = o.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(o.config);
  if (!o.lprime.empty()) {
    const auto parts = split_list(o.lprime);
    if (parts.size() != 1) throw ConfigError("train takes a single --lprime value");
    kv.set("lprime", parts.front());
  }
  if (!o.features.empty()) kv.set("features", o.features);
  if (!o.weighting.empty()) kv.set("weighting", o.weighting);
  if (!o.reduction.empty()) kv.set("reduction", o.reduction);
  if (o.order != 0) kv.set("order", std::to_string(o.order));
  return kv;
}

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  return read_all(in);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad " + what + " '" + text + "'");
  }
}

// "seed:ratio"
std::pair<std::uint64_t, double> parse_split(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("--split expects seed:ratio");
  const auto seed = parse_uint(spec.substr(0, colon), "split seed");
  double ratio = 0.0;
  try {
    ratio = std::stod(spec.substr(colon + 1));
  } catch (const std::logic_error&) {
    throw ConfigError("bad split ratio in '" + spec + "'");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  return {seed, ratio};
}

// Training corpus: --corpus, or its train part under --split.
LabeledCorpus training_corpus(const Options& o) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  auto corpus = load_corpus(o.corpus);
  if (o.split.empty()) return corpus;
  const auto [seed, ratio] = parse_split(o.split);
  return split_corpus(corpus, ratio, seed).first;
}

NoiseModel noise_model(const Options& o) {
  NoiseModel noise = o.noise.empty() || o.noise == "default" ? NoiseModel::ocr_default() : NoiseModel::load(o.noise);
  if (o.seed_given) noise.seed = o.seed;
  return noise;
}

void print_noise(const CorpusCorruption& c, std::ostream& os) {
  os << "noise: character accuracy " << format_percent(100.0 * c.character_accuracy()) << ", word accuracy "
     << format_percent(100.0 * c.word_accuracy()) << '\n';
}

int cmd_learn_dict(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out DIR is required");
  const auto corpus = training_corpus(o);
  const auto config = TrainConfig::from(settings(o));
  const auto dicts = build_dictionaries(corpus, config);
  fs::create_directories(o.out);
  {
    auto out = open_out(fs::path(o.out) / "stopwords.txt");
    dicts.stop.write(out);
  }
  {
    auto out = open_out(fs::path(o.out) / "features.txt");
    dicts.features.write(out);
  }
  if (config.features == FeatureKind::learned) {
    auto out = open_out(fs::path(o.out) / "affixes.txt");
    for (const auto& [a, f] : dicts.affixes.prefixes) out << "prefix\t" << a << '\t' << f << '\n';
    for (const auto& [a, f] : dicts.affixes.suffixes) out << "suffix\t" << a << '\t' << f << '\n';
    dicts.report.write(std::cout);
  } else {
    std::cout << "stop_words\t" << dicts.stop.words.size() << "\nfeatures\t" << dicts.features.size() << '\n';
    if (dicts.trigram_shortfall > 0) std::cout << "trigram_shortfall\t" << dicts.trigram_shortfall << '\n';
  }
  return 0;
}

int cmd_train(const Options& o) {
  if (o.model.empty()) throw ConfigError("--model FILE is required");
  auto corpus = training_corpus(o);
  if (!o.noise.empty()) {
    const auto c = corrupt_corpus(corpus, noise_model(o));
    print_noise(c, std::cout);
    corpus = c.corpus;
  }
  const auto config = TrainConfig::from(settings(o));
  TrainReport report;
  const auto bundle = train(corpus, config, &report);
  save_bundle(bundle, fs::path(o.model));
  report.write(std::cout);
  return 0;
}

int cmd_classify(const Options& o) {
  if (o.model.empty()) throw ConfigError("--model FILE is required");
  const auto bundle = load_bundle(fs::path(o.model));
  auto show = [&](const std::string& name, const std::string& text) {
    const auto c = classify(bundle, text);
    std::cout << name << '\t' << c.name;
    for (double s : c.scores) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "\t%.4f", s);
      std::cout << buf;
    }
    std::cout << '\n';
  };
  if (o.files.empty()) {
    show("-", read_all(std::cin));
  } else {
    for (const auto& f : o.files) show(f, read_file(f));
  }
  return 0;
}

int cmd_evaluate(const Options& o) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  LabeledCorpus train_part;
  LabeledCorpus test_part;
  const auto corpus = load_corpus(o.corpus);
  if (!o.split.empty()) {
    const auto [seed, ratio] = parse_split(o.split);
    std::tie(train_part, test_part) = split_corpus(corpus, ratio, seed);
  } else {
    test_part = corpus;
    if (!o.train_corpus.empty()) train_part = load_corpus(o.train_corpus);
  }

  if (!o.noise.empty()) {
    const auto noise = noise_model(o);
    auto c = corrupt_corpus(test_part, noise);
    print_noise(c, std::cout);
    test_part = c.corpus;
    if (train_part.size() > 0) {
      NoiseModel train_noise = noise;
      train_noise.seed = noise.seed ^ 0x5DEECE66DULL;
      train_part = corrupt_corpus(train_part, train_noise).corpus;
    }
  }

  if (!o.model.empty()) {
    const auto bundle = load_bundle(fs::path(o.model));
    evaluate(bundle, test_part).write(std::cout);
    return 0;
  }

  // Sweep mode: train on the training part for every L' and feature set.
  if (train_part.size() == 0) throw ConfigError("evaluate needs --model, --train or --split");
  Options base = o;
  base.lprime.clear();
  base.features.clear();
  const auto config = TrainConfig::from(settings(base));
  std::vector<std::size_t> lprimes;
  for (const auto& v : split_list(o.lprime.empty() ? "50,100,200,500" : o.lprime)) {
    lprimes.push_back(parse_uint(v, "L'"));
  }
  std::vector<FeatureKind> kinds;
  for (const auto& v : split_list(o.features.empty() ? "trigram,learned" : o.features)) {
    try {
      kinds.push_back(parse_feature_kind(v));
    } catch (const Error&) {
      throw ConfigError("unknown feature set '" + v + "'");
    }
  }
  const auto table = sweep(train_part, test_part, config, lprimes, kinds);
  std::cout << "training texts " << train_part.size() << ", test texts " << test_part.size() << '\n';
  for (std::size_t c = 0; c < kinds.size(); ++c) {
    std::cout << to_string(kinds[c]) << " features: L = " << table.feature_counts[c] << '\n';
  }
  table.write(std::cout);
  return 0;
}

int cmd_corrupt(const Options& o) {
  const auto noise = noise_model(o);
  if (o.corpus.empty()) {
    const auto r = corrupt(read_all(std::cin), noise);
    std::cout << r.text;
    std::cerr << "character accuracy " << format_percent(100.0 * r.character_accuracy()) << ", word accuracy "
              << format_percent(100.0 * r.word_accuracy()) << '\n';
    return 0;
  }
  if (o.out.empty()) throw ConfigError("--out DIR is required with --corpus");
  const auto c = corrupt_corpus(load_corpus(o.corpus), noise);
  for (const auto& doc : c.corpus.documents()) {
    const fs::path file = fs::path(o.out) / (doc.id + ".txt");
    fs::create_directories(file.parent_path());
    auto out = open_out(file);
    out << doc.text;
  }
  print_noise(c, std::cout);
  return 0;
}

int cmd_inspect(const Options& o) {
  if (o.model.empty()) throw ConfigError("--model FILE is required");
  const auto b = load_bundle(fs::path(o.model));
  std::cout << "format version\t" << b.format_version << '\n'
            << "features\t" << to_string(b.features.kind()) << '\n'
            << "weighting\t" << to_string(b.weighting) << '\n'
            << "match\t" << to_string(b.match) << '\n'
            << "reduction\t" << to_string(b.projection.method) << (b.projection.centered ? "" : " (uncentered)")
            << '\n'
            << "stop words\t" << b.stop.words.size() << '\n'
            << "L\t" << b.projection.input_dim() << '\n'
            << "L'\t" << b.projection.output_dim() << '\n'
            << "order\t" << b.classifier.order << '\n'
            << "X\t" << b.classifier.expansion_dim() << '\n'
            << "K\t" << b.classifier.num_classes() << '\n';
  for (const auto& name : b.classifier.class_names) std::cout << "class\t" << name << '\n';
  std::vector<std::size_t> points;
  for (std::size_t lp = 1; lp <= b.projection.output_dim(); lp = lp < 10 ? lp + 1 : lp * 2) points.push_back(lp);
  if (points.empty() || points.back() != b.projection.output_dim()) points.push_back(b.projection.output_dim());
  std::cout << "reconstruction error\n";
  try {
    for (const auto& [lp, err] : reconstruction_error_curve(b.projection, points)) {
      std::cout << "  L' = " << lp << '\t' << format_percent(err) << '\n';
    }
  } catch (const InputError&) {
    std::cout << "  (zero total variance)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus-adaptive text categorization"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* cmd) { cmd->add_option("--config", o.config, "key = value settings file"); };
  auto add_corpus = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus, "Corpus directory or manifest");
    cmd->add_option("--split", o.split, "Seeded stratified split seed:ratio");
  };
  auto add_training = [&](CLI::App* cmd) {
    cmd->add_option("--lprime", o.lprime, "Reduced dimension L'");
    cmd->add_option("--features", o.features, "learned or trigram");
    cmd->add_option("--weighting", o.weighting, "binary, frequency or idf");
    cmd->add_option("--reduction", o.reduction, "pca or svd");
    cmd->add_option("--order", o.order, "Classifier polynomial order (1 or 2)")->check(CLI::IsMember({1, 2}));
  };
  auto add_noise = [&](CLI::App* cmd) {
    cmd->add_option("--noise", o.noise, "Noise model file, or 'default' for the built-in OCR model");
    cmd->add_option("--seed", o.seed, "Noise seed")->each([&](const std::string&) { o.seed_given = true; });
  };

  auto* learn = app.add_subcommand("learn-dict", "Learn stop word and feature dictionaries");
  add_config(learn);
  add_corpus(learn);
  learn->add_option("--features", o.features, "learned or trigram");
  learn->add_option("--out", o.out, "Output directory")->required();

  auto* tr = app.add_subcommand("train", "Train a model bundle");
  add_config(tr);
  add_corpus(tr);
  add_training(tr);
  add_noise(tr);
  tr->add_option("--model", o.model, "Output bundle file")->required();

  auto* cl = app.add_subcommand("classify", "Classify text files (stdin when none given)");
  cl->add_option("--model", o.model, "Bundle file")->required();
  cl->add_option("files", o.files, "Text files");

  auto* ev = app.add_subcommand("evaluate", "Error rate of a bundle, or an L' and feature set sweep");
  add_config(ev);
  add_corpus(ev);
  add_training(ev);
  add_noise(ev);
  ev->add_option("--model", o.model, "Bundle file; without it the sweep trains its own models");
  ev->add_option("--train", o.train_corpus, "Training corpus for the sweep");

  auto* co = app.add_subcommand("corrupt", "Simulate OCR noise (stdin to stdout without --corpus)");
  co->add_option("--corpus", o.corpus, "Corpus to corrupt");
  co->add_option("--out", o.out, "Output directory");
  add_noise(co);

  auto* in = app.add_subcommand("inspect", "Print a bundle's header and reconstruction error curve");
  in->add_option("--model", o.model, "Bundle file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*learn) return cmd_learn_dict(o);
    if (*tr) return cmd_train(o);
    if (*cl) return cmd_classify(o);
    if (*ev) return cmd_evaluate(o);
    if (*co) return cmd_corrupt(o);
    if (*in) return cmd_inspect(o);
  } catch (const Error& e) {
    std::cerr << "textcat: " << e.what() << '\n';
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::cerr << "textcat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
