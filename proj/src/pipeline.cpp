#include "textcat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "textcat/error.hpp"

namespace textcat {

// ---------------------------------------------------------------------------
// Configuration

void TrainConfig::validate() const {
  learn.validate();
  if (lprime < 1) throw ConfigError("lprime must be at least 1");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (trigram_count < 1) throw ConfigError("trigram_count must be at least 1");
  if (ridge && !(*ridge >= 0.0)) throw ConfigError("ridge must be non-negative");
}

TrainConfig TrainConfig::from(const KeyValueConfig& kv) {
  TrainConfig cfg;
  cfg.learn = LearnConfig::from(kv);
  cfg.features = parse_feature_kind(kv.get_string("features", "learned"));
  cfg.trigram_count = kv.get_uint("trigram_count", cfg.trigram_count);
  cfg.weighting = parse_weighting(kv.get_string("weighting", "binary"));
  cfg.match = parse_match_policy(kv.get_string("match", "longest"));
  cfg.reduction = parse_reduction_method(kv.get_string("reduction", "pca"));
  cfg.svd_center = kv.get_bool("svd_center", false);
  cfg.lprime = kv.get_uint("lprime", cfg.lprime);
  cfg.order = static_cast<int>(kv.get_uint("order", 1));
  if (kv.has("ridge")) cfg.ridge = kv.get_double("ridge", 0.0);
  cfg.validate();
  return cfg;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValueConfig TrainConfig::to_config() const {
  KeyValueConfig kv;
  learn.write(kv);
  kv.set("features", std::string(to_string(features)));
  kv.set("trigram_count", std::to_string(trigram_count));
  kv.set("weighting", std::string(to_string(weighting)));
  kv.set("match", std::string(to_string(match)));
  kv.set("reduction", std::string(to_string(reduction)));
  kv.set("svd_center", svd_center ? "true" : "false");
  kv.set("lprime", std::to_string(lprime));
  kv.set("order", std::to_string(order));
  if (ridge) kv.set("ridge", format_double(*ridge));
  return kv;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", value);
  return buf;
}

// ---------------------------------------------------------------------------
// Training

namespace {

// Re-raises a library error with the pipeline stage prepended, keeping its
// category (and so its exit code).
template <class F>
auto in_stage(std::string_view stage, F&& body) {
  const std::string prefix = std::string(stage) + ": ";
  try {
    return body();
  } catch (const LoadError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  }
}

}  // namespace

Dictionaries build_dictionaries(const LabeledCorpus& corpus, const TrainConfig& config) {
  Dictionaries out;
  if (config.features == FeatureKind::learned) {
    auto learned = learn_dictionaries(corpus, config.learn);
    out.stop = std::move(learned.stop);
    out.features = std::move(learned.features);
    out.affixes = std::move(learned.affixes);
    out.report = learned.report;
    return out;
  }
  // Trigram baseline: same stop-word screening, then the most frequent
  // padded trigrams.
  config.learn.validate();
  const auto forms = build_wordform_list(corpus);
  std::uint64_t threshold = config.learn.stop_threshold;
  if (config.learn.stop_fraction > 0.0) {
    threshold = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(config.learn.stop_fraction * static_cast<double>(forms.total()))));
  }
  out.stop = find_stop_words(forms, threshold);
  out.features = trigram_features(corpus, out.stop, config.trigram_count, &out.trigram_shortfall);
  out.report.tokens = forms.total();
  out.report.wordforms = forms.size();
  out.report.stop_words = out.stop.words.size();
  out.report.features = out.features.size();
  if (out.features.empty()) throw ConfigError("trigram dictionary is empty");
  return out;
}

namespace {

struct Vectorized {
  std::vector<FeatureVector> vectors;
  std::vector<std::vector<std::string>> feature_texts;
};

Vectorized vectorize_corpus(const LabeledCorpus& corpus, const StopWordDictionary& stop,
                            const FeatureDictionary& feats, Weighting weighting, MatchPolicy match) {
  Vectorized out;
  out.feature_texts.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) out.feature_texts.push_back(to_feature_text(doc.text, stop, feats, match));
  out.vectors.reserve(corpus.size());
  for (const auto& ft : out.feature_texts) out.vectors.push_back(to_vector(ft, feats, weighting));
  return out;
}

std::vector<FeatureVector> vectorize_texts(const LabeledCorpus& corpus, const StopWordDictionary& stop,
                                           const FeatureDictionary& feats, Weighting weighting, MatchPolicy match) {
  std::vector<FeatureVector> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    out.push_back(to_vector(to_feature_text(doc.text, stop, feats, match), feats, weighting));
  }
  return out;
}

ProjectionModel fit_projection(const Matrix& data, std::size_t lprime, const TrainConfig& config) {
  return config.reduction == ReductionMethod::pca ? fit_pca(data, lprime)
                                                  : fit_svd(data, lprime, config.svd_center);
}

std::vector<Sample> project_samples(const ProjectionModel& projection, const std::vector<FeatureVector>& vectors,
                                    const LabeledCorpus& corpus) {
  std::vector<Sample> samples;
  samples.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    samples.push_back({project(projection, vectors[i].values), corpus.documents()[i].label});
  }
  return samples;
}

std::vector<std::size_t> map_labels(const std::vector<std::string>& model_classes, const LabeledCorpus& corpus) {
  std::vector<std::size_t> mapping(corpus.num_classes());
  for (std::size_t c = 0; c < corpus.num_classes(); ++c) {
    const auto it = std::find(model_classes.begin(), model_classes.end(), corpus.class_names()[c]);
    if (it == model_classes.end()) {
      throw InputError("test label '" + corpus.class_names()[c] + "' is not a class of the model");
    }
    mapping[c] = static_cast<std::size_t>(it - model_classes.begin());
  }
  return mapping;
}

}  // namespace

ModelBundle train(const LabeledCorpus& corpus, const TrainConfig& config, TrainReport* report) {
  in_stage("config", [&] { config.validate(); return 0; });
  TrainReport local;
  TrainReport& rep = report ? *report : local;
  rep = TrainReport{};
  rep.documents = corpus.size();
  rep.classes = corpus.num_classes();

  auto dicts = in_stage("learn-dict", [&] { return build_dictionaries(corpus, config); });
  rep.learn = dicts.report;
  rep.trigram_shortfall = dicts.trigram_shortfall;

  auto vec = in_stage("vectorize", [&] {
    auto v = vectorize_corpus(corpus, dicts.stop, dicts.features, Weighting::frequency, config.match);
    dicts.features.set_document_frequencies(document_frequencies(v.feature_texts, dicts.features), corpus.size());
    v.vectors.clear();
    for (const auto& ft : v.feature_texts) v.vectors.push_back(to_vector(ft, dicts.features, config.weighting));
    return v;
  });
  rep.feature_count = dicts.features.size();
  if (config.lprime > dicts.features.size()) {
    throw ConfigError("config: L' = " + std::to_string(config.lprime) + " exceeds the feature count L = " +
                      std::to_string(dicts.features.size()));
  }

  const Matrix data = stack_rows(vec.vectors);
  auto projection = in_stage("reduce", [&] { return fit_projection(data, config.lprime, config); });
  rep.lprime = config.lprime;
  in_stage("reduce", [&] {
    std::vector<std::size_t> checked;
    std::vector<std::size_t> spectral_only;
    for (std::size_t lp : {1, 2, 5, 10, 20, 50, 100, 200, 500}) {
      if (lp > dicts.features.size()) continue;
      (lp <= config.lprime ? checked : spectral_only).push_back(lp);
    }
    if (std::find(checked.begin(), checked.end(), config.lprime) == checked.end()) checked.push_back(config.lprime);
    rep.reconstruction_curve = reconstruction_error_curve(projection, checked, data);
    const auto rest = reconstruction_error_curve(projection, spectral_only);
    rep.reconstruction_curve.insert(rep.reconstruction_curve.end(), rest.begin(), rest.end());
    std::sort(rep.reconstruction_curve.begin(), rep.reconstruction_curve.end());
    return 0;
  });

  const auto samples = project_samples(projection, vec.vectors, corpus);
  FitOptions options;
  options.order = config.order;
  options.ridge = config.ridge;
  auto classifier = in_stage("classify", [&] { return fit(samples, corpus.class_names(), options, &rep.fit); });

  std::size_t errors = 0;
  for (const auto& s : samples) {
    if (decide(predict(classifier, s.features)) != s.label) ++errors;
  }
  rep.training_error = 100.0 * static_cast<double>(errors) / static_cast<double>(samples.size());

  ModelBundle bundle;
  bundle.config = config.to_config();
  bundle.stop = std::move(dicts.stop);
  bundle.features = std::move(dicts.features);
  bundle.weighting = config.weighting;
  bundle.match = config.match;
  bundle.projection = std::move(projection);
  bundle.classifier = std::move(classifier);
  return bundle;
}

void TrainReport::write(std::ostream& os) const {
  os << "documents (N)\t" << documents << '\n'
     << "classes (K)\t" << classes << '\n'
     << "features (L)\t" << feature_count << '\n'
     << "reduced (L')\t" << lprime << '\n'
     << "stop words\t" << learn.stop_words << '\n';
  if (trigram_shortfall > 0) os << "trigram shortfall\t" << trigram_shortfall << '\n';
  os << "reconstruction error\n";
  for (const auto& [lp, err] : reconstruction_curve) os << "  L' = " << lp << '\t' << format_percent(err) << '\n';
  os << "training error\t" << format_percent(training_error) << '\n';
  for (const auto& w : fit.warnings) os << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// Application

Classification classify(const ModelBundle& bundle, std::string_view text) {
  const auto ft = to_feature_text(text, bundle.stop, bundle.features, bundle.match);
  const auto v = to_vector(ft, bundle.features, bundle.weighting);
  const auto reduced = project(bundle.projection, v.values);
  Classification out;
  out.scores = predict(bundle.classifier, reduced);
  out.index = decide(out.scores);
  out.name = bundle.classifier.class_names[out.index];
  return out;
}

EvaluationReport evaluate(const ModelBundle& bundle, const LabeledCorpus& test) {
  const auto& names = bundle.classifier.class_names;
  const auto mapping = map_labels(names, test);
  EvaluationReport report;
  report.class_names = names;
  report.confusion.assign(names.size(), std::vector<std::size_t>(names.size(), 0));
  for (const auto& doc : test.documents()) {
    const std::size_t truth = mapping[doc.label];
    const std::size_t predicted = classify(bundle, doc.text).index;
    ++report.confusion[truth][predicted];
    ++report.total;
    if (predicted != truth) ++report.errors;
  }
  return report;
}

void EvaluationReport::write(std::ostream& os) const {
  os << "error rate\t" << format_percent(error_rate()) << " (" << errors << '/' << total << ")\n";
  os << "confusion (rows = true class, columns = decided class)\n";
  for (std::size_t t = 0; t < class_names.size(); ++t) {
    os << class_names[t];
    for (std::size_t p = 0; p < class_names.size(); ++p) os << '\t' << confusion[t][p];
    os << '\n';
  }
}

SweepTable sweep(const LabeledCorpus& train_corpus, const LabeledCorpus& test_corpus, const TrainConfig& config,
                 const std::vector<std::size_t>& lprimes, const std::vector<FeatureKind>& feature_sets) {
  in_stage("config", [&] { config.validate(); return 0; });
  if (lprimes.empty()) throw ConfigError("sweep needs at least one L'");
  if (feature_sets.empty()) throw ConfigError("sweep needs at least one feature set");
  SweepTable table;
  table.lprimes = lprimes;
  table.feature_sets = feature_sets;
  table.cells.assign(lprimes.size(), std::vector<std::optional<double>>(feature_sets.size()));

  const auto mapping = map_labels(train_corpus.class_names(), test_corpus);
  for (std::size_t col = 0; col < feature_sets.size(); ++col) {
    TrainConfig column_config = config;
    column_config.features = feature_sets[col];
    auto dicts = in_stage("learn-dict", [&] { return build_dictionaries(train_corpus, column_config); });
    auto train_vec = in_stage("vectorize", [&] {
      auto v = vectorize_corpus(train_corpus, dicts.stop, dicts.features, Weighting::frequency, config.match);
      dicts.features.set_document_frequencies(document_frequencies(v.feature_texts, dicts.features),
                                              train_corpus.size());
      v.vectors.clear();
      for (const auto& ft : v.feature_texts) v.vectors.push_back(to_vector(ft, dicts.features, config.weighting));
      return v;
    });
    const auto test_vec = vectorize_texts(test_corpus, dicts.stop, dicts.features, config.weighting, config.match);
    table.feature_counts.push_back(dicts.features.size());

    const std::size_t limit = std::min(dicts.features.size(), train_corpus.size());
    std::size_t widest = 0;
    for (std::size_t lp : lprimes) {
      if (lp >= 1 && lp <= limit) widest = std::max(widest, lp);
    }
    if (widest == 0) continue;
    const Matrix data = stack_rows(train_vec.vectors);
    const auto full = in_stage("reduce", [&] { return fit_projection(data, widest, config); });

    for (std::size_t row = 0; row < lprimes.size(); ++row) {
      const std::size_t lp = lprimes[row];
      if (lp < 1 || lp > limit) continue;
      const auto projection = truncate(full, lp);
      const auto samples = project_samples(projection, train_vec.vectors, train_corpus);
      FitOptions options;
      options.order = config.order;
      options.ridge = config.ridge;
      const auto classifier =
          in_stage("classify", [&] { return fit(samples, train_corpus.class_names(), options); });
      std::size_t errors = 0;
      for (std::size_t i = 0; i < test_vec.size(); ++i) {
        const auto scores = predict(classifier, project(projection, test_vec[i].values));
        if (decide(scores) != mapping[test_corpus.documents()[i].label]) ++errors;
      }
      table.cells[row][col] = test_vec.empty() ? 0.0 : 100.0 * static_cast<double>(errors) / static_cast<double>(test_vec.size());
    }
  }
  return table;
}

void SweepTable::write(std::ostream& os) const {
  std::vector<std::string> headers{"vector length"};
  for (auto kind : feature_sets) headers.push_back(kind == FeatureKind::trigram ? "tri-gram features" : "learned features");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < lprimes.size(); ++r) {
    std::vector<std::string> row{std::to_string(lprimes[r])};
    for (const auto& cell : cells[r]) row.push_back(cell ? format_percent(*cell) : "n/a");
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells_text) {
    os << '|';
    for (std::size_t c = 0; c < cells_text.size(); ++c) {
      os << ' ' << std::string(width[c] - cells_text[c].size(), ' ') << cells_text[c] << " |";
    }
    os << '\n';
  };
  line(headers);
  os << '|';
  for (std::size_t c = 0; c < headers.size(); ++c) os << std::string(width[c] + 1, '-') << ":|";
  os << '\n';
  for (const auto& row : rows) line(row);
}

}  // namespace textcat
