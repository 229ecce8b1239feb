// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "textcat/error.hpp"
#include "textcat/fixture.hpp"
#include "textcat/lexlearn.hpp"
#include "textcat/noise.hpp"
#include "textcat/pipeline.hpp"
#include "textcat/polyclassify.hpp"
#include "textcat/random.hpp"
#include "textcat/reduce.hpp"

using namespace textcat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

Outcome eigen_oracle() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst_value = 0.0;
  double worst_vector = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(8);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
    }
    const auto ours = symmetric_eigen(a);
    const auto ref = oracle::jacobi_eigen(a);
    for (std::size_t j = 0; j < n; ++j) {
      worst_value = std::max(worst_value, std::abs(ours.values[j] - ref.values[j]));
      double plus = 0.0;
      double minus = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        plus = std::max(plus, std::abs(ours.vectors(i, j) - ref.vectors(i, j)));
        minus = std::max(minus, std::abs(ours.vectors(i, j) + ref.vectors(i, j)));
      }
      worst_vector = std::max(worst_vector, std::min(plus, minus));
    }
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = worst_value <= 1e-6 && worst_vector <= 1e-6 && elapsed < 10.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max value error %.2e, max vector error %.2e, %.2f s", worst_value, worst_vector,
                elapsed);
  out.detail = buf;
  return out;
}

// Mean squared residual over total squared deviation, from the basis columns.
double residual_ratio(const ProjectionModel& m, const Matrix& data, std::size_t lprime) {
  double residual = 0.0;
  double total = 0.0;
  const std::size_t l = data.cols();
  std::vector<double> c(l);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t i = 0; i < l; ++i) c[i] = data(r, i) - m.mean[i];
    std::vector<double> rest = c;
    for (std::size_t j = 0; j < lprime; ++j) {
      double coef = 0.0;
      for (std::size_t i = 0; i < l; ++i) coef += m.basis(i, j) * c[i];
      for (std::size_t i = 0; i < l; ++i) rest[i] -= coef * m.basis(i, j);
    }
    for (std::size_t i = 0; i < l; ++i) {
      residual += rest[i] * rest[i];
      total += c[i] * c[i];
    }
  }
  return residual / total;
}

Outcome reconstruction_identity() {
  Rng rng(2002);
  double worst = 0.0;
  bool monotone = true;
  std::size_t checked = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(30);
    const std::size_t l = 1 + rng.below(12);
    auto data = random_matrix(rng, n, l);
    // Uneven column scales give a spread-out spectrum.
    for (std::size_t c = 0; c < l; ++c) {
      const double s = std::pow(2.0, static_cast<double>(rng.below(6)));
      for (std::size_t r = 0; r < n; ++r) data(r, c) *= s;
    }
    const std::size_t lmax = std::min(n, l);
    const auto model = fit_pca(data, lmax);
    std::vector<std::size_t> lps;
    for (std::size_t k = 1; k <= lmax; ++k) lps.push_back(k);
    const auto curve = reconstruction_error_curve(model, lps);
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const double spectral = curve[k].second / 100.0;
      const double empirical = residual_ratio(model, data, curve[k].first);
      const double err = std::abs(spectral - empirical);
      const double allowed = 1e-6 * std::max(std::abs(spectral), std::abs(empirical)) + 1e-12;
      worst = std::max(worst, err / allowed);
      if (k > 0 && curve[k].second > curve[k - 1].second) monotone = false;
      ++checked;
    }
  }
  Outcome out;
  out.pass = worst <= 1.0 && monotone;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu curve points, worst error/tolerance %.1e, non-increasing: %s", checked, worst,
                monotone ? "yes" : "no");
  out.detail = buf;
  return out;
}

Outcome subspace_agreement() {
  Rng rng(3003);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto data = random_matrix(rng, 10, 6);
    for (std::size_t c = 0; c < 6; ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < 10; ++r) mean += data(r, c) / 10.0;
      for (std::size_t r = 0; r < 10; ++r) data(r, c) -= mean;
    }
    for (std::size_t lp = 1; lp <= 6; ++lp) {
      const auto p = fit_pca(data, lp).basis;
      const auto s = fit_svd(data, lp).basis;
      const auto pp = p * p.transposed();
      const auto ss = s * s.transposed();
      for (std::size_t i = 0; i < pp.data().size(); ++i) worst = std::max(worst, std::abs(pp.data()[i] - ss.data()[i]));
    }
  }
  Outcome out;
  out.pass = worst <= 1e-8;
  char buf[96];
  std::snprintf(buf, sizeof buf, "max projector difference %.2e", worst);
  out.detail = buf;
  return out;
}

Outcome least_squares_oracle() {
  Rng rng(4004);
  double worst_coef = 0.0;
  double worst_sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int order = rng.below(4) == 0 ? 2 : 1;
    const std::size_t dim = order == 2 ? 1 : 1 + rng.below(4);
    const std::size_t x_dim = expansion_size(dim, order);
    const std::size_t k = 2 + rng.below(3);
    const std::size_t n = std::max(x_dim, k) + rng.below(11 - std::max(x_dim, k));
    std::vector<Sample> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      samples[i].features.resize(dim);
      for (auto& x : samples[i].features) x = rng.normal();
      samples[i].label = i < k ? i : rng.below(k);
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
    FitOptions options;
    options.order = order;
    options.ridge = 0.0;
    const auto model = fit(samples, names, options);

    Eigen::MatrixXd x(n, x_dim);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = expand(samples[i].features, order);
      for (std::size_t j = 0; j < x_dim; ++j) x(i, j) = row[j];
      y(i, samples[i].label) = 1.0;
    }
    const Eigen::MatrixXd a = x.completeOrthogonalDecomposition().pseudoInverse() * y;
    for (std::size_t i = 0; i < x_dim; ++i) {
      for (std::size_t c = 0; c < k; ++c) worst_coef = std::max(worst_coef, std::abs(model.coefficients(i, c) - a(i, c)));
    }
    for (int q = 0; q < 1000; ++q) {
      std::vector<double> v(dim);
      for (auto& e : v) e = 3.0 * rng.normal();
      double sum = 0.0;
      for (double d : predict(model, v)) sum += d;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
  }
  Outcome out;
  out.pass = worst_coef <= 1e-8 && worst_sum <= 1e-6;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max coefficient difference %.2e, max |sum - 1| %.2e", worst_coef, worst_sum);
  out.detail = buf;
  return out;
}

Outcome splitting() {
  Rng rng(5005);
  const auto params = LinguisticParams::german();
  const std::vector<std::string> roots = {"haus", "tier", "bau", "werk", "stoff", "licht", "feld",
                                          "netz", "schal", "strom", "halb", "leiter", "technik"};
  const std::u32string tails = U"aeiklmnrstuäö";
  std::size_t events = 0;
  std::size_t bad_updates = 0;
  std::size_t bound_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    WordFormList list;
    const auto n = 2 + rng.below(30);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string form;
      const auto parts = 1 + rng.below(3);
      for (std::uint64_t p = 0; p < parts; ++p) form += roots[rng.below(roots.size())];
      if (rng.below(3) == 0) {
        std::u32string tail;
        for (std::uint64_t c = 0, len = 1 + rng.below(3); c < len; ++c) tail.push_back(tails[rng.below(tails.size())]);
        form = rng.below(2) ? form + utf8::encode(tail) : utf8::encode(tail) + form;
      }
      list.add(form, 1 + rng.below(9));
    }
    std::map<std::string, std::uint64_t> shadow(list.entries().begin(), list.entries().end());
    std::uint64_t char_bound = 0;
    for (const auto& [f, c] : list.entries()) char_bound += utf8::length(f);
    SplitStats stats;
    const auto out = split_iteratively(list, params, &stats, [&](const SplitEvent& e) {
      ++events;
      bool ok = shadow.count(e.whole) && shadow[e.whole] == e.whole_freq;
      shadow.erase(e.whole);
      ok = ok && e.part_freq_before == (shadow.count(e.part) ? shadow[e.part] : 0);
      shadow[e.part] += e.whole_freq;
      ok = ok && e.part_freq_after == shadow[e.part];
      ok = ok && e.rest_freq_before == (shadow.count(e.rest) ? shadow[e.rest] : 0);
      shadow[e.rest] += e.whole_freq;
      ok = ok && e.rest_freq_after == shadow[e.rest];
      ok = ok && (e.part + e.rest == e.whole || e.rest + e.part == e.whole);
      ok = ok && oracle::is_valid_form(e.part, params) && oracle::is_valid_form(e.rest, params);
      if (!ok) ++bad_updates;
    });
    if (std::map<std::string, std::uint64_t>(out.entries().begin(), out.entries().end()) != shadow) ++bad_updates;
    if (stats.splits > char_bound) ++bound_violations;
    for (std::size_t p = 0; p < stats.passes; ++p) {
      if (stats.comparisons[p] > stats.pass_list_size[p] * stats.pass_list_size[p]) ++bound_violations;
    }
  }

  WordFormList example;
  example.add("haustier", 2);
  example.add("haus", 3);
  const auto fix = split_iteratively(example, params);
  const bool fix_ok = fix.size() == 2 && fix.frequency("haus") == 5 && fix.frequency("tier") == 2 &&
                      oracle::split_fixpoints({{"haustier", 2}, {"haus", 3}}, params) ==
                          std::set<std::set<std::string>>{{"haus", "tier"}};

  Outcome out;
  out.pass = events > 0 && bad_updates == 0 && bound_violations == 0 && fix_ok;
  out.detail = std::to_string(events) + " split events, " + std::to_string(bad_updates) + " bookkeeping mismatches, " +
               std::to_string(bound_violations) + " bound violations, {haustier:2, haus:3} -> {haus:" +
               std::to_string(fix.frequency("haus")) + ", tier:" + std::to_string(fix.frequency("tier")) + "}";
  return out;
}

Outcome compound_chain() {
  // Two short documents per class: the chain plus filler words.
  std::vector<Document> docs;
  docs.push_back({"a/1", "Halbleitertechnik halbleitertechnik halbleitertechnik halbleitertechnik Wasser Strom", 0});
  docs.push_back({"a/2", "Halbleiter halbleiter halbleiter halb halb Wasser Strom Wasser", 0});
  docs.push_back({"b/1", "Strom Wasser Bahnhof Bahnhof Bahnhof Gleis Gleis Gleis", 1});
  const LabeledCorpus corpus(std::move(docs), {"a", "b"});
  LearnConfig config;
  config.stop_threshold = 1000;
  const auto learned = learn_dictionaries(corpus, config);
  const auto& f = learned.features;
  const bool has = f.index_of("halb").has_value() && f.index_of("leiter").has_value() &&
                   f.index_of("technik").has_value();
  const bool lacks = !f.index_of("halbleitertechnik") && !f.index_of("halbleiter");
  Outcome out;
  out.pass = has && lacks;
  out.detail = "features:";
  for (std::size_t i = 0; i < f.size(); ++i) out.detail += " " + f.feature(i) + ":" + std::to_string(f.entries()[i].frequency);
  return out;
}

struct EndToEnd {
  Fixture fixture;
  ModelBundle bundle;
  double error = 0.0;
  double seconds = 0.0;
};

Outcome end_to_end(EndToEnd& run) {
  const auto start = Clock::now();
  run.fixture = generate_fixture(FixtureSpec{});
  TrainConfig config;
  config.lprime = 50;
  run.bundle = train(run.fixture.train, config);
  run.error = evaluate(run.bundle, run.fixture.test).error_rate();
  run.seconds = seconds_since(start);
  Outcome out;
  out.pass = run.fixture.train.size() == 300 && run.fixture.test.size() == 90 && run.error < 5.0 &&
             run.seconds < 120.0;
  out.detail = std::to_string(run.fixture.train.size()) + " train / " + std::to_string(run.fixture.test.size()) +
               " test, L = " + std::to_string(run.bundle.features.size()) + ", L' = 50, test error " +
               format_percent(run.error) + ", " + std::to_string(run.seconds).substr(0, 5) + " s";
  return out;
}

Outcome fault_tolerance(const EndToEnd& clean) {
  const std::uint64_t seed = 42;
  const auto test = corrupt_corpus(clean.fixture.test, NoiseModel::ocr_default(seed));
  const auto train_noisy = corrupt_corpus(clean.fixture.train, NoiseModel::ocr_default(seed ^ 0x5DEECE66DULL));
  TrainConfig config;
  config.lprime = 50;
  const auto bundle = train(train_noisy.corpus, config);
  const double error = evaluate(bundle, test.corpus).error_rate();
  const std::size_t words = train_noisy.words + test.words;
  const double word_acc = 100.0 * static_cast<double>(train_noisy.words_intact + test.words_intact) /
                          static_cast<double>(words);
  Outcome out;
  out.pass = std::abs(error - clean.error) <= 10.0 && word_acc >= 80.0 && word_acc <= 88.0;
  out.detail = "word accuracy " + format_percent(word_acc) + ", noisy error " + format_percent(error) +
               " vs clean " + format_percent(clean.error);
  return out;
}

Outcome sweep_shape() {
  FixtureSpec spec;
  spec.train_per_class = 200;
  const auto fx = generate_fixture(spec);
  const std::vector<std::size_t> rows{50, 100, 200, 500};
  const std::vector<FeatureKind> cols{FeatureKind::trigram, FeatureKind::learned};
  const auto table = sweep(fx.train, fx.test, TrainConfig{}, rows, cols);
  std::ostringstream os;
  table.write(os);
  const auto text = os.str();

  bool filled = table.cells.size() == rows.size();
  for (const auto& row : table.cells) {
    filled = filled && row.size() == cols.size();
    for (const auto& cell : row) filled = filled && cell.has_value();
  }
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  bool layout = lines.size() == 2 + rows.size() && lines[0].find("vector length") != std::string::npos &&
                lines[0].find("tri-gram features") < lines[0].find("learned features");
  for (std::size_t r = 0; layout && r < rows.size(); ++r) {
    layout = lines[2 + r].find(" " + std::to_string(rows[r]) + " |") != std::string::npos;
  }
  Outcome out;
  out.pass = table.lprimes == rows && table.feature_sets == cols && filled && layout;
  out.detail = "rows";
  for (auto r : table.lprimes) out.detail += " " + std::to_string(r);
  out.detail += "; cells";
  for (const auto& row : table.cells) {
    for (const auto& cell : row) out.detail += " " + (cell ? format_percent(*cell) : std::string("n/a"));
  }
  return out;
}

Outcome persistence(const EndToEnd& run) {
  std::ostringstream first;
  save_bundle(run.bundle, first);
  std::istringstream in(first.str());
  const auto loaded = load_bundle(in);
  std::ostringstream second;
  save_bundle(loaded, second);
  std::ostringstream eval_a;
  std::ostringstream eval_b;
  evaluate(run.bundle, run.fixture.test).write(eval_a);
  evaluate(loaded, run.fixture.test).write(eval_b);
  Outcome out;
  out.pass = first.str() == second.str() && eval_a.str() == eval_b.str();
  out.detail = std::to_string(first.str().size()) + " bytes, round trip " +
               (first.str() == second.str() ? "identical" : "differs") + ", evaluation " +
               (eval_a.str() == eval_b.str() ? "identical" : "differs");
  return out;
}

}  // namespace

int main() {
  EndToEnd run;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"eigen oracle", eigen_oracle},
      {"reconstruction error identity", reconstruction_identity},
      {"pca/svd subspace agreement", subspace_agreement},
      {"least squares oracle", least_squares_oracle},
      {"splitting termination and bookkeeping", splitting},
      {"compound chain", compound_chain},
      {"end-to-end synthetic", [&] { return end_to_end(run); }},
      {"fault tolerance", [&] { return fault_tolerance(run); }},
      {"sweep table shape", sweep_shape},
      {"persistence", [&] { return persistence(run); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
