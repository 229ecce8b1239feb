#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "textcat/error.hpp"
#include "textcat/pipeline.hpp"

namespace textcat {

namespace {

constexpr std::string_view kMagic = "textcat-bundle";
constexpr std::array<std::string_view, 6> kSections = {"header", "config", "stopwords",
                                                      "features", "projection", "classifier"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ' ';
    os << num(values[i]);
  }
  os << '\n';
}

// Line cursor over one section's body.
class Section {
 public:
  Section(std::string name, std::vector<std::string> lines) : name_(std::move(name)), lines_(std::move(lines)) {}

  const std::string& name() const { return name_; }
  bool done() const { return pos_ == lines_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw LoadError(name_, what); }

  const std::string& next() {
    if (done()) fail("truncated section");
    return lines_[pos_++];
  }

  std::string value(std::string_view key) {
    const std::string& line = next();
    const std::string prefix = std::string(key) + " = ";
    if (line.rfind(prefix, 0) != 0) fail("expected '" + std::string(key) + "', found '" + line + "'");
    return line.substr(prefix.size());
  }

  std::uint64_t uint_value(std::string_view key) { return to_uint(value(key), key); }

  std::uint64_t to_uint(std::string_view text, std::string_view what) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
      fail("bad integer for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return v;
  }

  std::vector<double> doubles(std::string_view text, std::size_t expected, std::string_view what) const {
    std::vector<double> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) fail("bad number in " + std::string(what) + ": '" + tok + "'");
      out.push_back(v);
    }
    if (out.size() != expected) {
      fail(std::string(what) + " has " + std::to_string(out.size()) + " values, expected " +
           std::to_string(expected));
    }
    return out;
  }

  void expect_end() const {
    if (!done()) fail("unexpected line '" + lines_[pos_] + "'");
  }

 private:
  std::string name_;
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

template <class F>
auto within(const std::string& section, F&& body) {
  try {
    return body();
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError(section, e.what());
  }
}

}  // namespace

void ModelBundle::validate() const {
  if (format_version != kBundleFormatVersion) {
    throw LoadError("header", "unsupported format version " + std::to_string(format_version));
  }
  if (features.empty()) throw LoadError("features", "empty feature dictionary");
  if (!features.document_frequencies().empty() && features.document_frequencies().size() != features.size()) {
    throw LoadError("features", "document frequency count does not match the dictionary");
  }
  within("projection", [&] { projection.validate(); return 0; });
  if (projection.input_dim() != features.size()) {
    throw LoadError("projection", "input dimension " + std::to_string(projection.input_dim()) +
                                      " does not match " + std::to_string(features.size()) + " features");
  }
  within("classifier", [&] { classifier.validate(); return 0; });
  if (classifier.input_dim != projection.output_dim()) {
    throw LoadError("classifier", "input dimension " + std::to_string(classifier.input_dim) +
                                      " does not match L' = " + std::to_string(projection.output_dim()));
  }
  if (weighting == Weighting::idf && features.document_count() == 0) {
    throw LoadError("features", "idf weighting needs document frequencies");
  }
}

void save_bundle(const ModelBundle& bundle, std::ostream& os) {
  bundle.validate();
  os << "[header]\n"
     << "format = " << kMagic << '\n'
     << "version = " << bundle.format_version << '\n'
     << "features = " << to_string(bundle.features.kind()) << '\n'
     << "weighting = " << to_string(bundle.weighting) << '\n'
     << "match = " << to_string(bundle.match) << '\n';

  os << "[config]\n";
  bundle.config.write(os);

  os << "[stopwords]\n"
     << "threshold = " << bundle.stop.threshold_used << '\n'
     << "count = " << bundle.stop.words.size() << '\n';
  for (const auto& w : bundle.stop.words) os << w << '\n';

  const auto& feats = bundle.features;
  const auto& df = feats.document_frequencies();
  os << "[features]\n"
     << "count = " << feats.size() << '\n'
     << "documents = " << feats.document_count() << '\n';
  for (std::size_t i = 0; i < feats.size(); ++i) {
    os << i << '\t' << feats.entries()[i].feature << '\t' << feats.entries()[i].frequency << '\t'
       << (df.empty() ? 0 : df[i]) << '\n';
  }

  const auto& p = bundle.projection;
  os << "[projection]\n"
     << "method = " << to_string(p.method) << '\n'
     << "centered = " << (p.centered ? "true" : "false") << '\n'
     << "L = " << p.input_dim() << '\n'
     << "L_prime = " << p.output_dim() << '\n'
     << "eigenvalue_count = " << p.eigenvalues.size() << '\n'
     << "eigenvalues = ";
  write_row(os, p.eigenvalues);
  os << "mean = ";
  write_row(os, p.mean);
  os << "basis\n";
  for (std::size_t r = 0; r < p.basis.rows(); ++r) write_row(os, p.basis.row(r));

  const auto& c = bundle.classifier;
  os << "[classifier]\n"
     << "order = " << c.order << '\n'
     << "L_prime = " << c.input_dim << '\n'
     << "X = " << c.expansion_dim() << '\n'
     << "K = " << c.num_classes() << '\n';
  for (const auto& name : c.class_names) os << "class = " << name << '\n';
  os << "coefficients\n";
  for (std::size_t r = 0; r < c.coefficients.rows(); ++r) write_row(os, c.coefficients.row(r));
  if (!os) throw InputError("failed to write model bundle");
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  save_bundle(bundle, out);
}

ModelBundle load_bundle(std::istream& is) {
  // Cut the stream into sections, requiring the fixed order.
  std::vector<Section> sections;
  {
    std::vector<std::string> body;
    std::string current;
    std::string line;
    std::size_t index = 0;
    auto close = [&] {
      if (!current.empty()) sections.emplace_back(current, std::move(body));
      body.clear();
    };
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
        const std::string name = line.substr(1, line.size() - 2);
        if (index >= kSections.size() || name != kSections[index]) {
          throw LoadError(index < kSections.size() ? std::string(kSections[index]) : name,
                          "unexpected section [" + name + "]");
        }
        close();
        current = name;
        ++index;
        continue;
      }
      if (current.empty()) throw LoadError("header", "missing [header] section");
      body.push_back(line);
    }
    close();
    if (index < kSections.size()) throw LoadError(std::string(kSections[index]), "section missing");
  }

  ModelBundle b;
  FeatureKind kind = FeatureKind::learned;
  {
    Section& s = sections[0];
    if (s.value("format") != kMagic) s.fail("not a model bundle");
    const auto version = s.uint_value("version");
    if (version != static_cast<std::uint64_t>(kBundleFormatVersion)) {
      s.fail("unsupported format version " + std::to_string(version));
    }
    b.format_version = static_cast<int>(version);
    within(s.name(), [&] {
      kind = parse_feature_kind(s.value("features"));
      b.weighting = parse_weighting(s.value("weighting"));
      b.match = parse_match_policy(s.value("match"));
      return 0;
    });
    s.expect_end();
  }
  {
    Section& s = sections[1];
    std::string text;
    while (!s.done()) text += s.next() + "\n";
    std::istringstream in(text);
    b.config = within(s.name(), [&] { return KeyValueConfig::parse(in, "bundle config"); });
  }
  {
    Section& s = sections[2];
    b.stop.threshold_used = s.uint_value("threshold");
    const auto count = s.uint_value("count");
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::string& w = s.next();
      if (w.empty() || !b.stop.words.insert(w).second) s.fail("bad or duplicate stop word '" + w + "'");
    }
    s.expect_end();
  }
  {
    Section& s = sections[3];
    const auto count = s.uint_value("count");
    const auto docs = s.uint_value("documents");
    std::vector<FeatureDictionary::Entry> entries;
    std::vector<std::uint64_t> df;
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto fields = split_tabs(s.next());
      if (fields.size() != 4) s.fail("feature line " + std::to_string(i) + " needs 4 fields");
      if (s.to_uint(fields[0], "feature index") != i) s.fail("feature index out of order at " + std::to_string(i));
      entries.push_back({fields[1], s.to_uint(fields[2], "frequency")});
      df.push_back(s.to_uint(fields[3], "document frequency"));
    }
    s.expect_end();
    b.features = within(s.name(), [&] { return FeatureDictionary(kind, std::move(entries)); });
    if (docs > 0) b.features.set_document_frequencies(std::move(df), docs);
  }
  {
    Section& s = sections[4];
    auto& p = b.projection;
    within(s.name(), [&] { p.method = parse_reduction_method(s.value("method")); return 0; });
    const auto centered = s.value("centered");
    if (centered != "true" && centered != "false") s.fail("centered must be true or false");
    p.centered = centered == "true";
    const auto l = s.uint_value("L");
    const auto lp = s.uint_value("L_prime");
    const auto ne = s.uint_value("eigenvalue_count");
    p.eigenvalues = s.doubles(s.value("eigenvalues"), ne, "eigenvalues");
    p.mean = s.doubles(s.value("mean"), l, "mean");
    if (s.next() != "basis") s.fail("expected 'basis'");
    p.basis = Matrix(l, lp);
    for (std::uint64_t r = 0; r < l; ++r) {
      const auto row = s.doubles(s.next(), lp, "basis row " + std::to_string(r));
      std::copy(row.begin(), row.end(), p.basis.row(r).begin());
    }
    s.expect_end();
  }
  {
    Section& s = sections[5];
    auto& c = b.classifier;
    const auto order = s.uint_value("order");
    if (order != 1 && order != 2) s.fail("order must be 1 or 2");
    c.order = static_cast<int>(order);
    c.input_dim = s.uint_value("L_prime");
    const auto x = s.uint_value("X");
    const auto k = s.uint_value("K");
    if (x != expansion_size(c.input_dim, c.order)) s.fail("X does not match order and L'");
    for (std::uint64_t i = 0; i < k; ++i) c.class_names.push_back(s.value("class"));
    if (s.next() != "coefficients") s.fail("expected 'coefficients'");
    c.coefficients = Matrix(x, k);
    for (std::uint64_t r = 0; r < x; ++r) {
      const auto row = s.doubles(s.next(), k, "coefficient row " + std::to_string(r));
      std::copy(row.begin(), row.end(), c.coefficients.row(r).begin());
    }
    s.expect_end();
  }
  b.validate();
  return b;
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model bundle '" + path.string() + "'");
  return load_bundle(in);
}

}  // namespace textcat
