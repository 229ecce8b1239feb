#include "textcat/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "textcat/error.hpp"
#include "textcat/random.hpp"
#include "textcat/utf8.hpp"

namespace textcat {

namespace fs = std::filesystem;

LabeledCorpus::LabeledCorpus(std::vector<Document> documents,
                             std::vector<std::string> class_names)
    : documents_(std::move(documents)), class_names_(std::move(class_names)) {
  if (class_names_.empty()) throw InputError("corpus has no classes");
  if (documents_.empty()) throw InputError("corpus has no documents");
  std::unordered_set<std::string> ids;
  for (const auto& doc : documents_) {
    if (doc.label >= class_names_.size()) {
      throw InputError("document '" + doc.id + "' has label " + std::to_string(doc.label) +
                       " outside " + std::to_string(class_names_.size()) + " classes");
    }
    if (!ids.insert(doc.id).second) throw InputError("duplicate document id '" + doc.id + "'");
  }
}

std::size_t LabeledCorpus::class_index(std::string_view name) const {
  const auto it = std::find(class_names_.begin(), class_names_.end(), name);
  return static_cast<std::size_t>(it - class_names_.begin());
}

std::vector<std::size_t> LabeledCorpus::class_counts() const {
  std::vector<std::size_t> counts(class_names_.size(), 0);
  for (const auto& doc : documents_) ++counts[doc.label];
  return counts;
}

namespace {

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (!utf8::valid(text)) throw InputError("file '" + path.string() + "' is not valid UTF-8");
  return text;
}

std::size_t intern_class(std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  names.push_back(name);
  return names.size() - 1;
}

LabeledCorpus load_tree(const fs::path& root) {
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  std::vector<Document> docs;
  std::vector<std::string> names;
  for (const auto& dir : class_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    if (files.empty()) continue;
    std::sort(files.begin(), files.end());
    const std::string name = dir.filename().string();
    const std::size_t label = intern_class(names, name);
    for (const auto& file : files) {
      docs.push_back({name + "/" + file.stem().string(), read_text_file(file), label});
    }
  }
  if (docs.empty()) throw InputError("corpus '" + root.string() + "' contains no documents");
  return LabeledCorpus(std::move(docs), std::move(names));
}

LabeledCorpus load_manifest(const fs::path& manifest) {
  const std::string content = read_text_file(manifest);
  const fs::path base = manifest.parent_path();
  std::vector<Document> docs;
  std::vector<std::string> names;
  std::istringstream lines(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw InputError(manifest.string() + ":" + std::to_string(lineno) +
                       ": expected 'path<TAB>class'");
    }
    const std::string rel = line.substr(0, tab);
    const std::string name = line.substr(tab + 1);
    fs::path path = rel;
    if (path.is_relative()) path = base / path;
    if (!fs::exists(path)) throw InputError("manifest entry '" + rel + "' does not exist");
    const std::size_t label = intern_class(names, name);
    docs.push_back({rel, read_text_file(path), label});
  }
  if (docs.empty()) throw InputError("manifest '" + manifest.string() + "' lists no documents");
  return LabeledCorpus(std::move(docs), std::move(names));
}

}  // namespace

LabeledCorpus load_corpus(const fs::path& root) {
  if (!fs::exists(root)) throw InputError("corpus path '" + root.string() + "' does not exist");
  if (fs::is_directory(root)) return load_tree(root);
  return load_manifest(root);
}

std::pair<LabeledCorpus, LabeledCorpus> split_corpus(const LabeledCorpus& corpus,
                                                     double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw ConfigError("split ratio must lie strictly between 0 and 1");
  }
  Rng rng(seed);
  std::vector<std::vector<const Document*>> per_class(corpus.num_classes());
  for (const auto& doc : corpus.documents()) per_class[doc.label].push_back(&doc);
  std::vector<Document> train;
  std::vector<Document> test;
  for (auto& docs : per_class) {
    // Fisher-Yates with the portable generator.
    for (std::size_t i = docs.size(); i > 1; --i) {
      std::swap(docs[i - 1], docs[rng.below(i)]);
    }
    const auto n_train = static_cast<std::size_t>(train_ratio * static_cast<double>(docs.size()) + 0.5);
    for (std::size_t i = 0; i < docs.size(); ++i) (i < n_train ? train : test).push_back(*docs[i]);
  }
  return {LabeledCorpus(std::move(train), corpus.class_names()),
          LabeledCorpus(std::move(test), corpus.class_names())};
}

bool is_punctuation(char32_t cp) noexcept { return kPunctuation.find(cp) != std::u32string_view::npos; }

bool is_blank(char32_t cp) noexcept { return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r'; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(utf8::encode(current));
      current.clear();
    }
  };
  for (char32_t cp : utf8::decode(text)) {
    if (is_blank(cp)) {
      flush();
    } else if (!is_punctuation(cp)) {
      current.push_back(utf8::to_lower(cp));
    }
  }
  flush();
  return tokens;
}

WordFormList::WordFormList(Map entries) : entries_(std::move(entries)) {
  std::erase_if(entries_, [](const auto& kv) { return kv.second == 0; });
}

std::uint64_t WordFormList::frequency(std::string_view form) const {
  const auto it = entries_.find(form);
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t WordFormList::total() const {
  std::uint64_t sum = 0;
  for (const auto& [form, freq] : entries_) sum += freq;
  return sum;
}

void WordFormList::add(std::string_view form, std::uint64_t count) {
  if (count == 0) return;
  const auto it = entries_.find(form);
  if (it == entries_.end()) {
    entries_.emplace(std::string(form), count);
  } else {
    it->second += count;
  }
}

std::uint64_t WordFormList::remove(std::string_view form) {
  const auto it = entries_.find(form);
  if (it == entries_.end()) return 0;
  const std::uint64_t freq = it->second;
  entries_.erase(it);
  return freq;
}

std::vector<std::pair<std::string, std::uint64_t>> WordFormList::by_frequency() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(entries_.begin(), entries_.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void WordFormList::write(std::ostream& os) const {
  for (const auto& [form, freq] : by_frequency()) os << form << '\t' << freq << '\n';
}

WordFormList WordFormList::read(std::istream& is) {
  WordFormList list;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("word form list line " + std::to_string(lineno) + ": missing tab");
    }
    try {
      list.add(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
    } catch (const std::logic_error&) {
      throw InputError("word form list line " + std::to_string(lineno) + ": bad frequency");
    }
  }
  return list;
}

WordFormList build_wordform_list(const LabeledCorpus& corpus) {
  WordFormList list;
  for (const auto& doc : corpus.documents()) {
    for (const auto& token : tokenize(doc.text)) list.add(token);
  }
  return list;
}

}  // namespace textcat
