#include "textcat/lexlearn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "textcat/config.hpp"
#include "textcat/error.hpp"
#include "textcat/utf8.hpp"

namespace textcat {

// ---------------------------------------------------------------------------
// Linguistic parameters

LinguisticParams LinguisticParams::german() {
  LinguisticParams p;
  p.vowels = {U'a', U'e', U'i', U'o', U'u', U'ä', U'ö', U'ü', U'y'};
  p.consonant_clusters = {"sch", "ch", "ck", "ph", "th"};
  p.min_chars = 3;
  p.formative_elements = {"s"};
  p.max_affix_len = 5;
  return p;
}

LinguisticParams LinguisticParams::english() {
  LinguisticParams p;
  p.vowels = {U'a', U'e', U'i', U'o', U'u', U'y'};
  p.min_chars = 3;
  p.max_affix_len = 5;
  return p;
}

void LinguisticParams::validate() const {
  if (min_chars < 1) throw ConfigError("min_chars must be at least 1");
  if (vowels.empty()) throw ConfigError("vowel set must not be empty");
  if (max_affix_len < 1) throw ConfigError("max_affix_len must be at least 1");
  for (const auto& cluster : consonant_clusters) {
    const auto cps = utf8::decode(cluster);
    if (cps.size() < 2) throw ConfigError("consonant cluster '" + cluster + "' is a single character");
    for (char32_t cp : cps) {
      if (is_vowel(cp)) throw ConfigError("consonant cluster '" + cluster + "' contains a vowel");
    }
  }
  for (const auto& element : formative_elements) {
    if (element.empty()) throw ConfigError("empty formative element");
    if (grapheme_length(element, *this) >= min_chars) {
      throw ConfigError("formative element '" + element + "' is not shorter than min_chars");
    }
  }
}

namespace {

struct ClusterTable {
  std::vector<std::u32string> clusters;  // longest first
};

ClusterTable make_clusters(const LinguisticParams& params) {
  ClusterTable table;
  for (const auto& c : params.consonant_clusters) table.clusters.push_back(utf8::decode(c));
  std::sort(table.clusters.begin(), table.clusters.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size() || (a.size() == b.size() && a < b); });
  return table;
}

}  // namespace

std::size_t grapheme_length(std::string_view form, const LinguisticParams& params) {
  const auto cps = utf8::decode(form);
  if (params.consonant_clusters.empty()) return cps.size();
  const auto table = make_clusters(params);
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t step = 1;
    for (const auto& cluster : table.clusters) {
      if (cps.compare(i, cluster.size(), cluster) == 0) {
        step = cluster.size();
        break;
      }
    }
    i += step;
    ++count;
  }
  return count;
}

bool is_valid_form(std::string_view form, const LinguisticParams& params) {
  const auto cps = utf8::decode(form);
  const bool has_vowel = std::any_of(cps.begin(), cps.end(), [&](char32_t cp) { return params.is_vowel(cp); });
  return has_vowel && grapheme_length(form, params) >= params.min_chars;
}

// ---------------------------------------------------------------------------
// Dictionaries

void StopWordDictionary::write(std::ostream& os) const {
  for (const auto& word : words) os << word << '\n';
}

StopWordDictionary StopWordDictionary::read(std::istream& is) {
  StopWordDictionary dict;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) dict.words.insert(line);
  }
  return dict;
}

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::learned ? "learned" : "trigram";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "learned") return FeatureKind::learned;
  if (name == "trigram") return FeatureKind::trigram;
  throw ConfigError("unknown feature set '" + std::string(name) + "' (expected learned|trigram)");
}

FeatureDictionary::FeatureDictionary(FeatureKind kind, std::vector<Entry> entries)
    : kind_(kind), entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].feature, i).second) {
      throw InputError("duplicate feature '" + entries_[i].feature + "'");
    }
    max_len_ = std::max(max_len_, utf8::length(entries_[i].feature));
  }
}

std::optional<std::size_t> FeatureDictionary::index_of(std::string_view feature) const {
  const auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void FeatureDictionary::set_document_frequencies(std::vector<std::uint64_t> df, std::uint64_t n_docs) {
  if (df.size() != entries_.size()) {
    throw InputError("document frequency count does not match dictionary size");
  }
  doc_freq_ = std::move(df);
  n_docs_ = n_docs;
}

void FeatureDictionary::write(std::ostream& os) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    os << i << '\t' << entries_[i].feature << '\t' << entries_[i].frequency << '\n';
  }
}

FeatureDictionary FeatureDictionary::read(std::istream& is, FeatureKind kind) {
  std::vector<Entry> entries;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = [&] {
      std::vector<std::string> out;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      return out;
    }();
    if (fields.size() != 3) throw InputError("feature line '" + line + "': expected 3 fields");
    try {
      if (std::stoull(fields[0]) != entries.size()) {
        throw InputError("feature line '" + line + "': index out of sequence");
      }
      entries.push_back({fields[1], std::stoull(fields[2])});
    } catch (const std::logic_error&) {
      throw InputError("feature line '" + line + "': bad number");
    }
  }
  return FeatureDictionary(kind, std::move(entries));
}

// ---------------------------------------------------------------------------
// Learn configuration

void LearnConfig::validate() const {
  params.validate();
  if (stop_threshold < 1) throw ConfigError("stop_threshold must be at least 1");
  if (affix_threshold < 1) throw ConfigError("affix_threshold must be at least 1");
  if (feature_threshold <= 2) throw ConfigError("feature_threshold must be higher than 2");
  if (!(stop_fraction >= 0.0 && stop_fraction < 1.0)) {
    throw ConfigError("stop_fraction must lie in [0, 1)");
  }
  if (min_affix_len < 1 || min_affix_len > params.max_affix_len) {
    throw ConfigError("min_affix_len must lie in [1, max_affix_len]");
  }
}

namespace {

std::set<std::string> to_set(const std::vector<std::string>& items) {
  return {items.begin(), items.end()};
}

std::vector<std::string> to_vector(const std::set<std::string>& items) {
  return {items.begin(), items.end()};
}

}  // namespace

LearnConfig LearnConfig::from(const KeyValueConfig& kv) {
  LearnConfig cfg;
  const auto profile = kv.get_string("profile", "german");
  if (profile == "german") {
    cfg.params = LinguisticParams::german();
  } else if (profile == "english") {
    cfg.params = LinguisticParams::english();
  } else {
    throw ConfigError("unknown profile '" + profile + "' (expected german|english)");
  }
  auto& p = cfg.params;
  if (kv.has("vowels")) {
    p.vowels.clear();
    for (const auto& v : kv.get_list("vowels", {})) {
      const auto cps = utf8::decode(v);
      if (cps.size() != 1) throw ConfigError("vowel '" + v + "' is not a single character");
      p.vowels.insert(cps.front());
    }
  }
  if (kv.has("consonant_clusters")) p.consonant_clusters = to_set(kv.get_list("consonant_clusters", {}));
  if (kv.has("formative_elements")) p.formative_elements = to_set(kv.get_list("formative_elements", {}));
  p.min_chars = kv.get_uint("min_chars", p.min_chars);
  p.max_affix_len = kv.get_uint("max_affix_len", p.max_affix_len);

  cfg.stop_threshold = kv.get_uint("stop_threshold", cfg.stop_threshold);
  cfg.stop_fraction = kv.get_double("stop_fraction", cfg.stop_fraction);
  cfg.affix_threshold = kv.get_uint("affix_threshold", cfg.affix_threshold);
  cfg.feature_threshold = kv.get_uint("feature_threshold", cfg.feature_threshold);
  cfg.min_affix_len = kv.get_uint("min_affix_len", cfg.min_affix_len);
  cfg.affix_top = kv.get_uint("affix_top", cfg.affix_top);
  cfg.include_prefixes = to_set(kv.get_list("include_prefixes", {}));
  cfg.include_suffixes = to_set(kv.get_list("include_suffixes", {}));
  cfg.exclude_affixes = to_set(kv.get_list("exclude_affixes", {}));
  cfg.validate();
  return cfg;
}

void LearnConfig::write(KeyValueConfig& kv) const {
  std::vector<std::string> vowel_list;
  for (char32_t cp : params.vowels) vowel_list.push_back(utf8::encode(cp));
  kv.set_list("vowels", vowel_list);
  kv.set_list("consonant_clusters", to_vector(params.consonant_clusters));
  kv.set_list("formative_elements", to_vector(params.formative_elements));
  kv.set("min_chars", std::to_string(params.min_chars));
  kv.set("max_affix_len", std::to_string(params.max_affix_len));
  kv.set("stop_threshold", std::to_string(stop_threshold));
  if (stop_fraction > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", stop_fraction);
    kv.set("stop_fraction", buf);
  }
  kv.set("affix_threshold", std::to_string(affix_threshold));
  kv.set("feature_threshold", std::to_string(feature_threshold));
  kv.set("min_affix_len", std::to_string(min_affix_len));
  kv.set("affix_top", std::to_string(affix_top));
  kv.set_list("include_prefixes", to_vector(include_prefixes));
  kv.set_list("include_suffixes", to_vector(include_suffixes));
  kv.set_list("exclude_affixes", to_vector(exclude_affixes));
}

// ---------------------------------------------------------------------------
// Stop words and affixes

StopWordDictionary find_stop_words(const WordFormList& list, std::uint64_t threshold) {
  if (threshold < 1) throw ConfigError("stop word threshold must be at least 1");
  StopWordDictionary dict;
  dict.threshold_used = threshold;
  for (const auto& [form, freq] : list.entries()) {
    if (freq >= threshold) dict.words.insert(form);
  }
  return dict;
}

WordFormList remove_stop_words(const WordFormList& list, const StopWordDictionary& stop) {
  WordFormList::Map kept;
  for (const auto& [form, freq] : list.entries()) {
    if (!stop.contains(form)) kept.emplace(form, freq);
  }
  return WordFormList(std::move(kept));
}

namespace {

using CountMap = std::map<std::string, std::uint64_t, std::less<>>;

// Candidates above threshold, excluding whole frequent forms, capped at `top`.
CountMap pick_affixes(const CountMap& counts, const WordFormList& list, const LearnConfig& config,
                      const std::set<std::string>& include) {
  std::vector<std::pair<std::string, std::uint64_t>> ranked;
  for (const auto& [candidate, count] : counts) {
    if (count < config.affix_threshold) continue;
    if (config.exclude_affixes.count(candidate)) continue;
    if (list.frequency(candidate) >= config.affix_threshold) continue;
    ranked.emplace_back(candidate, count);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (config.affix_top > 0 && ranked.size() > config.affix_top) ranked.resize(config.affix_top);
  CountMap out(ranked.begin(), ranked.end());
  for (const auto& manual : include) {
    const auto it = counts.find(manual);
    out[manual] = it == counts.end() ? 0 : it->second;
  }
  return out;
}

}  // namespace

AffixSet find_affixes(const WordFormList& list, const LearnConfig& config) {
  const auto& params = config.params;
  if (params.max_affix_len < 1) throw ConfigError("max_affix_len must be at least 1");
  CountMap prefix_counts;
  CountMap suffix_counts;
  for (const auto& [form, freq] : list.entries()) {
    const auto cuts = utf8::boundaries(form);
    const std::size_t n = cuts.size() - 1;
    // Proper boundary substrings only: an affix never covers the whole form.
    const std::size_t longest = std::min(params.max_affix_len, n == 0 ? 0 : n - 1);
    for (std::size_t k = config.min_affix_len; k <= longest; ++k) {
      prefix_counts[form.substr(0, cuts[k])] += freq;
      suffix_counts[form.substr(cuts[n - k])] += freq;
    }
  }
  AffixSet affixes;
  affixes.prefixes = pick_affixes(prefix_counts, list, config, config.include_prefixes);
  affixes.suffixes = pick_affixes(suffix_counts, list, config, config.include_suffixes);
  return affixes;
}

// ---------------------------------------------------------------------------
// Iterative splitting

namespace {

struct SplitChoice {
  std::size_t cut = 0;  // byte offset
  bool at_front = true;
};

class ValidityCache {
 public:
  explicit ValidityCache(const LinguisticParams& params) : params_(params) {}
  bool operator()(std::string_view form) {
    auto it = cache_.find(form);
    if (it == cache_.end()) it = cache_.emplace(std::string(form), is_valid_form(form, params_)).first;
    return it->second;
  }

 private:
  const LinguisticParams& params_;
  std::map<std::string, bool, std::less<>> cache_;
};

// Longest list member at the front whose remainder is valid; otherwise the
// longest member at the back.
std::optional<SplitChoice> choose_split(const std::string& whole, const WordFormList& list,
                                        ValidityCache& valid, std::uint64_t& comparisons) {
  const auto cuts = utf8::boundaries(whole);
  const std::size_t n = cuts.size() - 1;
  if (n < 2) return std::nullopt;
  const std::string_view w(whole);

  auto acceptable = [&](std::string_view part, std::string_view rest) {
    return valid(part) && valid(rest);
  };

  // Either probe each proper boundary substring or scan all list members,
  // whichever needs fewer substring tests. Both produce the same choice.
  const std::uint64_t probe_cost = 2 * (n - 1);
  const std::uint64_t scan_cost = list.size() - 1;
  if (probe_cost <= scan_cost) {
    for (std::size_t k = n - 1; k >= 1; --k) {
      ++comparisons;
      const auto part = w.substr(0, cuts[k]);
      if (list.contains(part) && acceptable(part, w.substr(cuts[k]))) return SplitChoice{cuts[k], true};
    }
    for (std::size_t k = 1; k <= n - 1; ++k) {
      ++comparisons;
      const auto part = w.substr(cuts[k]);
      if (list.contains(part) && acceptable(part, w.substr(0, cuts[k]))) return SplitChoice{cuts[k], false};
    }
    return std::nullopt;
  }

  std::optional<SplitChoice> front;
  std::optional<SplitChoice> back;
  for (const auto& [member, freq] : list.entries()) {
    if (member.size() >= whole.size()) {
      if (member != whole) ++comparisons;
      continue;
    }
    ++comparisons;
    const std::string_view m(member);
    if (w.substr(0, m.size()) == m && acceptable(m, w.substr(m.size()))) {
      if (!front || m.size() > front->cut) front = SplitChoice{m.size(), true};
    }
    if (w.substr(w.size() - m.size()) == m && acceptable(m, w.substr(0, w.size() - m.size()))) {
      const std::size_t cut = w.size() - m.size();
      if (!back || cut < back->cut) back = SplitChoice{cut, false};
    }
  }
  return front ? front : back;
}

}  // namespace

WordFormList split_iteratively(const WordFormList& list, const LinguisticParams& params,
                               SplitStats* stats, const SplitObserver& observer) {
  WordFormList work = list;
  ValidityCache valid(params);
  SplitStats local;
  SplitStats& st = stats ? *stats : local;
  st = SplitStats{};

  for (;;) {
    std::vector<std::pair<std::size_t, std::string>> order;
    order.reserve(work.size());
    for (const auto& [form, freq] : work.entries()) order.emplace_back(grapheme_length(form, params), form);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });

    std::uint64_t comparisons = 0;
    std::size_t largest = work.size();
    std::size_t splits_this_pass = 0;
    for (const auto& [glen, whole] : order) {
      if (!work.contains(whole)) continue;
      const auto choice = choose_split(whole, work, valid, comparisons);
      if (!choice) continue;
      const std::string part = choice->at_front ? whole.substr(0, choice->cut) : whole.substr(choice->cut);
      const std::string rest = choice->at_front ? whole.substr(choice->cut) : whole.substr(0, choice->cut);

      SplitEvent event;
      event.whole = whole;
      event.part = part;
      event.rest = rest;
      event.whole_freq = work.remove(whole);
      event.part_freq_before = work.frequency(part);
      work.add(part, event.whole_freq);
      event.part_freq_after = work.frequency(part);
      event.rest_freq_before = work.frequency(rest);
      work.add(rest, event.whole_freq);
      event.rest_freq_after = work.frequency(rest);
      largest = std::max(largest, work.size());
      ++splits_this_pass;
      if (observer) observer(event);
    }
    ++st.passes;
    st.splits += splits_this_pass;
    st.comparisons.push_back(comparisons);
    st.pass_list_size.push_back(largest);
    if (splits_this_pass == 0) break;
  }
  return work;
}

// ---------------------------------------------------------------------------
// Affix elimination and formative elements

namespace {

// Longest affix of `affixes` found at the chosen end of `form` whose removal
// leaves a valid form. Returns the shortened form or nullopt.
std::optional<std::string> strip_one(const std::string& form, const CountMap& affixes, bool suffix,
                                     const LinguisticParams& params) {
  std::optional<std::string> best;
  std::size_t best_len = 0;
  for (const auto& [affix, count] : affixes) {
    if (affix.empty() || affix.size() >= form.size() || affix.size() <= best_len) continue;
    const bool matches = suffix ? form.compare(form.size() - affix.size(), affix.size(), affix) == 0
                                : form.compare(0, affix.size(), affix) == 0;
    if (!matches) continue;
    std::string rest = suffix ? form.substr(0, form.size() - affix.size()) : form.substr(affix.size());
    if (!utf8::valid(rest) || !is_valid_form(rest, params)) continue;
    best = std::move(rest);
    best_len = affix.size();
  }
  return best;
}

}  // namespace

WordFormList strip_affixes(const WordFormList& list, const AffixSet& affixes,
                           const LinguisticParams& params) {
  WordFormList out;
  for (const auto& [form, freq] : list.entries()) {
    std::string current = form;
    for (;;) {
      if (auto s = strip_one(current, affixes.suffixes, true, params)) {
        current = std::move(*s);
      } else if (auto p = strip_one(current, affixes.prefixes, false, params)) {
        current = std::move(*p);
      } else {
        break;
      }
    }
    out.add(current, freq);
  }
  return out;
}

WordFormList merge_formative_variants(const WordFormList& list, const LinguisticParams& params) {
  if (params.formative_elements.empty()) return list;
  WordFormList work = list;
  std::vector<std::string> order;
  order.reserve(list.size());
  for (const auto& [form, freq] : list.entries()) order.push_back(form);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.size() > b.size() || (a.size() == b.size() && a < b);
  });
  for (const auto& form : order) {
    if (!work.contains(form)) continue;
    std::optional<std::string> base;
    for (const auto& element : params.formative_elements) {
      if (element.size() >= form.size()) continue;
      if (form.compare(form.size() - element.size(), element.size(), element) == 0) {
        auto candidate = form.substr(0, form.size() - element.size());
        if (work.contains(candidate)) {
          base = std::move(candidate);
          break;
        }
      }
    }
    if (!base) {
      for (const auto& element : params.formative_elements) {
        if (element.size() >= form.size()) continue;
        if (form.compare(0, element.size(), element) == 0) {
          auto candidate = form.substr(element.size());
          if (work.contains(candidate)) {
            base = std::move(candidate);
            break;
          }
        }
      }
    }
    if (base) work.add(*base, work.remove(form));
  }
  return work;
}

// ---------------------------------------------------------------------------
// Feature selection and the full chain

FeatureDictionary select_features(const WordFormList& list, std::uint64_t threshold,
                                  const LinguisticParams& params, const StopWordDictionary* stop) {
  if (threshold <= 2) throw ConfigError("feature threshold must be higher than 2");
  std::vector<FeatureDictionary::Entry> entries;
  for (const auto& [form, freq] : list.by_frequency()) {
    if (freq < threshold) break;
    if (stop && stop->contains(form)) continue;
    if (!is_valid_form(form, params)) continue;
    entries.push_back({form, freq});
  }
  return FeatureDictionary(FeatureKind::learned, std::move(entries));
}

void LearnReport::write(std::ostream& os) const {
  os << "tokens\t" << tokens << '\n'
     << "wordforms\t" << wordforms << '\n'
     << "stop_words\t" << stop_words << '\n'
     << "after_stop_removal\t" << after_stop_removal << '\n'
     << "prefixes\t" << prefixes << '\n'
     << "suffixes\t" << suffixes << '\n'
     << "splits\t" << split.splits << '\n'
     << "split_passes\t" << split.passes << '\n'
     << "after_split\t" << after_split << '\n'
     << "after_strip\t" << after_strip << '\n'
     << "after_merge\t" << after_merge << '\n'
     << "features\t" << features << '\n';
}

LearnedDictionaries learn_dictionaries(const LabeledCorpus& corpus, const LearnConfig& config) {
  config.validate();
  LearnedDictionaries out;
  auto& report = out.report;

  const WordFormList forms = build_wordform_list(corpus);
  report.tokens = forms.total();
  report.wordforms = forms.size();

  std::uint64_t stop_threshold = config.stop_threshold;
  if (config.stop_fraction > 0.0) {
    stop_threshold = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(config.stop_fraction * static_cast<double>(report.tokens))));
  }
  out.stop = find_stop_words(forms, stop_threshold);
  report.stop_words = out.stop.words.size();

  WordFormList work = remove_stop_words(forms, out.stop);
  report.after_stop_removal = work.size();

  out.affixes = find_affixes(work, config);
  report.prefixes = out.affixes.prefixes.size();
  report.suffixes = out.affixes.suffixes.size();

  work = split_iteratively(work, config.params, &report.split);
  report.after_split = work.size();

  work = strip_affixes(work, out.affixes, config.params);
  report.after_strip = work.size();

  work = merge_formative_variants(work, config.params);
  report.after_merge = work.size();

  out.features = select_features(work, config.feature_threshold, config.params, &out.stop);
  report.features = out.features.size();
  out.final_forms = std::move(work);
  if (out.features.empty()) {
    throw ConfigError("feature dictionary is empty: no final form reaches feature_threshold " +
                      std::to_string(config.feature_threshold));
  }
  return out;
}

}  // namespace textcat
