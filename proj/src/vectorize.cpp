#include "textcat/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "textcat/error.hpp"
#include "textcat/utf8.hpp"

namespace textcat {

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::binary:
      return "binary";
    case Weighting::frequency:
      return "frequency";
    case Weighting::idf:
      return "idf";
  }
  return "binary";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "binary") return Weighting::binary;
  if (name == "frequency") return Weighting::frequency;
  if (name == "idf") return Weighting::idf;
  throw ConfigError("unknown weighting '" + std::string(name) + "' (expected binary|frequency|idf)");
}

std::string_view to_string(MatchPolicy m) { return m == MatchPolicy::longest ? "longest" : "all"; }

MatchPolicy parse_match_policy(std::string_view name) {
  if (name == "longest") return MatchPolicy::longest;
  if (name == "all") return MatchPolicy::all;
  throw ConfigError("unknown match policy '" + std::string(name) + "' (expected longest|all)");
}

std::vector<std::string> word_trigrams(std::string_view form) {
  std::u32string padded = U"_" + utf8::decode(form) + U"_";
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) out.push_back(utf8::encode(padded.substr(i, 3)));
  return out;
}

std::vector<std::string> match_features(std::string_view form, const FeatureDictionary& feats,
                                        MatchPolicy policy) {
  std::vector<std::string> out;
  if (feats.kind() == FeatureKind::trigram) {
    for (auto& tri : word_trigrams(form)) {
      if (feats.index_of(tri)) out.push_back(std::move(tri));
    }
    return out;
  }

  const auto cuts = utf8::boundaries(form);
  const std::size_t n = cuts.size() - 1;
  const std::size_t max_len = std::min(n, feats.max_feature_length());
  if (policy == MatchPolicy::longest) {
    // Longest length first, then earliest start: the first hit wins. At a
    // fixed (length, start) the substring is unique, so the lexicographic
    // tie-break never has to decide.
    for (std::size_t len = max_len; len >= 1; --len) {
      for (std::size_t start = 0; start + len <= n; ++start) {
        const auto sub = form.substr(cuts[start], cuts[start + len] - cuts[start]);
        if (feats.index_of(sub)) return {std::string(sub)};
      }
    }
    return out;
  }

  std::vector<std::pair<std::size_t, std::string>> hits;
  for (std::size_t start = 0; start < n; ++start) {
    for (std::size_t len = 1; len <= max_len && start + len <= n; ++len) {
      const auto sub = form.substr(cuts[start], cuts[start + len] - cuts[start]);
      if (feats.index_of(sub)) hits.emplace_back(start, std::string(sub));
    }
  }
  for (auto& [pos, sub] : hits) {
    if (std::find(out.begin(), out.end(), sub) == out.end()) out.push_back(std::move(sub));
  }
  return out;
}

std::vector<std::string> to_feature_text(std::string_view text, const StopWordDictionary& stop,
                                         const FeatureDictionary& feats, MatchPolicy policy) {
  std::vector<std::string> out;
  std::map<std::string, std::vector<std::string>, std::less<>> cache;
  for (const auto& form : tokenize(text)) {
    if (stop.contains(form)) continue;
    auto it = cache.find(form);
    if (it == cache.end()) it = cache.emplace(form, match_features(form, feats, policy)).first;
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

FeatureVector to_vector(const std::vector<std::string>& feature_text, const FeatureDictionary& feats,
                        Weighting weighting) {
  FeatureVector v;
  v.weighting = weighting;
  v.values.assign(feats.size(), 0.0);
  for (const auto& f : feature_text) {
    const auto idx = feats.index_of(f);
    if (!idx) throw InputError("feature '" + f + "' is not in the dictionary");
    v.values[*idx] += 1.0;
  }
  switch (weighting) {
    case Weighting::binary:
      for (auto& x : v.values) x = x > 0.0 ? 1.0 : 0.0;
      break;
    case Weighting::frequency:
      break;
    case Weighting::idf: {
      const auto& df = feats.document_frequencies();
      if (df.size() != feats.size() || feats.document_count() == 0) {
        throw ConfigError("idf weighting needs training document frequencies in the dictionary");
      }
      const auto n = static_cast<double>(feats.document_count());
      for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (v.values[i] == 0.0) continue;
        // Features absent from every training document carry the maximal weight.
        const double d = std::max<double>(1.0, static_cast<double>(df[i]));
        v.values[i] *= std::log(n / d);
      }
      break;
    }
  }
  return v;
}

std::vector<std::uint64_t> document_frequencies(const std::vector<std::vector<std::string>>& feature_texts,
                                                const FeatureDictionary& feats) {
  std::vector<std::uint64_t> df(feats.size(), 0);
  std::vector<std::size_t> last_seen(feats.size(), SIZE_MAX);
  for (std::size_t d = 0; d < feature_texts.size(); ++d) {
    for (const auto& f : feature_texts[d]) {
      const auto idx = feats.index_of(f);
      if (!idx) throw InputError("feature '" + f + "' is not in the dictionary");
      if (last_seen[*idx] != d) {
        last_seen[*idx] = d;
        ++df[*idx];
      }
    }
  }
  return df;
}

FeatureDictionary trigram_features(const LabeledCorpus& corpus, const StopWordDictionary& stop,
                                   std::size_t m, std::size_t* short_by) {
  if (m < 1) throw ConfigError("trigram count must be at least 1");
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& doc : corpus.documents()) {
    for (const auto& form : tokenize(doc.text)) {
      if (stop.contains(form)) continue;
      for (auto& tri : word_trigrams(form)) ++counts[tri];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (short_by) *short_by = ranked.size() < m ? m - ranked.size() : 0;
  if (ranked.size() > m) ranked.resize(m);
  std::vector<FeatureDictionary::Entry> entries;
  entries.reserve(ranked.size());
  for (auto& [tri, count] : ranked) entries.push_back({std::move(tri), count});
  return FeatureDictionary(FeatureKind::trigram, std::move(entries));
}

void write_feature_text_dump(std::ostream& os, std::string_view text, const StopWordDictionary& stop,
                             const FeatureDictionary& feats, MatchPolicy policy) {
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    os << line << '\n' << ">>";
    for (const auto& f : to_feature_text(line, stop, feats, policy)) os << ' ' << f;
    os << '\n';
  }
}

void write_vector_dump_line(std::ostream& os, std::string_view doc_id, std::string_view label,
                            const FeatureVector& v) {
  os << doc_id << '\t' << label << '\t';
  char buf[32];
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v.values[i]);
    if (i) os << ' ';
    os << buf;
  }
  os << '\n';
}

}  // namespace textcat
