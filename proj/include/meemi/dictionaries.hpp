// Translation dictionaries: loading n-column TSV files, joining bilingual
// dictionaries through a shared pivot, seeded subsampling and splitting, and
// extraction of the paired training matrices consumed by the aligners.
#pragma once

#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "meemi/embeddings.hpp"
#include "meemi/rng.hpp"
#include "meemi/types.hpp"

namespace meemi {

// Reads an n-column dictionary (tab- or space-separated, one tuple per line).
// Fully duplicated lines are dropped.
inline TranslationDictionary load_dictionary(const std::string& path,
                                             std::vector<std::string> langs) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dictionary file: " + path);
  std::vector<std::vector<std::string>> tuples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_ws(line);
    if (fields.size() != langs.size())
      throw data_error(path + ": line " + std::to_string(lineno) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(langs.size()));
    tuples.push_back(std::move(fields));
  }
  return TranslationDictionary(std::move(langs), std::move(tuples));
}

inline void save_dictionary(const TranslationDictionary& dict, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path);
  for (const auto& tuple : dict.tuples()) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out << '\t';
      out << tuple[i];
    }
    out << '\n';
  }
  if (!out) throw data_error("write failed: " + path);
}

// Joins bilingual dictionaries that share their second language (the pivot)
// into one multilingual dictionary with the pivot last. A tuple is emitted
// for every pivot word translated in every input; when a pivot word has
// several translations in some input, the first-listed one is used.
inline TranslationDictionary join_on_pivot(const std::vector<TranslationDictionary>& bis) {
  if (bis.size() < 2) throw data_error("pivot join needs at least two dictionaries");
  const std::string& pivot = bis.front().langs()[1];
  for (const auto& bi : bis) {
    if (bi.arity() != 2) throw data_error("pivot join expects bilingual dictionaries");
    if (bi.langs()[1] != pivot)
      throw data_error("mismatched pivot labels: '" + bi.langs()[1] + "' vs '" + pivot + "'");
  }

  std::vector<std::unordered_map<std::string, std::string>> first_translation(bis.size());
  for (std::size_t i = 0; i < bis.size(); ++i)
    for (const auto& tuple : bis[i].tuples())
      first_translation[i].emplace(tuple[1], tuple[0]);

  std::vector<std::string> langs;
  for (const auto& bi : bis) langs.push_back(bi.langs()[0]);
  langs.push_back(pivot);

  // Pivot words in first-dictionary order.
  std::vector<std::vector<std::string>> tuples;
  std::unordered_set<std::string> emitted;
  for (const auto& tuple : bis.front().tuples()) {
    const std::string& p = tuple[1];
    if (!emitted.insert(p).second) continue;
    std::vector<std::string> row;
    row.reserve(bis.size() + 1);
    bool complete = true;
    for (const auto& map : first_translation) {
      auto it = map.find(p);
      if (it == map.end()) {
        complete = false;
        break;
      }
      row.push_back(it->second);
    }
    if (!complete) continue;
    row.push_back(p);
    tuples.push_back(std::move(row));
  }
  return TranslationDictionary(std::move(langs), std::move(tuples));
}

// Uniform sample of `size` tuples without replacement, deterministic for a
// fixed seed. The sampled tuples keep their original relative order.
inline TranslationDictionary subsample(const TranslationDictionary& dict, std::size_t size,
                                       std::uint64_t seed) {
  if (size > dict.size())
    throw data_error("requested " + std::to_string(size) + " tuples from a dictionary of " +
                     std::to_string(dict.size()));
  rng::Generator gen(seed);
  const auto idx = gen.sample_without_replacement(dict.size(), size);
  std::vector<std::vector<std::string>> tuples;
  tuples.reserve(size);
  for (const std::size_t i : idx) tuples.push_back(dict.tuples()[i]);
  return TranslationDictionary(dict.langs(), std::move(tuples));
}

// Seeded split into (train, test) with `test_fraction` of the tuples held
// out. Both halves keep original relative order.
inline std::pair<TranslationDictionary, TranslationDictionary> split_dictionary(
    const TranslationDictionary& dict, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw data_error("test fraction must lie in [0, 1)");
  const std::size_t n = dict.size();
  const std::size_t n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(n));
  rng::Generator gen(seed);
  const auto test_idx = gen.sample_without_replacement(n, n_test);
  std::vector<bool> is_test(n, false);
  for (const std::size_t i : test_idx) is_test[i] = true;
  std::vector<std::vector<std::string>> train, test;
  for (std::size_t i = 0; i < n; ++i)
    (is_test[i] ? test : train).push_back(dict.tuples()[i]);
  return {TranslationDictionary(dict.langs(), std::move(train)),
          TranslationDictionary(dict.langs(), std::move(test))};
}

// Builds the numeric training matrices for columns (src_col, tgt_col) of the
// dictionary. Tuples with a word missing from either vocabulary are skipped
// and counted; surviving rows follow tuple order.
template <class Scalar>
PairedMatrices<Scalar> build_pairs(const TranslationDictionary& dict,
                                   const EmbeddingSpace<Scalar>& src,
                                   const EmbeddingSpace<Scalar>& tgt, std::size_t src_col,
                                   std::size_t tgt_col) {
  if (src_col >= dict.arity() || tgt_col >= dict.arity())
    throw data_error("dictionary column out of range");
  if (!src.lang().empty() && src.lang() != dict.langs()[src_col])
    throw data_error("source space is '" + src.lang() + "' but dictionary column " +
                     std::to_string(src_col) + " is '" + dict.langs()[src_col] + "'");
  if (!tgt.lang().empty() && tgt.lang() != dict.langs()[tgt_col])
    throw data_error("target space is '" + tgt.lang() + "' but dictionary column " +
                     std::to_string(tgt_col) + " is '" + dict.langs()[tgt_col] + "'");

  PairedMatrices<Scalar> out;
  for (const auto& tuple : dict.tuples()) {
    const auto si = src.find(tuple[src_col]);
    const auto ti = tgt.find(tuple[tgt_col]);
    if (si && ti) {
      out.src_ids.push_back(*si);
      out.tgt_ids.push_back(*ti);
    } else {
      ++out.skipped_oov;
    }
  }
  out.kept = static_cast<Index>(out.src_ids.size());
  if (out.kept == 0)
    throw data_error("no dictionary tuple survives vocabulary lookup (" +
                     std::to_string(out.skipped_oov) + " skipped)");
  out.A.resize(out.kept, src.dim());
  out.B.resize(out.kept, tgt.dim());
  for (Index i = 0; i < out.kept; ++i) {
    out.A.row(i) = src.row(out.src_ids[static_cast<std::size_t>(i)]);
    out.B.row(i) = tgt.row(out.tgt_ids[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace meemi
